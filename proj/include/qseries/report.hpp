#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qseries/identities.hpp"
#include "qseries/point.hpp"
#include "qseries/sampling.hpp"
#include "qseries/types.hpp"

namespace qseries {

inline constexpr const char* kReportVersion = "1.0";

/// "re+imi" with round-trip precision.
inline std::string complex_string(QComplex z)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

inline nlohmann::json complex_json(QComplex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json point_json(const ParameterPoint& p)
{
    nlohmann::json j;
    j["q"] = p.q().value();
    for (Slot s : p.set_slots())
        j[std::string(slot_name(s))] = complex_json(p[s]);
    if (p.n)
        j["n"] = *p.n;
    if (p.m)
        j["m"] = *p.m;
    if (p.theta)
        j["theta"] = *p.theta;
    return j;
}

/// One record; wall time is left out so that records are reproducible.
inline nlohmann::json record_json(const IdentityReport& r)
{
    nlohmann::json j;
    j["id"] = r.id;
    j["index"] = r.index;
    j["point"] = point_json(r.point);
    j["lhs"] = complex_json(r.lhs);
    j["rhs"] = complex_json(r.rhs);
    j["rel_error"] = r.rel_error;
    j["lhs_err"] = r.lhs_err;
    j["rhs_err"] = r.rhs_err;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["heuristic"] = r.heuristic;
    j["experimental"] = r.experimental;
    if (!r.error.empty())
        j["error"] = r.error;
    return j;
}

struct ReportSummary {
    std::size_t total = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double max_rel_error = 0.0;
};

inline ReportSummary summarize(const std::vector<IdentityReport>& records)
{
    ReportSummary s;
    s.total = records.size();
    for (const auto& r : records) {
        (r.pass ? s.passed : s.failed) += 1;
        if (std::isfinite(r.rel_error))
            s.max_rel_error = std::max(s.max_rel_error, r.rel_error);
    }
    return s;
}

/// Orders records by (id, index), the order reports are written in.
inline void sort_records(std::vector<IdentityReport>& records)
{
    std::stable_sort(records.begin(), records.end(), [](const IdentityReport& x, const IdentityReport& y) {
        return x.id != y.id ? x.id < y.id : x.index < y.index;
    });
}

/// {header: {version, seed, config, timings}, records: [...], summary: {...}}.
/// Timings are the only run-dependent part and live in the header.
inline nlohmann::json report_json(const std::vector<IdentityReport>& records, std::uint64_t seed,
                                  const nlohmann::json& config, double total_seconds)
{
    nlohmann::json j;
    j["header"]["version"] = kReportVersion;
    j["header"]["seed"] = seed;
    j["header"]["config"] = config;
    nlohmann::json timings = nlohmann::json::array();
    for (const auto& r : records)
        timings.push_back({{"id", r.id}, {"index", r.index}, {"seconds", r.wall_time}});
    j["header"]["timings"] = {{"total_seconds", total_seconds}, {"records", timings}};
    j["records"] = nlohmann::json::array();
    for (const auto& r : records)
        j["records"].push_back(record_json(r));
    const ReportSummary s = summarize(records);
    j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"max_rel_error", s.max_rel_error}};
    return j;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string point_string(const ParameterPoint& p)
{
    std::ostringstream os;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p.q().value());
    os << "q=" << buf;
    for (Slot s : p.set_slots())
        os << ' ' << slot_name(s) << '=' << complex_string(p[s]);
    if (p.n)
        os << " n=" << *p.n;
    if (p.m)
        os << " m=" << *p.m;
    if (p.theta) {
        std::snprintf(buf, sizeof buf, "%.17g", *p.theta);
        os << " theta=" << buf;
    }
    return os.str();
}

inline constexpr const char* kCsvHeader =
    "id,index,point,lhs,rhs,rel_error,lhs_err,rhs_err,tolerance,pass,heuristic,experimental,error";

/// One row per record under the fixed kCsvHeader.
inline std::string report_csv(const std::vector<IdentityReport>& records)
{
    std::ostringstream os;
    os << kCsvHeader << '\n';
    char buf[40];
    auto num = [&buf](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (const auto& r : records) {
        os << csv_escape(r.id) << ',' << r.index << ',' << csv_escape(point_string(r.point)) << ','
           << complex_string(r.lhs) << ',' << complex_string(r.rhs) << ',' << num(r.rel_error) << ','
           << num(r.lhs_err) << ',' << num(r.rhs_err) << ',' << num(r.tolerance) << ','
           << (r.pass ? "true" : "false") << ',' << (r.heuristic ? "true" : "false") << ','
           << (r.experimental ? "true" : "false") << ',' << csv_escape(r.error) << '\n';
    }
    return os.str();
}

} // namespace qseries
