#pragma once

#include <fnmatch.h>

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qseries/errors.hpp"
#include "qseries/identities.hpp"
#include "qseries/report.hpp"
#include "qseries/sampling.hpp"

namespace qseries {

/// What a `check` run covers.
struct RunConfig {
    /// Globs over identity ids ("aw-*", "thm6?").
    std::vector<std::string> patterns{"*"};
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    std::optional<double> tolerance;
    SampleConfig sampling;
    /// Also run the registered reductions whose parent or child is selected.
    bool reductions = false;
    int jobs = 1;

    void validate() const
    {
        if (samples < 1)
            throw domain_error("samples must be at least 1");
        if (jobs < 1)
            throw domain_error("jobs must be at least 1");
        if (tolerance && !(*tolerance > 0.0))
            throw domain_error("tolerance must be positive");
        sampling.validate();
    }
};

inline bool glob_match(const std::string& pattern, const std::string& text)
{
    return fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

/// Identities matching any pattern, in registry order. A pattern that matches
/// nothing is an error.
inline std::vector<const IdentitySpec*> select_identities(const std::vector<std::string>& patterns)
{
    std::vector<const IdentitySpec*> out;
    for (const auto& pat : patterns) {
        bool any = false;
        for (const auto& s : registry())
            if (glob_match(pat, s.id)) {
                any = true;
                if (std::find(out.begin(), out.end(), &s) == out.end())
                    out.push_back(&s);
            }
        if (!any)
            throw unknown_identity("unknown identity '" + pat + "'");
    }
    std::stable_sort(out.begin(), out.end(), [](const IdentitySpec* a, const IdentitySpec* b) {
        return a - registry().data() < b - registry().data();
    });
    return out;
}

inline nlohmann::json config_json(const RunConfig& cfg)
{
    nlohmann::json j;
    j["ids"] = cfg.patterns;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["tolerance"] = cfg.tolerance ? nlohmann::json(*cfg.tolerance) : nlohmann::json(nullptr);
    j["q"] = cfg.sampling.qs;
    j["cap"] = cfg.sampling.cap;
    j["floor"] = cfg.sampling.floor;
    j["profile"] = cfg.sampling.profile == Profile::real ? "real" : "complex";
    j["reductions"] = cfg.reductions;
    return j;
}

/// Reduction record at sample `index` of the child identity.
inline IdentityReport run_reduction(const Reduction& red, const RunConfig& cfg, std::size_t index)
{
    IdentityReport rep;
    rep.id = red.parent + "->" + red.child;
    rep.index = index;
    rep.tolerance = cfg.tolerance.value_or(red.default_tolerance);
    try {
        rep.point = sample_point(find_identity(red.child), cfg.sampling, cfg.seed, index);
        rep = reduce_check(red.parent, red.child, rep.point, cfg.tolerance.value_or(0.0));
        rep.index = index;
    } catch (const std::exception& e) {
        rep.error = e.what();
        rep.pass = false;
    }
    return rep;
}

/// Runs every selected (identity, sample) pair, fanned out over cfg.jobs
/// workers, and returns the records sorted by (id, index).
inline std::vector<IdentityReport> run_suite(const RunConfig& cfg)
{
    cfg.validate();
    const auto specs = select_identities(cfg.patterns);
    std::vector<const Reduction*> reds;
    if (cfg.reductions)
        for (const auto& r : reductions())
            for (const auto* s : specs)
                if ((s->id == r.parent || s->id == r.child)
                    && std::find(reds.begin(), reds.end(), &r) == reds.end())
                    reds.push_back(&r);

    const std::size_t n_ident = specs.size() * cfg.samples;
    const std::size_t n_total = n_ident + reds.size() * cfg.samples;
    std::vector<IdentityReport> records(n_total);
    const double tol = cfg.tolerance.value_or(0.0);

    auto work = [&](std::size_t k) {
        if (k < n_ident) {
            records[k] = run_sample(*specs[k / cfg.samples], cfg.sampling, cfg.seed, k % cfg.samples, tol);
        } else {
            const std::size_t j = k - n_ident;
            records[k] = run_reduction(*reds[j / cfg.samples], cfg, j % cfg.samples);
        }
    };
    if (cfg.jobs <= 1) {
        for (std::size_t k = 0; k < n_total; ++k)
            work(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < cfg.jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n_total; k = next++)
                    work(k);
            });
    }
    sort_records(records);
    return records;
}

} // namespace qseries
