// qseries: run identity checks, evaluate single quantities, list the catalogue.
//
// Exit status: 0 all checks pass, 1 some identity failed, 2 usage or config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qseries/qseries.hpp"

using namespace qseries;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& s, const std::string& what)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw usage_error("cannot read " + what + " from '" + s + "'");
    }
}

// "0.3", "-0.2+0.1i", "0.5i", "(0.2,-0.1)"
QComplex parse_complex(std::string s)
{
    s = trim(s);
    if (s.empty())
        throw usage_error("empty complex value");
    if (s.front() == '(' && s.back() == ')') {
        const auto parts = split(s.substr(1, s.size() - 2), ',');
        if (parts.size() != 2)
            throw usage_error("cannot read complex value '" + s + "'");
        return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
    }
    if (s.back() != 'i')
        return {parse_double(s, "value"), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not an exponent sign
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            const std::string im = body.substr(k);
            return {parse_double(body.substr(0, k), "real part"),
                    im == "+" || im == "-" ? (im == "+" ? 1.0 : -1.0) : parse_double(im, "imaginary part")};
        }
    }
    if (body.empty() || body == "+" || body == "-")
        return {0.0, body == "-" ? -1.0 : 1.0};
    return {0.0, parse_double(body, "imaginary part")};
}

std::vector<QComplex> parse_complex_list(const std::string& s)
{
    std::vector<QComplex> out;
    // commas inside parentheses belong to the value
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(')
            ++depth;
        if (c == ')')
            --depth;
        if (c == ',' && depth == 0) {
            if (!trim(cur).empty())
                out.push_back(parse_complex(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty())
        out.push_back(parse_complex(cur));
    return out;
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json result_json(const EvalResult& r)
{
    return {{"value", complex_json(r.value)},
            {"err_estimate", r.err_estimate},
            {"terms_used", r.terms_used},
            {"terminated", r.terminated},
            {"heuristic", r.heuristic}};
}

void print_result(const std::string& label, const EvalResult& r)
{
    std::cout << label << complex_string(r.value) << "  (err " << fmt(r.err_estimate) << ", terms "
              << r.terms_used << (r.heuristic ? ", heuristic" : "") << ")\n";
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
    std::string ids = "*";
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    double tol = 0.0;
    std::string qs = "0.3,0.5,0.7";
    double cap = 0.5;
    std::string profile = "real";
    std::string out;
    std::string format = "json";
    std::string config;
    int jobs = 1;
    bool reductions = false;
    bool quiet = false;
};

// key = value lines; '#' starts a comment. Keys already given on the
// command line keep their command-line value.
void apply_config_file(const std::string& path, CheckOptions& o, const CLI::App& cmd)
{
    std::ifstream in(path);
    if (!in)
        throw usage_error("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (const CLI::Option* opt = cmd.get_option_no_throw("--" + key); opt != nullptr && opt->count() > 0)
            continue;
        if (key == "ids")
            o.ids = value;
        else if (key == "samples")
            o.samples = static_cast<std::size_t>(parse_double(value, "samples"));
        else if (key == "seed")
            o.seed = std::stoull(value);
        else if (key == "tol")
            o.tol = parse_double(value, "tol");
        else if (key == "q")
            o.qs = value;
        else if (key == "cap")
            o.cap = parse_double(value, "cap");
        else if (key == "profile")
            o.profile = value;
        else if (key == "out")
            o.out = value;
        else if (key == "format")
            o.format = value;
        else if (key == "jobs")
            o.jobs = static_cast<int>(parse_double(value, "jobs"));
        else if (key == "reductions")
            o.reductions = value == "true" || value == "1";
        else
            throw usage_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
}

int cmd_check(CheckOptions o, const CLI::App& cmd)
{
    if (!o.config.empty())
        apply_config_file(o.config, o, cmd);

    RunConfig cfg;
    cfg.patterns = split(o.ids, ',');
    if (cfg.patterns.empty())
        throw usage_error("--ids is empty");
    if (o.samples < 1)
        throw usage_error("--samples must be at least 1");
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    if (o.tol > 0.0)
        cfg.tolerance = o.tol;
    cfg.sampling.qs.clear();
    for (const auto& s : split(o.qs, ','))
        cfg.sampling.qs.push_back(parse_double(s, "q"));
    cfg.sampling.cap = o.cap;
    if (o.profile == "real")
        cfg.sampling.profile = Profile::real;
    else if (o.profile == "complex")
        cfg.sampling.profile = Profile::complex;
    else
        throw usage_error("--profile must be 'real' or 'complex'");
    if (o.format != "json" && o.format != "csv")
        throw usage_error("--format must be 'json' or 'csv'");
    cfg.jobs = o.jobs;
    cfg.reductions = o.reductions;
    try {
        cfg.validate();
        (void)select_identities(cfg.patterns);
    } catch (const error& e) {
        throw usage_error(e.what());
    }

    const auto start = std::chrono::steady_clock::now();
    const auto records = run_suite(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string body = o.format == "json" ? report_json(records, cfg.seed, config_json(cfg), seconds).dump(2) + "\n"
                                                : report_csv(records);
    if (o.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f)
            throw usage_error("cannot write '" + o.out + "'");
        f << body;
    }

    const ReportSummary s = summarize(records);
    for (const auto& r : records)
        if (!r.pass) {
            std::cerr << "FAIL " << r.id << " #" << r.index << " rel_error " << fmt(r.rel_error) << " tol "
                      << fmt(r.tolerance);
            if (!r.error.empty())
                std::cerr << " : " << r.error;
            std::cerr << '\n';
        }
    if (!o.quiet)
        std::cerr << s.passed << "/" << s.total << " passed, max rel error " << fmt(s.max_rel_error) << ", "
                  << fmt(seconds) << " s\n";
    return s.failed == 0 ? 0 : kExitFail;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
    std::map<std::string, std::string> slot;
    std::optional<int> n, m;
    std::optional<double> theta, x;
    std::string q = "0.5";
    std::string order;
    std::string upper, lower, tail;
    std::string id;
    double target = 1e-15;
    bool json_out = false;
};

ParameterPoint point_from(const EvalOptions& o)
{
    ParameterPoint p(Base(parse_double(o.q, "q")));
    for (const auto& [name, value] : o.slot)
        if (!value.empty())
            p.set(*slot_from_name(name), parse_complex(value));
    p.n = o.n;
    p.m = o.m;
    p.theta = o.theta;
    return p;
}

QComplex need(const EvalOptions& o, const std::string& name)
{
    const auto it = o.slot.find(name);
    if (it == o.slot.end() || it->second.empty())
        throw usage_error("missing --" + name);
    return parse_complex(it->second);
}

int eval_identity(const EvalOptions& o)
{
    const IdentitySpec& spec = find_identity(o.id);
    const ParameterPoint p = point_from(o);
    if (auto bad = domain_violation(spec, p))
        throw domain_error(*bad);
    const IdentityReport r = check(spec.id, p);
    if (o.json_out) {
        json j = record_json(r);
        j["citation"] = spec.citation;
        j["kind"] = kind_name(spec.kind);
        j["difference"] = complex_json(r.lhs - r.rhs);
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << spec.id << " (" << spec.citation << ", " << kind_name(spec.kind) << ")\n";
        std::cout << "  lhs        " << complex_string(r.lhs) << "  (err " << fmt(r.lhs_err) << ")\n";
        std::cout << "  rhs        " << complex_string(r.rhs) << "  (err " << fmt(r.rhs_err) << ")\n";
        std::cout << "  difference " << complex_string(r.lhs - r.rhs) << "\n";
        std::cout << "  rel error  " << fmt(r.rel_error) << (r.pass ? "  pass" : "  FAIL") << "\n";
    }
    return r.pass ? 0 : kExitFail;
}

int emit(const EvalOptions& o, const EvalResult& r, json extra = json::object())
{
    if (o.json_out) {
        json j = result_json(r);
        j.update(extra);
        std::cout << j.dump(2) << '\n';
    } else {
        print_result("", r);
    }
    return 0;
}

int eval_qpoch(const EvalOptions& o)
{
    const Base q(parse_double(o.q, "q"));
    const QComplex a = need(o, "a");
    if (o.order == "inf" || o.order == "infinity")
        return emit(o, qpoch(a, q, infinity));
    if (!o.n)
        throw usage_error("qpoch needs --n <order> or --n inf");
    return emit(o, qpoch(a, q, *o.n));
}

int eval_phi(const EvalOptions& o)
{
    const Base q(parse_double(o.q, "q"));
    const SeriesSpec spec(parse_complex_list(o.upper), parse_complex_list(o.lower), q, need(o, "z"));
    return emit(o, phi_eval(spec, o.target));
}

int eval_vwp(const EvalOptions& o)
{
    if (!o.id.empty())
        return eval_identity(o);
    const Base q(parse_double(o.q, "q"));
    const VWPSpec spec{need(o, "a"), parse_complex_list(o.tail), q, need(o, "z")};
    return emit(o, vwp_eval(spec, o.target));
}

int eval_awpoly(const EvalOptions& o)
{
    if (!o.n)
        throw usage_error("awpoly needs --n");
    if (!o.x && !o.theta)
        throw usage_error("awpoly needs --x or --theta");
    const double x = o.x ? *o.x : std::cos(*o.theta);
    const AWParams p{need(o, "a"), need(o, "b"), need(o, "c"), need(o, "d"), Base(parse_double(o.q, "q"))};
    return emit(o, aw_poly(*o.n, x, p), {{"n", *o.n}, {"x", x}});
}

int eval_integral(const EvalOptions& o)
{
    if (o.id.empty())
        throw usage_error("integral-id needs --id");
    const IdentitySpec& spec = find_identity(o.id);
    if (spec.kind == IdentityKind::series_series)
        throw usage_error("'" + spec.id + "' has no integral side; use --id with an integral identity");
    return eval_identity(o);
}

// ---------------------------------------------------------------------------
// list

std::string slots_text(const IdentitySpec& s)
{
    std::string out;
    for (Slot x : s.slots)
        out += (out.empty() ? "" : ",") + std::string(slot_name(x));
    for (Extra e : s.extras)
        out += std::string(out.empty() ? "" : ",") + (e == Extra::n ? "n" : e == Extra::m ? "m" : "theta");
    return out;
}

int cmd_list(bool json_out)
{
    if (json_out) {
        json j;
        j["identities"] = json::array();
        for (const auto& s : registry())
            j["identities"].push_back({{"id", s.id},
                                       {"citation", s.citation},
                                       {"kind", kind_name(s.kind)},
                                       {"slots", slots_text(s)},
                                       {"domain", s.domain_text},
                                       {"default_tolerance", s.default_tolerance},
                                       {"summary", s.summary}});
        j["reductions"] = json::array();
        for (const auto& r : reductions())
            j["reductions"].push_back({{"parent", r.parent},
                                       {"child", r.child},
                                       {"embedding", r.embedding_text},
                                       {"default_tolerance", r.default_tolerance}});
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    std::cout << registry().size() << " identities\n";
    for (const auto& s : registry()) {
        std::printf("%-18s %-44s %-17s tol %.0e\n", s.id.c_str(), s.citation.c_str(),
                    std::string(kind_name(s.kind)).c_str(), s.default_tolerance);
        std::printf("    slots:  %s\n    domain: %s\n    %s\n", slots_text(s).c_str(), s.domain_text.c_str(),
                    s.summary.c_str());
    }
    std::cout << "\n" << reductions().size() << " reductions\n";
    for (const auto& r : reductions())
        std::printf("%s -> %s at %s (tol %.0e)\n", r.parent.c_str(), r.child.c_str(), r.embedding_text.c_str(),
                    r.default_tolerance);
    return 0;
}

void add_eval_params(CLI::App* sub, EvalOptions& o)
{
    // --h is a parameter here, so help is --help only
    sub->set_help_flag("--help", "print this help and exit");
    for (std::string_view name : kSlotNames) {
        const std::string n(name);
        sub->add_option("--" + n, o.slot[n], "parameter " + n + " (real or re+imi)");
    }
    sub->add_option("--q", o.q, "base q in (0, 1)");
    sub->add_option("--theta", o.theta, "angle in [0, pi]");
    sub->add_option("--m", o.m, "second index");
    sub->add_option("--target", o.target, "accuracy target");
    sub->add_flag("--json", o.json_out, "print JSON");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"q-series identities: check, evaluate, list"};
    app.require_subcommand(1);

    CheckOptions co;
    CLI::App* check_cmd = app.add_subcommand("check", "check identities at sampled points");
    check_cmd->add_option("--ids", co.ids, "comma-separated globs over identity ids")->capture_default_str();
    check_cmd->add_option("--samples", co.samples, "points per identity")->capture_default_str();
    check_cmd->add_option("--seed", co.seed, "sampling seed")->capture_default_str();
    check_cmd->add_option("--tol", co.tol, "tolerance override (default: per identity)");
    check_cmd->add_option("--q", co.qs, "comma-separated values of q, cycled over samples")->capture_default_str();
    check_cmd->add_option("--cap", co.cap, "largest sampled modulus")->capture_default_str();
    check_cmd->add_option("--profile", co.profile, "real or complex parameters")->capture_default_str();
    check_cmd->add_option("--out", co.out, "report file (default: stdout)");
    check_cmd->add_option("--format", co.format, "json or csv")->capture_default_str();
    check_cmd->add_option("--config", co.config, "file of 'key = value' lines");
    check_cmd->add_option("--jobs", co.jobs, "worker threads")->capture_default_str();
    check_cmd->add_flag("--reductions", co.reductions, "also run the reductions touching the selected ids");
    check_cmd->add_flag("--quiet", co.quiet, "no summary line");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one quantity");
    eval_cmd->require_subcommand(1);
    EvalOptions eo;
    CLI::App* e_qpoch = eval_cmd->add_subcommand("qpoch", "(a; q)_n");
    add_eval_params(e_qpoch, eo);
    e_qpoch->add_option("--n", eo.order, "order, or 'inf'")->required();
    CLI::App* e_phi = eval_cmd->add_subcommand("phi", "r+1 phi r series");
    add_eval_params(e_phi, eo);
    e_phi->add_option("--upper", eo.upper, "numerator parameters, comma-separated")->required();
    e_phi->add_option("--lower", eo.lower, "denominator parameters, comma-separated");
    CLI::App* e_vwp = eval_cmd->add_subcommand("vwp", "very-well-poised series, or both sides of --id");
    add_eval_params(e_vwp, eo);
    e_vwp->add_option("--tail", eo.tail, "a_4, ..., a_{r+1}, comma-separated (with --a for a1 and --z)");
    e_vwp->add_option("--id", eo.id, "identity whose two sides to evaluate");
    e_vwp->add_option("--n", eo.n, "index n");
    CLI::App* e_aw = eval_cmd->add_subcommand("awpoly", "Askey-Wilson polynomial p_n(x)");
    add_eval_params(e_aw, eo);
    e_aw->add_option("--n", eo.n, "degree")->required();
    e_aw->add_option("--x", eo.x, "point in [-1, 1]");
    CLI::App* e_int = eval_cmd->add_subcommand("integral-id", "quadrature side and closed side of an integral identity");
    add_eval_params(e_int, eo);
    e_int->add_option("--id", eo.id, "identity id")->required();
    e_int->add_option("--n", eo.n, "index n");

    bool list_json = false;
    CLI::App* list_cmd = app.add_subcommand("list", "print the identity catalogue");
    list_cmd->add_flag("--json", list_json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (check_cmd->parsed())
            return cmd_check(co, *check_cmd);
        if (list_cmd->parsed())
            return cmd_list(list_json);
        if (e_qpoch->parsed()) {
            if (eo.order != "inf" && eo.order != "infinity")
                eo.n = static_cast<int>(parse_double(eo.order, "--n"));
            return eval_qpoch(eo);
        }
        if (e_phi->parsed())
            return eval_phi(eo);
        if (e_vwp->parsed())
            return eval_vwp(eo);
        if (e_aw->parsed())
            return eval_awpoly(eo);
        if (e_int->parsed())
            return eval_integral(eo);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const unknown_identity& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
