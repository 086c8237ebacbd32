// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// usage: acceptance <path to the qseries binary> <scratch directory>
//
// Every comparison here uses the raw relative error against the criterion's
// own tolerance; the harness's error-estimate allowance is not applied.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include "qseries/qseries.hpp"

using namespace qseries;

namespace {

constexpr std::uint64_t kSeed = 20261016;

struct Tally {
    int total = 0;
    int ok = 0;
    double max_rel = 0.0;
    std::string first_failure;

    void add(bool pass, double rel_error, const std::string& what)
    {
        ++total;
        if (pass)
            ++ok;
        else if (first_failure.empty())
            first_failure = what;
        if (std::isfinite(rel_error))
            max_rel = std::max(max_rel, rel_error);
    }

    // Strict: no evaluation error and rel_error within the criterion tolerance.
    void add(const IdentityReport& r, double tol)
    {
        const bool pass = r.error.empty() && std::isfinite(r.rel_error) && r.rel_error <= tol;
        char buf[64];
        std::snprintf(buf, sizeof buf, " rel %.3g", r.rel_error);
        add(pass, r.rel_error, r.id + " #" + std::to_string(r.index) + buf + (r.error.empty() ? "" : " " + r.error));
    }

    bool passed() const { return total > 0 && ok == total; }
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int g_failed = 0;

void report(int number, const std::string& title, const Tally& t, double seconds, double limit = 0.0)
{
    const bool in_time = limit <= 0.0 || seconds <= limit;
    const bool pass = t.passed() && in_time;
    if (!pass)
        ++g_failed;
    std::printf("[%s] %2d %s: %d/%d, max rel %.2e, %.2f s", pass ? "PASS" : "FAIL", number, title.c_str(), t.ok,
                t.total, t.max_rel, seconds);
    if (limit > 0.0)
        std::printf(" (limit %.0f s)", limit);
    if (!t.first_failure.empty())
        std::printf("; first failure: %s", t.first_failure.c_str());
    std::printf("\n");
    std::fflush(stdout);
}

SampleConfig sampling(double cap)
{
    SampleConfig cfg;
    cfg.qs = {0.3, 0.5, 0.7};
    cfg.cap = cap;
    return cfg;
}

void run_id(Tally& t, const std::string& id, std::size_t points, double tol, const SampleConfig& cfg,
            const std::function<bool(const ParameterPoint&)>& extra = {})
{
    const IdentitySpec& spec = find_identity(id);
    std::size_t index = 0;
    for (std::size_t got = 0; got < points; ++index) {
        const ParameterPoint p = sample_point(spec, cfg, kSeed, index);
        if (extra && !extra(p))
            continue;
        ++got;
        IdentityReport r;
        try {
            r = check(id, p, tol);
        } catch (const std::exception& e) {
            r.id = id;
            r.rel_error = INFINITY;
            r.error = e.what();
        }
        r.index = index;
        t.add(r, tol);
    }
}

void run_reduction_points(Tally& t, const std::string& parent, const std::string& child, std::size_t points,
                          double tol, const SampleConfig& cfg)
{
    const IdentitySpec& spec = find_identity(child);
    for (std::size_t i = 0; i < points; ++i) {
        IdentityReport r;
        try {
            r = reduce_check(parent, child, sample_point(spec, cfg, kSeed, i), tol);
        } catch (const std::exception& e) {
            r.id = parent + "->" + child;
            r.rel_error = INFINITY;
            r.error = e.what();
        }
        r.index = i;
        t.add(r, tol);
    }
}

// ---------------------------------------------------------------------------

void criterion1()
{
    Timer timer;
    Tally t;
    run_id(t, "aw-integral", 50, 1e-9, sampling(0.5));
    report(1, "Askey-Wilson integral, 50 points at 1e-9", t, timer.seconds(), 10.0);
}

void criterion2()
{
    Timer timer;
    Tally t;
    ParameterPoint p(Base(0.5));
    p.set(Slot::a, 0.3).set(Slot::b, 0.2).set(Slot::c, 0.1).set(Slot::d, 0.4);
    for (int m = 0; m <= 5; ++m)
        for (int n = 0; n <= 5; ++n) {
            p.m = m;
            p.n = n;
            IdentityReport r = check("aw-orthogonality", p, 1e-8);
            r.index = static_cast<std::size_t>(6 * m + n);
            t.add(r, 1e-8);
        }
    report(2, "orthogonality, 0 <= m, n <= 5 at 1e-8", t, timer.seconds(), 30.0);
}

void criterion3()
{
    Timer timer;
    Tally t;
    const SampleConfig cfg = sampling(0.5);
    for (const char* id : {"rogers-6w5", "ext-rogers", "ext-rogers-gamma0"})
        run_id(t, id, 20, 1e-10, cfg);
    report(3, "Rogers 6phi5 and extended Rogers (with gamma = 0), 20 points each at 1e-10", t, timer.seconds(),
           2.0);
}

void criterion4()
{
    Timer timer;
    Tally t;
    const auto grid = theta_grid();
    const SampleConfig cfg = sampling(0.5);
    for (const char* id : {"genfunc-d", "genfunc-a"}) {
        const IdentitySpec& spec = find_identity(id);
        std::size_t used = 0;
        for (std::size_t i = 0; used < 10; ++i) {
            ParameterPoint p = sample_point(spec, cfg, kSeed, i);
            if (std::abs(p[Slot::d] * p[Slot::t]) > 0.5 || std::abs(p[Slot::a] * p[Slot::t]) > 0.5)
                continue;
            ++used;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                p.theta = grid[j];
                IdentityReport r = check(id, p, 1e-9);
                r.index = 100 * i + j;
                t.add(r, 1e-9);
            }
        }
    }
    report(4, "generating functions on the 17-point theta grid, 10 points each at 1e-9", t, timer.seconds());
}

void criterion5()
{
    Timer timer;
    Tally t;
    const SampleConfig cfg = sampling(0.5);
    for (const char* id : {"nassrallah-rahman", "rahman", "isv"})
        run_id(t, id, 20, 1e-7, cfg);
    run_reduction_points(t, "nassrallah-rahman", "rahman", 10, 1e-9, cfg);
    run_reduction_points(t, "nassrallah-rahman", "isv", 10, 1e-9, cfg);
    report(5, "Nassrallah-Rahman, Rahman, ISV at 1e-7 and two reductions at 1e-9", t, timer.seconds());
}

bool z_within_half(const ParameterPoint& p) { return std::abs(p[Slot::z]) <= 0.5; }

void criterion6()
{
    Timer timer;
    Tally t;
    const SampleConfig cfg = sampling(0.4);
    run_id(t, "thm18", 20, 1e-7, cfg, z_within_half);
    run_reduction_points(t, "thm18", "aw-integral", 10, 1e-9, cfg);
    report(6, "twelve-parameter integral at 1e-7 and r = 0 reduction at 1e-9", t, timer.seconds(), 60.0);
}

void criterion7()
{
    Timer timer;
    Tally t;
    const SampleConfig cfg = sampling(0.4);
    run_id(t, "thm19", 20, 1e-8, cfg, z_within_half);

    // The integral equals prefactor * outer sum and also ratio * double series.
    const IdentitySpec& spec = find_identity("thm19");
    for (std::size_t i = 0; i < 20; ++i) {
        const ParameterPoint p = sample_point(spec, cfg, kSeed, i);
        const TwelveParams tp{p[Slot::a], p[Slot::b], p[Slot::c], p[Slot::d], p[Slot::r], p[Slot::s],
                              p[Slot::t], p[Slot::h], p[Slot::z], p[Slot::beta], p[Slot::delta], p.q()};
        const QComplex via_outer = (twelve_integral_prefactor(tp) * twelve_param_sum(tp)).value;
        const QComplex via_double = (twelve_to_double_ratio(tp) * double_series_lhs(tp)).value;
        const double rel = relative_error(via_outer, via_double);
        t.add(rel <= 1e-8, rel, "shared right-hand side #" + std::to_string(i));
    }
    report(7, "double transformation at 1e-8 and shared right-hand side", t, timer.seconds());
}

void criterion8()
{
    Timer timer;
    Tally t;
    const SampleConfig cfg = sampling(0.5);
    for (const char* id : {"thm61", "thm62", "thm63", "thm64", "thm65", "thm66", "thm67", "thm68", "qgauss", "qchu",
                           "qsaalschutz", "verma-jain", "andrews-watson"}) {
        const IdentitySpec& spec = find_identity(id);
        run_id(t, id, 20, spec.kind == IdentityKind::series_series ? 1e-8 : 1e-7, cfg);
    }
    run_reduction_points(t, "thm61", "rahman", 10, 1e-9, cfg);
    report(8, "thm61-thm68 and five closed summations, thm61 -> rahman at 1e-9", t, timer.seconds());
}

using big = boost::multiprecision::cpp_bin_float_50;

big big_poch(const big& a, const big& q, int k)
{
    big p = 1;
    big qj = 1;
    for (int j = 0; j < k; ++j, qj *= q)
        p *= 1 - a * qj;
    return p;
}

void criterion9()
{
    Timer timer;
    Tally t;

    // (-ab; q)_k <= (-a; q)_inf for a >= 0, 0 <= b <= 1, and (ab; q)_k >= (a; q)_inf for 0 <= a <= 1
    for (double qv : {0.3, 0.5, 0.7}) {
        const Base q(qv);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j)
                for (int k = 0; k < 12; ++k) {
                    const double a1 = 3.0 * i / 19.0, a2 = i / 19.0, b = j / 19.0;
                    const double lhs1 = qpoch(-a1 * b, q, k).real(), rhs1 = qpoch(-a1, q, infinity).real();
                    const double lhs2 = qpoch(a2 * b, q, k).real(), rhs2 = qpoch(a2, q, infinity).real();
                    const std::string at = "q=" + std::to_string(qv) + " i=" + std::to_string(i) +
                                           " j=" + std::to_string(j) + " k=" + std::to_string(k);
                    t.add(lhs1 <= rhs1 * (1 + 1e-14), 0.0, "first inequality at " + at);
                    t.add(lhs2 >= rhs2 * (1 - 1e-14) - 1e-300, 0.0, "second inequality at " + at);
                }
    }

    // bound vs q^{C(n,2)} |4phi3(q^{-n}, alpha q^n, beta, delta; s, t, h; q, qz)|, the latter at 50 digits
    SplitMix64 rng(kSeed);
    auto uniform = [&rng](double lo, double hi) { return rng.uniform(lo, hi); };
    for (int point = 0; point < 10; ++point) {
        const double qv = std::array{0.3, 0.5, 0.7}[point % 3];
        const double alpha = uniform(-0.9, 0.9), beta = uniform(-0.9, 0.9), delta = uniform(-0.9, 0.9);
        const double s = uniform(-0.9, 0.9), tt = uniform(-0.9, 0.9), h = uniform(-0.9, 0.9);
        const double lambda = uniform(0.05, 0.9);
        const double z = lambda * (point % 2 ? -1.0 : 1.0);
        const double bound = prop32_bound(QComplex(alpha), std::array<QComplex, 2>{beta, delta},
                                          std::array<QComplex, 3>{s, tt, h}, Base(qv), lambda);
        const big q(qv);
        for (int n = 0; n <= 30; ++n) {
            big sum = 0;
            for (int k = 0; k <= n; ++k)
                sum += big_poch(pow(q, -n), q, k) * big_poch(big(alpha) * pow(q, n), q, k) * big_poch(big(beta), q, k)
                       * big_poch(big(delta), q, k)
                       / (big_poch(q, q, k) * big_poch(big(s), q, k) * big_poch(big(tt), q, k) * big_poch(big(h), q, k))
                       * pow(q * big(z), k);
            const double magnitude = static_cast<double>(abs(sum * pow(q, n * (n - 1) / 2)));
            t.add(magnitude <= bound, 0.0,
                  "bound at point " + std::to_string(point) + " n=" + std::to_string(n));
        }
    }

    // |A_k(theta)| <= theta- and k-independent majorant
    for (int point = 0; point < 10; ++point) {
        auto draw = [&]() { return QComplex(uniform(-0.6, 0.6), uniform(-0.6, 0.6)); };
        const BoundedKernelParams p{draw(), draw(), draw(), draw(), draw(), draw(), draw(),
                                    Base(std::array{0.3, 0.5, 0.7}[point % 3])};
        const double majorant = bounded_kernel_majorant(p);
        for (int j = 0; j < 256; ++j) {
            const double theta = pi * (j + 0.5) / 256.0;
            for (int k : {0, 1, 3, 8, 20}) {
                const double v = std::abs(bounded_kernel(theta, k, p));
                t.add(v <= majorant, 0.0, "kernel at point " + std::to_string(point) + " j=" + std::to_string(j));
            }
        }
    }
    report(9, "inequalities, uniform bound for n <= 30, bounded kernel", t, timer.seconds());
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion10(const std::string& cli, const std::filesystem::path& dir)
{
    Timer timer;
    Tally t;
    std::filesystem::create_directories(dir);
    std::string records[2];
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / ("determinism_" + std::to_string(run) + ".json");
        const std::string cmd = "\"" + cli + "\" check --ids '*' --samples 4 --seed 1234 --reductions --quiet --out \"" +
                                out.string() + "\"";
        const int rc = std::system(cmd.c_str());
        t.add(rc == 0, 0.0, "run " + std::to_string(run) + " exited with " + std::to_string(rc));
        try {
            records[run] = nlohmann::json::parse(read_file(out)).at("records").dump();
        } catch (const std::exception& e) {
            t.add(false, 0.0, std::string("report unreadable: ") + e.what());
        }
    }
    t.add(!records[0].empty() && records[0] == records[1], 0.0, "record arrays differ");
    report(10, "determinism of check with a fixed seed", t, timer.seconds());
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <qseries binary> <scratch directory>\n", argv[0]);
        return 2;
    }
    const std::function<void()> steps[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                           criterion6, criterion7, criterion8, criterion9};
    int number = 1;
    for (const auto& step : steps) {
        try {
            step();
        } catch (const std::exception& e) {
            ++g_failed;
            std::printf("[FAIL] %2d aborted: %s\n", number, e.what());
        }
        ++number;
    }
    try {
        criterion10(argv[1], argv[2]);
    } catch (const std::exception& e) {
        ++g_failed;
        std::printf("[FAIL] 10 aborted: %s\n", e.what());
    }
    std::printf("%d of 10 criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
