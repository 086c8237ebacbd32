#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qseries/qseries.hpp"

using namespace qseries;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

big poch(const big& a, const big& q, int k)
{
    big p = 1;
    big qj = 1;
    for (int j = 0; j < k; ++j, qj *= q)
        p *= 1 - a * qj;
    return p;
}

double rel(QComplex x, QComplex y)
{
    return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

} // namespace

TEST_CASE("registry")
{
    const auto& reg = registry();
    CHECK(reg.size() == 30);
    std::set<std::string> ids;
    for (const auto& s : reg) {
        ids.insert(s.id);
        CHECK_FALSE(s.citation.empty());
        CHECK(s.default_tolerance > 0.0);
        CHECK(static_cast<bool>(s.lhs));
        CHECK(static_cast<bool>(s.rhs));
        CHECK(static_cast<bool>(s.sampler));
    }
    CHECK(ids.size() == reg.size());
    for (const char* id : {"aw-integral", "aw-orthogonality", "rogers-6w5", "ext-rogers", "genfunc-d", "genfunc-a",
                           "nassrallah-rahman", "rahman", "isv", "thm18", "thm19", "prop41", "prop42", "thm61",
                           "thm62", "thm63", "thm64", "thm65", "thm66", "thm67", "thm68", "qgauss", "qchu",
                           "qsaalschutz", "verma-jain", "andrews-watson"})
        CHECK(ids.count(id) == 1);
    CHECK_THROWS_AS(find_identity("no-such-id"), unknown_identity);
    CHECK(reductions().size() == 4);
}

TEST_CASE("every identity holds at sampled points")
{
    for (Profile profile : {Profile::real, Profile::complex}) {
        SampleConfig cfg;
        cfg.profile = profile;
        for (const auto& spec : registry()) {
            for (std::size_t i = 0; i < 6; ++i) {
                const IdentityReport r = run_sample(spec, cfg, 11, i);
                INFO(spec.id << " #" << i << " " << point_string(r.point) << " " << r.error);
                CHECK(r.error.empty());
                CHECK(r.pass);
                CHECK(r.rel_error <= r.tolerance);
            }
        }
    }
}

TEST_CASE("sampling is deterministic and respects the domain")
{
    SampleConfig cfg;
    for (const auto& spec : registry()) {
        for (std::size_t i = 0; i < 4; ++i) {
            const ParameterPoint p = sample_point(spec, cfg, 5, i);
            const ParameterPoint p2 = sample_point(spec, cfg, 5, i);
            CHECK(point_string(p) == point_string(p2));
            CHECK_FALSE(domain_violation(spec, p).has_value());
            CHECK(p.q().value() == cfg.qs[i % cfg.qs.size()]);
        }
    }
}

TEST_CASE("reductions hold")
{
    RunConfig cfg;
    for (const auto& red : reductions()) {
        for (std::size_t i = 0; i < 4; ++i) {
            const IdentityReport r = run_reduction(red, cfg, i);
            INFO(r.id << " #" << i << " " << r.error);
            CHECK(r.id == red.parent + "->" + red.child);
            CHECK(r.pass);
        }
    }
    CHECK_THROWS_AS(find_reduction("thm18", "qgauss"), unknown_identity);
}

TEST_CASE("general transformation with degenerate sequences")
{
    const GeneralTransformParams p{QComplex(0.3), QComplex(0.6), QComplex(-0.5), Base(0.5)};

    // A == 0: both sides vanish
    const Sequence zero = [](int) { return QComplex(0.0, 0.0); };
    CHECK(std::abs(general_transform_lhs(p, zero).value) == 0.0);
    CHECK(std::abs(general_transform_rhs(p, zero).value) < 1e-300);

    // A_n = [n = 0]: left side is the bare prefactor, right side the bare outer sum
    const Sequence delta = [](int n) { return QComplex(n == 0 ? 1.0 : 0.0, 0.0); };
    const big q(0.5), al(0.3), u(0.6), v(-0.5);
    big pref = 1;
    for (int j = 0; j < 400; ++j) {
        const big qj = pow(q, j);
        pref *= (1 - al * q * qj) * (1 - al * u * v / q * qj) / ((1 - al * u * qj) * (1 - al * v * qj));
    }
    big outer = 0;
    for (int n = 0; n <= 80; ++n)
        outer += (1 - al * pow(q, 2 * n)) / (1 - al) * poch(al, q, n) * poch(q / u, q, n) * poch(q / v, q, n)
                 / (poch(q, q, n) * poch(al * u, q, n) * poch(al * v, q, n)) * pow(-al * u * v / q, n)
                 * pow(q, n * (n - 1) / 2);
    CHECK(rel(general_transform_lhs(p, delta).value, static_cast<double>(pref)) < 1e-14);
    CHECK(rel(general_transform_rhs(p, delta).value, static_cast<double>(outer)) < 1e-13);
}

TEST_CASE("domain errors name the result")
{
    ParameterPoint p(Base(0.5));
    for (Slot s : {Slot::a, Slot::b, Slot::c, Slot::d, Slot::r, Slot::s, Slot::t, Slot::h, Slot::z, Slot::beta,
                   Slot::delta})
        p.set(s, 0.2);
    p.set(Slot::a, 1.3);
    try {
        (void)check("thm18", p);
        FAIL("expected a domain error");
    } catch (const domain_error& e) {
        CHECK(std::string(e.what()).rfind("Thm 1.8 requires", 0) == 0);
    }
    p.set(Slot::a, 0.2).unset(Slot::z);
    CHECK_THROWS_AS(check("thm18", p), domain_error);
    p.set(Slot::z, 0.2).set(Slot::u, 0.1);
    CHECK_THROWS_AS(check("thm18", p), domain_error);
    p.unset(Slot::u);
    CHECK(check("thm18", p).pass);
    CHECK_THROWS_AS(check("unknown", p), unknown_identity);

    ParameterPoint orth(Base(0.5));
    for (Slot s : {Slot::a, Slot::b, Slot::c, Slot::d})
        orth.set(s, 0.3);
    CHECK_THROWS_AS(check("aw-orthogonality", orth), domain_error);
    orth.n = 2;
    orth.m = 3;
    CHECK(check("aw-orthogonality", orth).pass);
}

TEST_CASE("large |z| is flagged experimental")
{
    ParameterPoint p(Base(0.5));
    for (Slot s : {Slot::a, Slot::b, Slot::c, Slot::d, Slot::r, Slot::s, Slot::t, Slot::h, Slot::beta, Slot::delta})
        p.set(s, 0.3);
    p.set(Slot::z, 0.5);
    CHECK_FALSE(check("thm18", p).experimental);
    p.set(Slot::z, 0.99);
    const IdentityReport r = check("thm18", p);
    CHECK(r.experimental);
    CHECK(r.pass);
    CHECK(check("thm19", p).experimental);
}

TEST_CASE("reports are deterministic")
{
    RunConfig cfg;
    cfg.patterns = {"aw-*", "thm6?", "qchu"};
    cfg.samples = 3;
    cfg.seed = 42;
    cfg.reductions = true;
    auto a = run_suite(cfg);
    cfg.jobs = 3;
    auto b = run_suite(cfg);
    REQUIRE(a.size() == b.size());
    CHECK(report_json(a, 42, config_json(cfg), 0.0)["records"] == report_json(b, 42, config_json(cfg), 1.0)["records"]);
    CHECK(report_csv(a) == report_csv(b));
    CHECK(report_csv(a).rfind(kCsvHeader, 0) == 0);
    CHECK(std::is_sorted(a.begin(), a.end(), [](const IdentityReport& x, const IdentityReport& y) {
        return x.id != y.id ? x.id < y.id : x.index < y.index;
    }));

    const auto j = report_json(a, 42, config_json(cfg), 0.5);
    CHECK(j["header"]["version"] == kReportVersion);
    CHECK(j["header"]["seed"] == 42);
    CHECK(j["summary"]["total"] == a.size());
    CHECK(j["header"]["timings"]["records"].size() == a.size());

    cfg.patterns = {"nothing-matches-*"};
    CHECK_THROWS_AS(run_suite(cfg), unknown_identity);
}

TEST_CASE("glob selection")
{
    CHECK(glob_match("thm6?", "thm61"));
    CHECK_FALSE(glob_match("thm6?", "thm611"));
    CHECK(glob_match("*", "aw-integral"));
    CHECK(select_identities({"thm6*"}).size() == 8);
    CHECK(select_identities({"thm61", "thm6*"}).size() == 8);
}

TEST_CASE("relative error metric")
{
    CHECK(relative_error(1.0, 1.0) == 0.0);
    CHECK(relative_error(2.0, 1.0) == Catch::Approx(0.5));
    CHECK(relative_error(0.0, 0.0) == 0.0);
    CHECK(relative_error(1e-12, 0.0, 1.0) == Catch::Approx(1e-12));
}
