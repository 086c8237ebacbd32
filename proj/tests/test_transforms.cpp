#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qseries/transforms.hpp"

using namespace qseries;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

double rel(QComplex x, QComplex y)
{
    return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

big poch(const big& a, const big& q, int k)
{
    big p = 1;
    big qj = 1;
    for (int j = 0; j < k; ++j, qj *= q)
        p *= 1 - a * qj;
    return p;
}

big poch_inf(const big& a, const big& q)
{
    big p = 1;
    big qj = 1;
    for (int j = 0; j < 400; ++j, qj *= q)
        p *= 1 - a * qj;
    return p;
}

big poch_list(const std::vector<big>& as, const big& q, int k)
{
    big p = 1;
    for (const big& a : as)
        p *= poch(a, q, k);
    return p;
}

struct Real12 {
    double a, b, c, d, r, s, t, h, z, beta, delta, q;

    TwelveParams params() const { return {a, b, c, d, r, s, t, h, z, beta, delta, Base(q)}; }
};

// Outer sum of the twelve-parameter formula, every Pochhammer symbol built from scratch.
double brute_twelve(const Real12& p, int N)
{
    const big a(p.a), b(p.b), c(p.c), d(p.d), r(p.r), q(p.q);
    const big al = a * a * b * c * d * r / q;
    big total = 0;
    for (int n = 0; n <= N; ++n) {
        big inner = 0;
        for (int k = 0; k <= n; ++k)
            inner += poch_list({pow(q, -n), al * pow(q, n), big(p.beta), big(p.delta)}, q, k)
                     / poch_list({q, big(p.s), big(p.t), big(p.h)}, q, k) * pow(q * big(p.z), k);
        total += (1 - al * pow(q, 2 * n)) / (1 - al) * poch_list({al, a * b, a * c, a * d, a * r}, q, n)
                 / poch_list({q, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r}, q, n)
                 * pow(-b * c * d * r, n) * pow(q, n * (n - 1) / 2) * inner;
    }
    return static_cast<double>(total);
}

double brute_double_series(const Real12& p, int N)
{
    const big a(p.a), b(p.b), c(p.c), d(p.d), r(p.r), q(p.q);
    big total = 0;
    for (int n = 0; n <= N; ++n) {
        const big qn = pow(q, n);
        big inner = 0;
        for (int k = 0; k <= N; ++k)
            inner += poch_list({a * b * qn, a * c * qn, b * c}, q, k)
                     / poch_list({q, a * b * c * d * qn, a * b * c * r * qn}, q, k) * pow(d * r, k);
        total += poch_list({big(p.beta), big(p.delta), a * b, a * c, a * d, a * r}, q, n)
                 / poch_list({q, big(p.s), big(p.t), big(p.h), a * b * c * d, a * b * c * r}, q, n)
                 * pow(b * c * d * r * big(p.z), n) * inner;
    }
    return static_cast<double>(total);
}

const Real12 kPoints[] = {
    {0.3, 0.4, 0.2, 0.5, 0.35, 0.2, 0.3, 0.4, 0.5, 0.25, 0.35, 0.5},
    {0.6, -0.3, 0.45, 0.2, 0.5, -0.4, 0.1, 0.6, -0.7, 0.3, -0.2, 0.7},
    {0.1, 0.2, 0.15, 0.3, 0.25, 0.5, 0.45, 0.35, 0.9, 0.6, 0.55, 0.3},
};

} // namespace

TEST_CASE("twelve-parameter outer sum matches a direct double sum")
{
    for (const auto& p : kPoints) {
        const EvalResult got = twelve_param_sum(p.params());
        const double want = brute_twelve(p, 60);
        CHECK(rel(got.value, want) < 1e-13);
        CHECK(got.err_estimate < 1e-12 * std::abs(want));
        CHECK_FALSE(got.heuristic);
    }
}

TEST_CASE("double series matches a direct double sum")
{
    for (const auto& p : kPoints) {
        const EvalResult got = double_series_lhs(p.params());
        const double want = brute_double_series(p, 90);
        CHECK(rel(got.value, want) < 1e-13);
        CHECK_FALSE(got.heuristic);
    }
}

TEST_CASE("the two right-hand sides agree through the prefactor ratio")
{
    for (const auto& p : kPoints) {
        const TwelveParams tp = p.params();
        const QComplex direct = twelve_integral_prefactor(tp).value;
        const QComplex via = twelve_to_double_ratio(tp).value * double_series_prefactor(tp).value;
        CHECK(rel(direct, via) < 1e-14);

        // double series = its prefactor * outer sum, both sides from the 50-digit oracles
        const big q(p.q), a(p.a), b(p.b), c(p.c), d(p.d), r(p.r);
        const big al = a * a * b * c * d * r / q;
        const big pref = poch_inf(a * b * d * r, q) * poch_inf(a * c * d * r, q) / poch_inf(d * r, q)
                         / poch_inf(q * al, q);
        CHECK(rel(brute_double_series(p, 90), static_cast<double>(pref) * brute_twelve(p, 60)) < 1e-12);
        CHECK(rel(double_series_prefactor(tp).value, static_cast<double>(pref)) < 1e-14);
    }
}

TEST_CASE("very-well-poised side matches its term-by-term definition")
{
    const FiveParams f{0.3, 0.4, 0.2, 0.5, 0.35, Base(0.5)};
    for (double z : {0.4, -0.8, 2.5}) {
        const big q(0.5), a(0.3), b(0.4), c(0.2), d(0.5), r(0.35), bz(z);
        const big al = a * a * b * c * d * r / q;
        big total = 0;
        for (int k = 0; k <= 120; ++k)
            total += (1 - al * pow(q, 2 * k)) / (1 - al)
                     * poch_list({al, a * b, a * c, a * d, a * r, 1 / bz}, q, k)
                     / poch_list({q, a * c * d * r, a * b * d * r, a * b * c * r, a * b * c * d, q * al * bz}, q, k)
                     * pow(b * c * d * r * bz, k);
        CHECK(rel(thm61_vwp(f, z).value, static_cast<double>(total)) < 1e-13);
    }
    CHECK_THROWS_AS(thm61_vwp(f, 0.0), domain_error);
}

TEST_CASE("even outer sums match their definitions")
{
    const FiveParams f{0.4, 0.5, 0.3, 0.6, 0.45, Base(0.6)};
    const big q(0.6), a(0.4), b(0.5), c(0.3), d(0.6), r(0.45);
    const big al = a * a * b * c * d * r / q;
    const big bcdr = b * c * d * r;
    const big q2 = q * q;
    const std::vector<big> up{al, a * b, a * c, a * d, a * r};
    const std::vector<big> lo{q, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r};

    big vj = 0;
    for (int n = 0; n <= 40; ++n)
        vj += (1 - al * pow(q, 4 * n)) / (1 - al) * poch_list(up, q, 2 * n) / poch_list(lo, q, 2 * n)
              * poch(q, q2, n) / poch(q * al, q2, n) * pow(-al, n) * pow(bcdr, 2 * n) * pow(q, 3 * n * n - n);
    CHECK(rel(verma_jain_outer_sum(f).value, static_cast<double>(vj)) < 1e-13);

    const big lambda(0.35);
    big w = 0;
    for (int n = 0; n <= 40; ++n)
        w += (1 - al * pow(q, 4 * n)) / (1 - al) * poch_list(up, q, 2 * n) / poch_list(lo, q, 2 * n)
             * poch(q, q2, n) * poch(q * al / lambda, q2, n) / (poch(q * al, q2, n) * poch(q * lambda, q2, n))
             * pow(bcdr, 2 * n) * pow(lambda, n) * pow(q, 2 * n * n - n);
    CHECK(rel(watson_outer_sum(f, 0.35).value, static_cast<double>(w)) < 1e-13);
    CHECK_THROWS_AS(watson_outer_sum(f, 0.0), domain_error);
}

TEST_CASE("Saalschuetz outer sum matches its definition")
{
    const FiveParams f{0.3, 0.4, 0.2, 0.5, 0.35, Base(0.5)};
    const big q(0.5), a(0.3), b(0.4), c(0.2), d(0.5), r(0.35), u(0.6), v(-0.45);
    const big al = a * a * b * c * d * r / q;
    big s = 0;
    for (int n = 0; n <= 60; ++n)
        s += (1 - al * pow(q, 2 * n)) / (1 - al)
             * poch_list({al, a * b, a * c, a * d, a * r, q / u, q / v}, q, n)
             / poch_list({q, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r, al * u, al * v}, q, n)
             * pow(-al * b * c * d * r * u * v / q, n) * pow(q, n * (n - 1) / 2);
    CHECK(rel(saalschutz_outer_sum(f, 0.6, -0.45).value, static_cast<double>(s)) < 1e-13);
}

TEST_CASE("complex parameters")
{
    // conjugating every parameter conjugates every side
    TwelveParams p{QComplex(0.3, 0.1), QComplex(0.2, -0.3), 0.25, QComplex(0.1, 0.4), 0.3, QComplex(0.2, 0.2),
                   0.3, 0.4, QComplex(0.5, -0.3), 0.25, QComplex(0.1, 0.3), Base(0.6)};
    TwelveParams pc = p;
    for (QComplex* x : {&pc.a, &pc.b, &pc.c, &pc.d, &pc.r, &pc.s, &pc.t, &pc.h, &pc.z, &pc.beta, &pc.delta})
        *x = std::conj(*x);
    const QComplex s = twelve_param_sum(p).value;
    CHECK(rel(std::conj(s), twelve_param_sum(pc).value) < 1e-14);
    const QComplex g = double_series_lhs(p).value;
    CHECK(rel(std::conj(g), double_series_lhs(pc).value) < 1e-14);
    CHECK(rel(double_series_prefactor(p).value * s, g) < 1e-11);
    CHECK(rel(twelve_integral_prefactor(p).value * s, twelve_to_double_ratio(p).value * g) < 1e-11);
}
