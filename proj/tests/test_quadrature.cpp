#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>

#include "qseries/askey_wilson.hpp"
#include "qseries/quadrature.hpp"

using namespace qseries;

namespace {

double rel(QComplex x, QComplex y)
{
    return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

// 2phi1(A, B; C; q, w) summed directly in double, stopping when terms drop
// below 1e-18 of the running sum.
QComplex plain_2phi1(QComplex A, QComplex B, QComplex C, double q, QComplex w)
{
    QComplex term = 1.0, sum = 1.0;
    double qk = 1.0;
    for (int k = 0; k < 2000; ++k, qk *= q) {
        term *= (1.0 - A * qk) * (1.0 - B * qk) / ((1.0 - q * qk) * (1.0 - C * qk)) * w;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

} // namespace

TEST_CASE("trapezoid rule on simple integrands")
{
    const auto one = integrate(Integrand{[](double) { return QComplex(1.0); }});
    CHECK(std::abs(one.value - pi) < 1e-14);
    CHECK(one.converged);
    CHECK(one.nodes_used == 2 * kQuadStartNodes + 1);

    const auto c = integrate(Integrand{[](double th) { return QComplex(std::cos(th)); }});
    CHECK(std::abs(c.value) < 1e-14);

    // int_0^pi exp(cos theta) = pi I_0(1)
    const auto e = integrate(Integrand{[](double th) { return QComplex(std::exp(std::cos(th))); }}, 1e-14);
    CHECK(rel(e.value, pi * std::cyl_bessel_i(0.0, 1.0)) < 1e-14);
}

TEST_CASE("integrate rejects bad input")
{
    CHECK_THROWS_AS(integrate(Integrand{}), domain_error);
    CHECK_THROWS_AS(integrate(Integrand{[](double) { return QComplex(1.0); }}, 0.0), domain_error);
    Integrand sing{[](double) { return QComplex(1.0); }};
    sing.singularities = {0.5};
    CHECK_THROWS_AS(integrate(sing), domain_error);
    CHECK_THROWS_AS(integrate(Integrand{[](double th) { return QComplex(1.0 / (th - pi / 2)); }}), domain_error);
    // a kink converges algebraically and runs out of nodes
    Integrand kink{[](double th) { return QComplex(std::sqrt(std::abs(std::cos(th) - 0.3))); }, Smoothness::other};
    CHECK_THROWS_AS(integrate(kink, 1e-15), convergence_error);
}

TEST_CASE("threaded sampling gives the same bits")
{
    const AWParams p{0.5, -0.3, QComplex(0.2, 0.4), QComplex(0.2, -0.4), Base(0.6)};
    Integrand f{[&](double th) { return aw_weight(th, p).value; }};
    const auto serial = integrate(f, 1e-13, 1);
    const auto threaded = integrate(f, 1e-13, 4);
    CHECK(serial.value == threaded.value);
    CHECK(serial.nodes_used == threaded.nodes_used);
}

TEST_CASE("Askey-Wilson weight integrates to the closed constant")
{
    const AWParams p{0.3, 0.2, 0.1, 0.4, Base(0.5)};
    const auto r = integrate(Integrand{[&](double th) { return aw_weight(th, p).value; }}, 1e-13);
    CHECK(rel(r.value, aw_constant(p.a, p.b, p.c, p.d, p.q).value) < 1e-10);
    CHECK(r.err_estimate < 1e-10 * std::abs(r.value));

    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> mod(0.05, 0.85), q(0.15, 0.85), ph(-pi, pi);
    for (int i = 0; i < 50; ++i) {
        // one conjugate pair and two real parameters keep the weight real
        const QComplex z = std::polar(mod(gen), ph(gen));
        const double s1 = i % 2 ? 1.0 : -1.0;
        const AWParams pr{z, std::conj(z), s1 * mod(gen), mod(gen), Base(q(gen))};
        const auto v = integrate(Integrand{[&](double th) { return aw_weight(th, pr).value; }}, 1e-12);
        INFO("draw " << i);
        CHECK(rel(v.value, aw_constant(pr.a, pr.b, pr.c, pr.d, pr.q).value) < 1e-9);
    }
}

TEST_CASE("nr_integrand")
{
    const Base q(0.45);
    const QComplex a = 0.3, b = -0.25, c = QComplex(0.1, 0.3), u = 0.5, v = QComplex(0.1, -0.3);
    for (double th : {0.1, 0.9, 1.6, 2.7}) {
        // d = v cancels one denominator: the Askey-Wilson weight in a, b, c, u
        CHECK(rel(nr_integrand(th, a, b, c, u, v, v, q), aw_weight(th, AWParams{a, b, c, u, q}).value) < 1e-13);
        // evenness in theta
        CHECK(rel(nr_integrand(th, a, b, c, u, v, 0.2, q), nr_integrand(-th, a, b, c, u, v, 0.2, q)) < 1e-13);
    }
    // value against the x-form products at theta = pi/2
    const QComplex d = 0.35;
    const QComplex expected = h_product(std::cos(pi), 1.0, q).value * h_product(0.0, d, q).value
                              / h_product_multi(0.0, {a, b, c, u, v}, q).value;
    CHECK(rel(nr_integrand(pi / 2, a, b, c, u, v, d, q), expected) < 1e-13);
    CHECK_THROWS_AS(nr_integrand(0.3, a, b, c, u, 1.0, d, q), domain_error);
}

TEST_CASE("twelve-parameter integrand")
{
    ParameterPoint p(Base(0.5));
    p.set(Slot::a, 0.3).set(Slot::b, 0.2).set(Slot::c, -0.25).set(Slot::d, 0.4).set(Slot::r, 0.0);
    p.set(Slot::s, 0.15).set(Slot::t, -0.35).set(Slot::h, 0.6).set(Slot::z, 0.7);
    p.set(Slot::beta, 0.45).set(Slot::delta, -0.2);
    const AWParams aw{0.3, 0.2, -0.25, 0.4, Base(0.5)};
    for (double th : {0.2, 1.3, 2.8})
        CHECK(rel(thm18_integrand(th, p), aw_weight(th, aw).value) < 1e-14);

    // beta = s, delta = t: the 4phi3 collapses to 2phi1(a e^{i theta}, a e^{-i theta}; h; q, bcdrz)
    p.set(Slot::r, 0.55).set(Slot::beta, 0.15).set(Slot::delta, -0.35);
    const std::array<QComplex, 5> den{0.3, 0.2, -0.25, 0.4, 0.55};
    for (double th : {0.2, 1.3, 2.8}) {
        const QComplex e{std::cos(th), std::sin(th)};
        const QComplex w = (detail::h_theta(2 * th, 1.0, 0.5) / detail::h_theta_multi(th, den, 0.5)).value;
        const QComplex f = plain_2phi1(0.3 * e, 0.3 * std::conj(e), 0.6, 0.5, 0.2 * -0.25 * 0.4 * 0.55 * 0.7);
        CHECK(rel(thm18_integrand(th, p), w * f) < 1e-13);
    }

    p.set(Slot::z, 1.2);
    CHECK_THROWS_AS(thm18_integrand(0.4, p), domain_error);
    p.set(Slot::z, 0.7).set(Slot::h, 1.0);
    CHECK_THROWS_AS(thm18_integrand(0.4, p), domain_error);
    p.set(Slot::h, 0.6).unset(Slot::delta);
    CHECK_THROWS_AS(thm18_integrand(0.4, p), domain_error);
}
