#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qseries/hyperseries.hpp"
#include "qseries/summations.hpp"

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

// Terminating (q^{-n}, upper; q, lower; q)_k z^k sum at 50 digits.
double big_sum(int n, const std::vector<double>& upper, const std::vector<double>& lower, double q, double z)
{
    const big bq(q);
    big s = 0;
    for (int k = 0; k <= n; ++k) {
        big t = poch(pow(bq, -n), bq, k) / poch(bq, bq, k) * pow(big(z), k);
        for (double u : upper)
            t *= poch(big(u), bq, k);
        for (double l : lower)
            t /= poch(big(l), bq, k);
        s += t;
    }
    return static_cast<double>(s);
}

QComplex qn_inv(double q, int n) { return std::pow(q, -n); }

} // namespace

TEST_CASE("q-Gauss against the series")
{
    const Base q(0.5);
    const QComplex a = 0.3, b = 0.6, c = 0.1;
    const QComplex series = phi_eval(SeriesSpec({a, b}, {c}, q, c / (a * b))).value;
    CHECK(rel(qgauss_sum(a, b, c, q).value, series) < 1e-13);
    const QComplex ac(0.4, 0.2), bc(0.5, -0.3), cc(0.05, 0.1);
    CHECK(rel(qgauss_sum(ac, bc, cc, q).value, phi_eval(SeriesSpec({ac, bc}, {cc}, q, cc / (ac * bc))).value)
          < 1e-13);
    CHECK_THROWS_AS(qgauss_sum(0.1, 0.2, 0.5, q), domain_error);
}

TEST_CASE("q-Chu-Vandermonde against a 50-digit sum")
{
    for (int n : {0, 1, 4, 9}) {
        const double alpha = 0.3, z = 0.7, q = 0.6;
        const double want = big_sum(n, {alpha * std::pow(q, n)}, {q * alpha * z}, q, q * z);
        CHECK(rel(qchu_sum(n, alpha, z, Base(q)).value, want) < 1e-12);
    }
    CHECK_THROWS_AS(qchu_sum(-1, 0.3, 0.5, Base(0.5)), domain_error);
}

TEST_CASE("q-Pfaff-Saalschuetz against a 50-digit sum")
{
    for (int n : {0, 2, 5, 8}) {
        const double alpha = 0.4, u = 0.5, v = -0.7, q = 0.55;
        const double want =
            big_sum(n, {alpha * std::pow(q, n), alpha * u * v / q}, {alpha * u, alpha * v}, q, q);
        CHECK(rel(qsaalschutz_sum(n, alpha, u, v, Base(q)).value, want) < 1e-12);
    }
}

TEST_CASE("Verma-Jain sum")
{
    const double alpha = 0.3, q = 0.5;
    const Base bq(q);
    const QComplex root = std::sqrt(QComplex(q * alpha));
    const int n = 4;
    const QComplex series =
        phi_eval(SeriesSpec({qn_inv(q, n), alpha * std::pow(q, n), 0.0}, {root, -root}, bq, q)).value;
    CHECK(rel(verma_jain_sum(n, alpha, bq), series) < 1e-12);
    for (int odd : {1, 3, 7}) {
        CHECK(verma_jain_sum(odd, alpha, bq) == QComplex(0.0, 0.0));
        const QComplex s =
            phi_eval(SeriesSpec({qn_inv(q, odd), alpha * std::pow(q, odd), 0.0}, {root, -root}, bq, q)).value;
        CHECK(std::abs(s) < 1e-12);
    }
    CHECK(verma_jain_sum(0, alpha, bq) == QComplex(1.0, 0.0));
}

TEST_CASE("Andrews q-Watson sum")
{
    const double alpha = 0.2, lambda = 0.4, q = 0.5;
    const Base bq(q);
    const QComplex ra = std::sqrt(QComplex(q * alpha)), rl = std::sqrt(QComplex(lambda));
    auto series = [&](int n) {
        return phi_eval(SeriesSpec({qn_inv(q, n), alpha * std::pow(q, n), rl, -rl}, {ra, -ra, lambda}, bq, q)).value;
    };
    CHECK(rel(andrews_watson_sum(6, alpha, lambda, bq), series(6)) < 1e-12);
    CHECK(rel(andrews_watson_sum(2, alpha, lambda, bq), series(2)) < 1e-12);
    for (int odd : {1, 5}) {
        CHECK(andrews_watson_sum(odd, alpha, lambda, bq) == QComplex(0.0, 0.0));
        CHECK(std::abs(series(odd)) < 1e-12);
    }
    CHECK(andrews_watson_sum(0, alpha, lambda, bq) == QComplex(1.0, 0.0));
    CHECK_THROWS_AS(andrews_watson_sum(2, alpha, 0.0, bq), domain_error);
}
