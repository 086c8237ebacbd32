// Askey-Wilson polynomials at one parameter point: a few values, then the
// Gram matrix of p_0..p_4 against the weight, divided by the norms.

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qseries/askey_wilson.hpp"
#include "qseries/quadrature.hpp"

using namespace qseries;

int main()
{
    const AWParams p{0.3, 0.2, 0.1, 0.4, Base(0.5)};

    std::printf("p_n(x; 0.3, 0.2, 0.1, 0.4 | 0.5)\n");
    for (double x : {-0.9, -0.3, 0.0, 0.5, 1.0}) {
        std::printf("  x = %5.2f:", x);
        for (int n = 0; n <= 4; ++n)
            std::printf(" %12.6f", aw_poly(n, x, p).value.real());
        std::printf("\n");
    }

    std::printf("\nint W p_m p_n dtheta / h_max(m,n)\n");
    for (int m = 0; m <= 4; ++m) {
        for (int n = 0; n <= 4; ++n) {
            const QuadResult r = integrate(Integrand{[&](double th) {
                const double x = std::cos(th);
                return aw_weight(th, p).value * aw_poly(m, x, p).value * aw_poly(n, x, p).value;
            }});
            std::printf(" %10.2e", std::abs(r.value) / aw_norm(std::max(m, n), p).magnitude());
        }
        std::printf("\n");
    }
}
