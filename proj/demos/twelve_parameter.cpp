// The twelve-parameter integral at one point, three ways: trapezoidal
// quadrature of the kernel, prefactor times the outer sum, and the double
// series scaled by the prefactor ratio.

#include <cstdio>

#include "qseries/qseries.hpp"

using namespace qseries;

int main()
{
    ParameterPoint p(Base(0.5));
    p.set(Slot::a, 0.3).set(Slot::b, 0.4).set(Slot::c, 0.2).set(Slot::d, 0.5).set(Slot::r, 0.35);
    p.set(Slot::s, 0.2).set(Slot::t, 0.3).set(Slot::h, 0.4).set(Slot::z, 0.5);
    p.set(Slot::beta, 0.25).set(Slot::delta, 0.35);

    const TwelveParams tp{p[Slot::a], p[Slot::b], p[Slot::c], p[Slot::d], p[Slot::r], p[Slot::s],
                          p[Slot::t], p[Slot::h], p[Slot::z], p[Slot::beta], p[Slot::delta], p.q()};

    const QuadResult quad = integrate(Integrand{[&](double th) { return thm18_integrand(th, p); }});
    const EvalResult outer = twelve_integral_prefactor(tp) * twelve_param_sum(tp);
    const EvalResult dbl = twelve_to_double_ratio(tp) * double_series_lhs(tp);

    std::printf("quadrature      %.16f  (err %.1e, %d nodes)\n", quad.value.real(), quad.err_estimate, quad.nodes_used);
    std::printf("outer sum       %.16f  (err %.1e)\n", outer.value.real(), outer.err_estimate);
    std::printf("double series   %.16f  (err %.1e)\n", dbl.value.real(), dbl.err_estimate);

    const IdentityReport r = check("thm18", p);
    std::printf("\nthm18 relative error %.2e, %s\n", r.rel_error, r.pass ? "pass" : "FAIL");
}
