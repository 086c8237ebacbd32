// The general transformation holds for any coefficient sequence A_n.
// Try a few that are not in the catalogue.

#include <cmath>
#include <cstdio>

#include "qseries/qseries.hpp"

using namespace qseries;

int main()
{
    const GeneralTransformParams p{QComplex(0.4), QComplex(0.6), QComplex(-0.5), Base(0.5)};

    struct Named {
        const char* name;
        Sequence seq;
    };
    const Named sequences[] = {
        {"A_n = 1", [](int) { return QComplex(1.0); }},
        {"A_n = (-1)^n / (n+1)", [](int n) { return QComplex((n % 2 ? -1.0 : 1.0) / (n + 1)); }},
        {"A_n = q^(n^2)", [](int n) { return QComplex(std::pow(0.5, n * n)); }},
        {"A_n = (0.3 + 0.4i)^n", [](int n) { return std::pow(QComplex(0.3, 0.4), n); }},
    };
    for (const auto& [name, seq] : sequences) {
        const EvalResult l = general_transform_lhs(p, seq);
        const EvalResult r = general_transform_rhs(p, seq);
        std::printf("%-22s lhs %s  rhs %s  rel %.1e\n", name, complex_string(l.value).c_str(),
                    complex_string(r.value).c_str(), relative_error(l.value, r.value));
    }
}
