#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/askey_wilson.hpp"
#include "qseries/errors.hpp"
#include "qseries/hyperseries.hpp"
#include "qseries/point.hpp"
#include "qseries/qcore.hpp"
#include "qseries/quadrature.hpp"
#include "qseries/sampling.hpp"
#include "qseries/summations.hpp"
#include "qseries/transforms.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// No identity is registered under the requested id.
class unknown_identity : public error {
public:
    using error::error;
};

enum class IdentityKind { series_series, series_integral, integral_integral };

inline std::string_view kind_name(IdentityKind k)
{
    switch (k) {
    case IdentityKind::series_series: return "series=series";
    case IdentityKind::series_integral: return "series=integral";
    case IdentityKind::integral_integral: return "integral=integral";
    }
    return "?";
}

/// Evaluation settings shared by both sides of a check.
struct EvalContext {
    int threads = 1;
    double quad_target = 1e-12;
};

using SideEvaluator = std::function<EvalResult(const ParameterPoint&, const EvalContext&)>;

/// Integer or angle argument carried by a ParameterPoint.
enum class Extra { n, m, theta };

struct IdentitySpec {
    std::string id;
    /// Where the statement comes from, e.g. "Thm 1.8".
    std::string citation;
    std::string summary;
    IdentityKind kind = IdentityKind::series_series;
    std::vector<Slot> slots;
    std::vector<Extra> extras;
    /// Hypotheses in words, as printed by the catalogue.
    std::string domain_text;
    double default_tolerance = 1e-8;
    /// The violated hypothesis ("max(|a|,...) < 1"), or nothing when the point is in the domain.
    std::function<std::optional<std::string>(const ParameterPoint&)> domain;
    SideEvaluator lhs;
    SideEvaluator rhs;
    /// Absolute scale entering the error metric next to |lhs| and |rhs|; used
    /// where the exact value is 0.
    std::function<double(const ParameterPoint&)> scale;
    /// Draws a candidate point; rejected candidates are redrawn.
    std::function<ParameterPoint(Draw&, Base)> sampler;
    /// Extra acceptance test applied to sampled points only.
    std::function<bool(const ParameterPoint&)> accept;
    /// Denominator parameters whose (x; q)_k must stay away from 0 at sampled points.
    std::function<std::vector<QComplex>(const ParameterPoint&)> poles;
    /// Flags points at the edge of the stated domain.
    std::function<bool(const ParameterPoint&)> experimental;
};

struct IdentityReport {
    std::string id;
    std::size_t index = 0;
    ParameterPoint point{Base(0.5)};
    QComplex lhs{0.0, 0.0};
    QComplex rhs{0.0, 0.0};
    double rel_error = 0.0;
    double lhs_err = 0.0;
    double rhs_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool heuristic = false;
    bool experimental = false;
    /// Evaluation failure, prefixed by the side it came from; empty on success.
    std::string error;
    double wall_time = 0.0;
};

/// |lhs - rhs| / max(|lhs|, |rhs|, scale, 1e-300).
inline double relative_error(QComplex lhs, QComplex rhs, double scale = 0.0)
{
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), scale, 1e-300});
}

namespace detail {

inline QComplex at(const ParameterPoint& p, Slot s) { return p.get(s); }

inline std::optional<std::string> require_below(const ParameterPoint& p, std::initializer_list<Slot> slots,
                                                double bound = 1.0)
{
    for (Slot s : slots)
        if (!(std::abs(p.get(s)) < bound)) {
            std::string text = "max(";
            bool first = true;
            for (Slot t : slots) {
                text += (first ? "|" : ", |") + std::string(slot_name(t)) + "|";
                first = false;
            }
            return text + ") < " + (bound == 1.0 ? std::string("1") : std::to_string(bound));
        }
    return std::nullopt;
}

inline EvalResult from_quad(const QuadResult& r)
{
    EvalResult e;
    e.value = r.value;
    e.err_estimate = r.err_estimate;
    e.terms_used = r.nodes_used;
    return e;
}

inline EvalResult integrate_theta(const std::function<QComplex(double)>& f, const EvalContext& ctx)
{
    return from_quad(integrate(Integrand{f}, ctx.quad_target, ctx.threads));
}

inline AWParams aw_params(const ParameterPoint& p)
{
    return {p[Slot::a], p[Slot::b], p[Slot::c], p[Slot::d], p.q()};
}

inline FiveParams five_params(const ParameterPoint& p)
{
    return {p[Slot::a], p[Slot::b], p[Slot::c], p[Slot::d], p[Slot::r], p.q()};
}

inline TwelveParams twelve_params(const ParameterPoint& p)
{
    return {p[Slot::a], p[Slot::b], p[Slot::c], p[Slot::d], p[Slot::r], p[Slot::s],
            p[Slot::t], p[Slot::h], p[Slot::z], p[Slot::beta], p[Slot::delta], p.q()};
}

/// h(cos 2theta; 1) / h(cos theta; a, b, c, d, r).
inline QComplex five_weight(double theta, const FiveParams& f)
{
    const std::array<QComplex, 5> den{f.a, f.b, f.c, f.d, f.r};
    const double qv = f.q.value();
    return (h_theta(2.0 * theta, 1.0, qv) / h_theta_multi(theta, den, qv)).value;
}

/// Weight in a, b, c, d, r times the series in a e^{i theta}, a e^{-i theta}
/// with the given extra numerator and denominator parameters and argument bcdr.
inline EvalResult five_kernel_integral(const FiveParams& f, std::vector<QComplex> upper_extra,
                                       std::vector<QComplex> lower, const EvalContext& ctx)
{
    const QComplex arg = f.b * f.c * f.d * f.r;
    auto g = [f, upper_extra, lower, arg](double th) {
        const QComplex e{std::cos(th), std::sin(th)};
        std::vector<QComplex> up{f.a * e, f.a * std::conj(e)};
        up.insert(up.end(), upper_extra.begin(), upper_extra.end());
        return five_weight(th, f) * phi_eval(SeriesSpec(up, lower, f.q, arg), 1e-15).value;
    };
    return integrate_theta(g, ctx);
}

/// 3phi2-weighted outer sum of the series forms, with extra upper and lower parameters and argument bcdr*w.
inline EvalResult five_g3_sum(const FiveParams& f, std::vector<QComplex> upper_extra,
                              std::vector<QComplex> lower_extra, QComplex w = 1.0)
{
    const auto& [a, b, c, d, r, q] = f;
    std::vector<QComplex> up = upper_extra;
    for (QComplex x : {a * b, a * c, a * d, a * r})
        up.push_back(x);
    std::vector<QComplex> lo = lower_extra;
    lo.push_back(a * b * c * d);
    lo.push_back(a * b * c * r);
    return g3_outer_sum(up, lo, b * c * d * r * w, a, b, c, d, r, q, kOuterTarget);
}

inline std::vector<QComplex> five_poles(const FiveParams& f)
{
    const auto& [a, b, c, d, r, q] = f;
    return {a * b, a * c, a * d, a * r, b * c, b * d, b * r, c * d, c * r, d * r,
            a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r, q.value() * f.alpha()};
}

inline ParameterPoint draw_slots(Draw& dr, Base q, std::initializer_list<Slot> slots)
{
    ParameterPoint p(q);
    for (Slot s : slots)
        p.set(s, dr.param());
    return p;
}

/// Cheap (q; q)_n.
inline QComplex q_factorial(int n, double q)
{
    double v = 1.0, qk = q;
    for (int k = 0; k < n; ++k, qk *= q)
        v *= 1.0 - qk;
    return v;
}

inline std::vector<IdentitySpec> build_registry()
{
    using S = Slot;
    std::vector<IdentitySpec> reg;
    const auto grid = theta_grid();
    const std::optional<std::string> ok = std::nullopt;

    auto abcd_domain = [](const ParameterPoint& p) { return require_below(p, {S::a, S::b, S::c, S::d}); };
    auto abcdr_domain = [](const ParameterPoint& p) { return require_below(p, {S::a, S::b, S::c, S::d, S::r}); };
    auto abcuv_domain = [](const ParameterPoint& p) { return require_below(p, {S::a, S::b, S::c, S::u, S::v}); };
    auto aw_poles = [](const ParameterPoint& p) {
        const AWParams w = aw_params(p);
        return std::vector<QComplex>{w.a * w.b, w.a * w.c, w.a * w.d, w.b * w.c, w.b * w.d, w.c * w.d};
    };
    auto five_pole_list = [](const ParameterPoint& p) { return five_poles(five_params(p)); };

    // ---- Askey-Wilson integral, orthogonality, symmetry ---------------------
    {
        IdentitySpec s;
        s.id = "aw-integral";
        s.citation = "Prop 1.2";
        s.summary = "Askey-Wilson q-beta integral: int W(cos theta) dtheta = K(a,b,c,d|q)";
        s.kind = IdentityKind::series_integral;
        s.slots = {S::a, S::b, S::c, S::d};
        s.domain_text = "max(|a|,|b|,|c|,|d|) < 1";
        s.default_tolerance = 1e-9;
        s.domain = abcd_domain;
        s.lhs = [](const ParameterPoint& p, const EvalContext& ctx) {
            const AWParams w = aw_params(p);
            return integrate_theta([w](double th) { return aw_weight(th, w).value; }, ctx);
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const AWParams w = aw_params(p);
            return aw_constant(w.a, w.b, w.c, w.d, w.q);
        };
        s.sampler = [](Draw& dr, Base q) { return draw_slots(dr, q, {S::a, S::b, S::c, S::d}); };
        s.poles = aw_poles;
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "aw-orthogonality";
        s.citation = "Thm 1.3";
        s.summary = "int W p_m p_n dtheta = delta_{m,n} h_n (Askey-Wilson orthogonality), 0 <= m, n <= 5";
        s.kind = IdentityKind::series_integral;
        s.slots = {S::a, S::b, S::c, S::d};
        s.extras = {Extra::m, Extra::n};
        s.domain_text = "max(|a|,|b|,|c|,|d|) < 1; 0 <= m, n <= " + std::to_string(kMaxAWDegree);
        s.default_tolerance = 1e-8;
        s.domain = [abcd_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (*p.m < 0 || *p.n < 0 || *p.m > kMaxAWDegree || *p.n > kMaxAWDegree)
                return "0 <= m, n <= " + std::to_string(kMaxAWDegree);
            return abcd_domain(p);
        };
        s.lhs = [](const ParameterPoint& p, const EvalContext& ctx) {
            const AWParams w = aw_params(p);
            const int m = *p.m, n = *p.n;
            return integrate_theta(
                [w, m, n](double th) {
                    const double x = std::cos(th);
                    return aw_weight(th, w).value * aw_poly(m, x, w).value * aw_poly(n, x, w).value;
                },
                ctx);
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            if (*p.m != *p.n)
                return exact({0.0, 0.0});
            return aw_norm(*p.n, aw_params(p));
        };
        s.scale = [](const ParameterPoint& p) { return aw_norm(std::max(*p.m, *p.n), aw_params(p)).magnitude(); };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::a, S::b, S::c, S::d});
            p.m = dr.integer(0, 5);
            p.n = dr.integer(0, 5);
            return p;
        };
        s.poles = aw_poles;
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "aw-symmetry";
        s.citation = "Prop 1.6";
        s.summary = "p_n(x; a,b,c,d) = p_n(x; d,c,b,a) (symmetry of the Askey-Wilson polynomials)";
        s.kind = IdentityKind::series_series;
        s.slots = {S::a, S::b, S::c, S::d};
        s.extras = {Extra::n, Extra::theta};
        s.domain_text = "0 <= n <= " + std::to_string(kMaxAWDegree) + "; 0 <= theta <= pi";
        s.default_tolerance = 1e-10;
        s.domain = [](const ParameterPoint& p) -> std::optional<std::string> {
            if (*p.n < 0 || *p.n > kMaxAWDegree)
                return "0 <= n <= " + std::to_string(kMaxAWDegree);
            if (!(*p.theta >= 0.0 && *p.theta <= pi))
                return "0 <= theta <= pi";
            return std::nullopt;
        };
        s.lhs = [](const ParameterPoint& p, const EvalContext&) {
            return aw_poly(*p.n, std::cos(*p.theta), aw_params(p));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const AWParams w = aw_params(p);
            return aw_poly(*p.n, std::cos(*p.theta), AWParams{w.d, w.c, w.b, w.a, w.q});
        };
        s.sampler = [grid](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::a, S::b, S::c, S::d});
            p.n = dr.integer(0, 8);
            p.theta = grid[dr.integer(0, kThetaGridSize - 1)];
            return p;
        };
        s.poles = aw_poles;
        reg.push_back(std::move(s));
    }

    // ---- Rogers family --------------------------------------------------------
    {
        IdentitySpec s;
        s.id = "rogers-6w5";
        s.citation = "Prop 1.4";
        s.summary = "6W5(alpha; b, c, d; q, q alpha/bcd) = (q alpha, q alpha/bc, q alpha/bd, q alpha/cd)_inf / "
                    "(q alpha/b, q alpha/c, q alpha/d, q alpha/bcd)_inf";
        s.slots = {S::alpha, S::b, S::c, S::d};
        s.domain_text = "|q alpha/bcd| < 1";
        s.default_tolerance = 1e-10;
        s.domain = [](const ParameterPoint& p) -> std::optional<std::string> {
            const QComplex bcd = p[S::b] * p[S::c] * p[S::d];
            if (bcd == QComplex{0.0, 0.0} || !(std::abs(p.q().value() * p[S::alpha] / bcd) < 1.0))
                return "|q alpha/bcd| < 1";
            return std::nullopt;
        };
        s.lhs = [](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], b = p[S::b], c = p[S::c], d = p[S::d];
            return vwp_terms(al, {b, c, d}, {qv * al / b, qv * al / c, qv * al / d}, p.q(), qv * al / (b * c * d));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], b = p[S::b], c = p[S::c], d = p[S::d];
            return qpoch_multi({qv * al, qv * al / (b * c), qv * al / (b * d), qv * al / (c * d)}, p.q(), infinity)
                   / qpoch_multi({qv * al / b, qv * al / c, qv * al / d, qv * al / (b * c * d)}, p.q(), infinity);
        };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p(q);
            p.set(S::alpha, dr.param());
            for (Slot x : {S::b, S::c, S::d})
                p.set(x, dr.param(0.3, 1.5));
            return p;
        };
        s.accept = [](const ParameterPoint& p) {
            return std::abs(p.q().value() * p[S::alpha] / (p[S::b] * p[S::c] * p[S::d])) <= 0.9;
        };
        s.poles = [](const ParameterPoint& p) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], b = p[S::b], c = p[S::c], d = p[S::d];
            return std::vector<QComplex>{qv * al / b, qv * al / c, qv * al / d, qv * al / (b * c * d), al};
        };
        reg.push_back(std::move(s));
    }

    auto ext_params = [](const ParameterPoint& p) {
        return ExtRogersParams{p[S::alpha], p[S::a], p[S::b], p[S::c], p[S::beta],
                               p.has(S::gamma) ? p[S::gamma] : QComplex(0.0), p.q()};
    };
    auto ext_domain = [ext_params](const ParameterPoint& p, bool with_gamma) -> std::optional<std::string> {
        const auto e = ext_params(p);
        const double q2 = e.q.value() * e.q.value();
        const QComplex base = e.alpha * e.a * e.b * e.c / q2;
        if (!(std::abs(base * e.beta) < 1.0) || (with_gamma && !(std::abs(base * e.gamma) < 1.0)))
            return with_gamma ? "max(|alpha beta abc/q^2|, |alpha gamma abc/q^2|) < 1" : "|alpha beta abc/q^2| < 1";
        if (e.a == QComplex{0.0, 0.0} || e.b == QComplex{0.0, 0.0} || e.c == QComplex{0.0, 0.0})
            return "a, b, c != 0";
        return std::nullopt;
    };
    auto ext_sampler = [](bool with_gamma) {
        return [with_gamma](Draw& dr, Base q) {
            ParameterPoint p(q);
            p.set(S::alpha, dr.param()).set(S::beta, dr.param());
            if (with_gamma)
                p.set(S::gamma, dr.param());
            for (Slot x : {S::a, S::b, S::c})
                p.set(x, dr.param(0.3, 0.9));
            return p;
        };
    };
    auto ext_accept = [ext_params](const ParameterPoint& p) {
        // keep the outer series comfortably convergent
        const auto e = ext_params(p);
        return std::abs(e.alpha * e.a * e.b * e.c) / (e.q.value() * e.q.value()) <= 0.9;
    };
    auto ext_poles = [ext_params](const ParameterPoint& p) {
        const auto e = ext_params(p);
        const double qv = e.q.value();
        return std::vector<QComplex>{e.alpha * e.a, e.alpha * e.b, e.alpha * e.c, qv / e.a, qv / e.b,
                                     e.alpha * e.beta * e.gamma * e.a * e.b / qv,
                                     e.alpha * e.beta * e.a * e.b * e.c / (qv * qv),
                                     e.alpha * e.gamma * e.a * e.b * e.c / (qv * qv)};
    };
    {
        IdentitySpec s;
        s.id = "ext-rogers";
        s.citation = "Thm 1.4";
        s.summary = "extended Rogers sum: 4phi3-weighted very-well-poised series = 6-over-6 product quotient";
        s.slots = {S::alpha, S::a, S::b, S::c, S::beta, S::gamma};
        s.domain_text = "max(|alpha beta abc/q^2|, |alpha gamma abc/q^2|) < 1";
        s.default_tolerance = 1e-10;
        s.domain = [ext_domain](const ParameterPoint& p) { return ext_domain(p, true); };
        s.lhs = [ext_params](const ParameterPoint& p, const EvalContext&) { return ext_rogers_lhs(ext_params(p)); };
        s.rhs = [ext_params](const ParameterPoint& p, const EvalContext&) { return ext_rogers_rhs(ext_params(p)); };
        s.sampler = ext_sampler(true);
        s.accept = ext_accept;
        s.poles = ext_poles;
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "ext-rogers-gamma0";
        s.citation = "Thm 1.4 (gamma = 0)";
        s.summary = "extended Rogers sum at gamma = 0: 3phi2-weighted very-well-poised series = 4-over-4 quotient";
        s.slots = {S::alpha, S::a, S::b, S::c, S::beta};
        s.domain_text = "|alpha beta abc/q^2| < 1";
        s.default_tolerance = 1e-10;
        s.domain = [ext_domain](const ParameterPoint& p) { return ext_domain(p, false); };
        s.lhs = [ext_params](const ParameterPoint& p, const EvalContext&) {
            return ext_rogers_lhs(ext_params(p), false);
        };
        s.rhs = [ext_params](const ParameterPoint& p, const EvalContext&) {
            return ext_rogers_rhs(ext_params(p), false);
        };
        s.sampler = ext_sampler(false);
        s.accept = ext_accept;
        s.poles = ext_poles;
        reg.push_back(std::move(s));
    }
    {
        auto sub = [](const ParameterPoint& p) {
            return ExtRogersSubParams{p[S::alpha], p[S::a], p[S::b], p[S::c], p[S::t], p[S::beta], p[S::gamma], p.q()};
        };
        IdentitySpec s;
        s.id = "ext-rogers-sub";
        s.citation = "Thm 1.4 (c -> qt, (a, b) -> (q/ab, q/ac))";
        s.summary = "substituted extended Rogers sum with (1/t; q)_n and X = q alpha/a^2bc";
        s.slots = {S::alpha, S::a, S::b, S::c, S::t, S::beta, S::gamma};
        s.domain_text = "max(|X beta t|, |X gamma t|) < 1 with X = q alpha/a^2bc; a, b, c, t != 0";
        s.default_tolerance = 1e-10;
        s.domain = [sub](const ParameterPoint& p) -> std::optional<std::string> {
            const auto e = sub(p);
            if (e.a == QComplex{0.0, 0.0} || e.b == QComplex{0.0, 0.0} || e.c == QComplex{0.0, 0.0}
                || e.t == QComplex{0.0, 0.0})
                return "a, b, c, t != 0";
            const QComplex x = e.q.value() * e.alpha / (e.a * e.a * e.b * e.c);
            if (!(std::abs(x * e.beta * e.t) < 1.0) || !(std::abs(x * e.gamma * e.t) < 1.0))
                return "max(|X beta t|, |X gamma t|) < 1 with X = q alpha/a^2bc";
            return std::nullopt;
        };
        s.lhs = [sub](const ParameterPoint& p, const EvalContext&) { return ext_rogers_sub_lhs(sub(p)); };
        s.rhs = [sub](const ParameterPoint& p, const EvalContext&) { return ext_rogers_sub_rhs(sub(p)); };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p(q);
            p.set(S::alpha, dr.param()).set(S::beta, dr.param()).set(S::gamma, dr.param()).set(S::t, dr.param());
            for (Slot x : {S::a, S::b, S::c})
                p.set(x, dr.param(0.5, 0.95));
            return p;
        };
        s.accept = [sub](const ParameterPoint& p) {
            const auto e = sub(p);
            return std::abs(e.q.value() * e.alpha * e.t / (e.a * e.a * e.b * e.c)) <= 0.9;
        };
        s.poles = [sub](const ParameterPoint& p) {
            const auto e = sub(p);
            const double qv = e.q.value();
            const QComplex x = qv * e.alpha / (e.a * e.a * e.b * e.c);
            return std::vector<QComplex>{e.a * e.b, e.a * e.c, qv * e.alpha / (e.a * e.b), qv * e.alpha / (e.a * e.c),
                                         e.alpha * e.t * qv, x * e.beta * e.gamma, x * e.beta * e.t,
                                         x * e.gamma * e.t, e.alpha};
        };
        reg.push_back(std::move(s));
    }

    // ---- generating functions -----------------------------------------------
    for (const auto form : {GenFuncForm::d_form, GenFuncForm::a_form}) {
        const bool dform = form == GenFuncForm::d_form;
        IdentitySpec s;
        s.id = dform ? "genfunc-d" : "genfunc-a";
        s.citation = dform ? "Prop 1.5" : "Prop 1.7";
        s.summary = dform ? "sum_n Delta_n(t) p_n(cos theta) = (abcd, adt, bdt, cdt, de^{+-i theta})_inf / "
                            "(abcdt, ad, bd, cd, dte^{+-i theta})_inf"
                          : "generating function with a and d interchanged";
        s.kind = IdentityKind::series_series;
        s.slots = {S::a, S::b, S::c, S::d, S::t};
        s.extras = {Extra::theta};
        s.domain_text = std::string(dform ? "|dt| < 1" : "|at| < 1") + "; max(|a|,|b|,|c|,|d|) < 1";
        s.default_tolerance = 1e-9;
        s.domain = [dform, abcd_domain](const ParameterPoint& p) -> std::optional<std::string> {
            const QComplex x = dform ? p[S::d] : p[S::a];
            if (!(std::abs(x * p[S::t]) < 1.0))
                return dform ? "|dt| < 1" : "|at| < 1";
            if (!(*p.theta >= 0.0 && *p.theta <= pi))
                return "0 <= theta <= pi";
            return abcd_domain(p);
        };
        s.lhs = [form](const ParameterPoint& p, const EvalContext&) {
            return gen_func_series(*p.theta, aw_params(p), p[S::t], form);
        };
        s.rhs = [form](const ParameterPoint& p, const EvalContext&) {
            return gen_func_rhs(*p.theta, aw_params(p), p[S::t], form);
        };
        s.sampler = [grid](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::a, S::b, S::c, S::d});
            p.set(S::t, dr.param(0.05, 1.0));
            p.theta = grid[dr.integer(0, kThetaGridSize - 1)];
            return p;
        };
        s.accept = [dform](const ParameterPoint& p) {
            return std::abs((dform ? p[S::d] : p[S::a]) * p[S::t]) <= 0.5;
        };
        s.poles = [](const ParameterPoint& p) {
            const AWParams w = aw_params(p);
            const QComplex t = p[S::t];
            return std::vector<QComplex>{w.a * w.d, w.b * w.d, w.c * w.d, w.a * w.b, w.a * w.c,
                                         w.a * w.b * w.c * w.d * t};
        };
        reg.push_back(std::move(s));
    }

    // ---- Nassrallah-Rahman family -------------------------------------------
    {
        IdentitySpec s;
        s.id = "nassrallah-rahman";
        s.citation = "Thm 2.1";
        s.summary = "int h(cos 2theta; 1) h(cos theta; d) / h(cos theta; a,b,c,u,v) = products x "
                    "8W7(abcd/q; ab, ac, bc, d/u, d/v; q, uv)";
        s.kind = IdentityKind::series_integral;
        s.slots = {S::a, S::b, S::c, S::d, S::u, S::v};
        s.domain_text = "max(|a|,|b|,|c|,|u|,|v|) < 1; u, v != 0";
        s.default_tolerance = 1e-7;
        s.domain = [abcuv_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (p[S::u] == QComplex{0.0, 0.0} || p[S::v] == QComplex{0.0, 0.0})
                return "u, v != 0";
            return abcuv_domain(p);
        };
        s.lhs = [](const ParameterPoint& p, const EvalContext& ctx) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], d = p[S::d], u = p[S::u], v = p[S::v];
            const Base q = p.q();
            return integrate_theta([=](double th) { return nr_integrand(th, a, b, c, u, v, d, q); }, ctx);
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], d = p[S::d], u = p[S::u], v = p[S::v];
            const Base q = p.q();
            const double qv = q.value();
            const EvalResult pref =
                exact(2.0 * pi) * qpoch_multi({a * b * c * u, a * b * c * v, a * d, b * d, c * d}, q, infinity)
                / qpoch_multi({QComplex(qv), a * b * c * d, a * b, a * c, a * u, a * v, b * c, b * u, b * v, c * u,
                               c * v},
                              q, infinity);
            return pref
                   * vwp_terms(a * b * c * d / qv, {a * b, a * c, b * c, d / u, d / v},
                               {c * d, b * d, a * d, a * b * c * u, a * b * c * v}, q, u * v);
        };
        s.sampler = [](Draw& dr, Base q) { return draw_slots(dr, q, {S::a, S::b, S::c, S::d, S::u, S::v}); };
        s.poles = [](const ParameterPoint& p) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], d = p[S::d], u = p[S::u], v = p[S::v];
            return std::vector<QComplex>{a * b * c * d, c * d, b * d, a * d, a * b * c * u, a * b * c * v};
        };
        reg.push_back(std::move(s));
    }
    auto abcuv_poles = [](const ParameterPoint& p) {
        const QComplex a = p[S::a], b = p[S::b], c = p[S::c], u = p[S::u], v = p[S::v];
        return std::vector<QComplex>{a * b, a * c, a * u, a * v, b * c, b * u, b * v, c * u, c * v, u * v,
                                     a * b * c * u, a * b * c * v};
    };
    {
        IdentitySpec s;
        s.id = "rahman";
        s.citation = "Thm 2.2";
        s.summary = "int h(cos 2theta; 1) h(cos theta; abcuv) / h(cos theta; a,b,c,u,v) = "
                    "2pi (abcu, abcv, abuv, acuv, bcuv)_inf / (q, ab, ac, au, av, bc, bu, bv, cu, cv, uv)_inf";
        s.kind = IdentityKind::series_integral;
        s.slots = {S::a, S::b, S::c, S::u, S::v};
        s.domain_text = "max(|a|,|b|,|c|,|u|,|v|) < 1";
        s.default_tolerance = 1e-7;
        s.domain = abcuv_domain;
        s.lhs = [](const ParameterPoint& p, const EvalContext& ctx) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], u = p[S::u], v = p[S::v];
            const Base q = p.q();
            return integrate_theta([=](double th) { return nr_integrand(th, a, b, c, u, v, a * b * c * u * v, q); },
                                   ctx);
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], u = p[S::u], v = p[S::v];
            const Base q = p.q();
            return exact(2.0 * pi)
                   * qpoch_multi({a * b * c * u, a * b * c * v, a * b * u * v, a * c * u * v, b * c * u * v}, q,
                                 infinity)
                   / qpoch_multi({QComplex(q.value()), a * b, a * c, a * u, a * v, b * c, b * u, b * v, c * u, c * v,
                                  u * v},
                                 q, infinity);
        };
        s.sampler = [](Draw& dr, Base q) { return draw_slots(dr, q, {S::a, S::b, S::c, S::u, S::v}); };
        s.poles = abcuv_poles;
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "isv";
        s.citation = "Thm 2.3";
        s.summary = "int h(cos 2theta; 1) / h(cos theta; a,b,c,u,v) = products x 3phi2(ab, ac, bc; abcu, abcv; q, uv)";
        s.kind = IdentityKind::series_integral;
        s.slots = {S::a, S::b, S::c, S::u, S::v};
        s.domain_text = "max(|a|,|b|,|c|,|u|,|v|) < 1";
        s.default_tolerance = 1e-7;
        s.domain = abcuv_domain;
        s.lhs = [](const ParameterPoint& p, const EvalContext& ctx) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], u = p[S::u], v = p[S::v];
            const Base q = p.q();
            return integrate_theta([=](double th) { return nr_integrand(th, a, b, c, u, v, 0.0, q); }, ctx);
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c], u = p[S::u], v = p[S::v];
            const Base q = p.q();
            const EvalResult pref =
                exact(2.0 * pi) * qpoch_multi({a * b * c * u, a * b * c * v}, q, infinity)
                / qpoch_multi({QComplex(q.value()), a * b, a * c, a * u, a * v, b * c, b * u, b * v, c * u, c * v}, q,
                              infinity);
            return pref * phi_eval(SeriesSpec({a * b, a * c, b * c}, {a * b * c * u, a * b * c * v}, q, u * v));
        };
        s.sampler = [](Draw& dr, Base q) { return draw_slots(dr, q, {S::a, S::b, S::c, S::u, S::v}); };
        s.poles = abcuv_poles;
        reg.push_back(std::move(s));
    }

    // ---- twelve-parameter integral and double series ------------------------
    const std::vector<Slot> twelve_slots{S::a, S::b, S::c, S::d, S::r, S::s,
                                         S::t, S::h, S::z, S::beta, S::delta};
    auto twelve_domain = [](const ParameterPoint& p) -> std::optional<std::string> {
        if (auto bad = require_below(p, {S::a, S::b, S::c, S::d, S::r, S::s, S::t, S::h}))
            return bad;
        if (!(std::abs(p[S::z]) <= 1.0))
            return "|z| <= 1";
        return std::nullopt;
    };
    auto twelve_sampler = [](Draw& dr, Base q) {
        return draw_slots(dr, q, {S::a, S::b, S::c, S::d, S::r, S::s, S::t, S::h, S::z, S::beta, S::delta});
    };
    auto twelve_poles = [](const ParameterPoint& p) {
        auto v = five_poles(five_params(p));
        for (Slot x : {S::s, S::t, S::h})
            v.push_back(p[x]);
        return v;
    };
    auto edge_z = [](const ParameterPoint& p) { return std::abs(p[S::z]) > 0.95; };
    {
        IdentitySpec s;
        s.id = "thm18";
        s.citation = "Thm 1.8";
        s.summary = "twelve-parameter q-beta integral = products x outer sum of q^{C(n,2)}-rescaled terminating 4phi3";
        s.kind = IdentityKind::series_integral;
        s.slots = twelve_slots;
        s.domain_text = "alpha = a^2bcdr/q; max(|a|,|b|,|c|,|d|,|r|,|s|,|t|,|h|) < 1, |z| < 1 "
                        "(|z| = 1 is run but flagged experimental)";
        s.default_tolerance = 1e-7;
        s.domain = twelve_domain;
        s.lhs = [](const ParameterPoint& p, const EvalContext& ctx) {
            return integrate_theta([p](double th) { return thm18_integrand(th, p); }, ctx);
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const TwelveParams t = twelve_params(p);
            return twelve_integral_prefactor(t) * twelve_param_sum(t);
        };
        s.sampler = twelve_sampler;
        s.poles = twelve_poles;
        s.experimental = edge_z;
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "thm19";
        s.citation = "Thm 1.9";
        s.summary = "double sum with inner 3phi2(ab q^n, ac q^n, bc; abcd q^n, abcr q^n; q, dr) = "
                    "(abdr, acdr)_inf/(dr, q alpha)_inf x the outer sum of thm18";
        s.kind = IdentityKind::series_series;
        s.slots = twelve_slots;
        s.domain_text = "alpha = a^2bcdr/q; max(|a|,|b|,|c|,|d|,|r|,|s|,|t|,|h|) < 1, |z| < 1 "
                        "(|z| = 1 is run but flagged experimental)";
        s.default_tolerance = 1e-8;
        s.domain = twelve_domain;
        s.lhs = [](const ParameterPoint& p, const EvalContext&) { return double_series_lhs(twelve_params(p)); };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            const TwelveParams t = twelve_params(p);
            return double_series_prefactor(t) * twelve_param_sum(t);
        };
        s.sampler = twelve_sampler;
        s.poles = twelve_poles;
        s.experimental = edge_z;
        reg.push_back(std::move(s));
    }

    // ---- general transformations ---------------------------------------------
    auto gt = [](const ParameterPoint& p) { return GeneralTransformParams{p[S::alpha], p[S::u], p[S::v], p.q()}; };
    auto gt_domain = [](const ParameterPoint& p, bool with_z) -> std::optional<std::string> {
        const QComplex al = p[S::alpha], u = p[S::u], v = p[S::v];
        if (u == QComplex{0.0, 0.0} || v == QComplex{0.0, 0.0})
            return "u, v != 0";
        if (!(std::abs(al * u) < 1.0) || !(std::abs(al * v) < 1.0) || !(std::abs(al * u * v / p.q().value()) < 1.0))
            return "max(|alpha u|, |alpha v|, |alpha uv/q|) < 1";
        if (with_z && !(std::abs(al * u * p[S::z]) < 1.0))
            return "|alpha u z| < 1";
        return std::nullopt;
    };
    auto gt_poles = [](const ParameterPoint& p) {
        const QComplex al = p[S::alpha], u = p[S::u], v = p[S::v];
        return std::vector<QComplex>{al * u, al * v, p.q().value() / v, al};
    };
    {
        IdentitySpec s;
        s.id = "prop41";
        s.citation = "Prop 4.1";
        s.summary = "general transformation for an arbitrary sequence A_n, here A_n = z^n";
        s.slots = {S::alpha, S::u, S::v, S::z};
        s.domain_text = "max(|alpha u|, |alpha v|, |alpha uv/q|, |alpha u z|) < 1; u, v != 0";
        s.default_tolerance = 1e-8;
        s.domain = [gt_domain](const ParameterPoint& p) { return gt_domain(p, true); };
        s.lhs = [gt](const ParameterPoint& p, const EvalContext&) {
            const QComplex z = p[S::z];
            return general_transform_lhs(gt(p), [z](int n) { return std::pow(z, n); });
        };
        s.rhs = [gt](const ParameterPoint& p, const EvalContext&) {
            const QComplex z = p[S::z];
            return general_transform_rhs(gt(p), [z](int n) { return std::pow(z, n); });
        };
        s.sampler = [](Draw& dr, Base q) { return draw_slots(dr, q, {S::alpha, S::u, S::v, S::z}); };
        s.poles = gt_poles;
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "prop41-qexp";
        s.citation = "Prop 4.1";
        s.summary = "general transformation with A_n = 1/(q; q)_n";
        s.slots = {S::alpha, S::u, S::v};
        s.domain_text = "max(|alpha u|, |alpha v|, |alpha uv/q|) < 1; u, v != 0";
        s.default_tolerance = 1e-8;
        s.domain = [gt_domain](const ParameterPoint& p) { return gt_domain(p, false); };
        s.lhs = [gt](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            return general_transform_lhs(gt(p), [qv](int n) { return 1.0 / q_factorial(n, qv); });
        };
        s.rhs = [gt](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            return general_transform_rhs(gt(p), [qv](int n) { return 1.0 / q_factorial(n, qv); });
        };
        s.sampler = [](Draw& dr, Base q) { return draw_slots(dr, q, {S::alpha, S::u, S::v}); };
        s.poles = gt_poles;
        reg.push_back(std::move(s));
    }
    {
        auto ph = [](const ParameterPoint& p) {
            return Phi43TransformParams{p[S::alpha], p[S::u], p[S::v], p[S::z], p[S::beta],
                                        p[S::delta], p[S::s], p[S::t], p[S::h], p.q()};
        };
        IdentitySpec s;
        s.id = "prop42";
        s.citation = "Prop 4.2";
        s.summary = "4phi3(q/u, q/v, beta, delta; s, t, h; q, alpha uvz/q) expanded in rescaled terminating 4phi3";
        s.slots = {S::alpha, S::u, S::v, S::z, S::beta, S::delta, S::s, S::t, S::h};
        s.domain_text = "max(|alpha u|, |alpha v|, |alpha uv/q|, |alpha uvz/q|) < 1; max(|s|,|t|,|h|,|z|) < 1";
        s.default_tolerance = 1e-8;
        s.domain = [gt_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (auto bad = gt_domain(p, false))
                return bad;
            if (!(std::abs(p[S::alpha] * p[S::u] * p[S::v] * p[S::z] / p.q().value()) < 1.0))
                return "|alpha uvz/q| < 1";
            return require_below(p, {S::s, S::t, S::h, S::z});
        };
        s.lhs = [ph](const ParameterPoint& p, const EvalContext&) { return phi43_transform_lhs(ph(p)); };
        s.rhs = [ph](const ParameterPoint& p, const EvalContext&) { return phi43_transform_rhs(ph(p)); };
        s.sampler = [](Draw& dr, Base q) {
            return draw_slots(dr, q, {S::alpha, S::u, S::v, S::z, S::beta, S::delta, S::s, S::t, S::h});
        };
        s.poles = [gt_poles](const ParameterPoint& p) {
            auto v = gt_poles(p);
            for (Slot x : {S::s, S::t, S::h})
                v.push_back(p[x]);
            return v;
        };
        reg.push_back(std::move(s));
    }

    // ---- special cases of the twelve-parameter integral -----------------------
    auto special = [&](std::string id, std::string citation, std::string summary, IdentityKind kind,
                       std::vector<Slot> extra_slots, double tol, SideEvaluator lhs, SideEvaluator rhs) {
        IdentitySpec s;
        s.id = std::move(id);
        s.citation = std::move(citation);
        s.summary = std::move(summary);
        s.kind = kind;
        s.slots = {S::a, S::b, S::c, S::d, S::r};
        s.slots.insert(s.slots.end(), extra_slots.begin(), extra_slots.end());
        s.domain_text = "alpha = a^2bcdr/q; max(|a|,|b|,|c|,|d|,|r|) < 1";
        s.default_tolerance = tol;
        s.domain = abcdr_domain;
        s.lhs = std::move(lhs);
        s.rhs = std::move(rhs);
        s.sampler = [extra_slots](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::a, S::b, S::c, S::d, S::r});
            for (Slot x : extra_slots)
                p.set(x, dr.param());
            return p;
        };
        s.poles = five_pole_list;
        return s;
    };
    auto pref12 = [](const ParameterPoint& p) { return twelve_integral_prefactor(five_params(p).twelve()); };
    auto pref2 = [](const ParameterPoint& p) { return double_series_prefactor(five_params(p).twelve()); };
    auto vwp61 = [](const ParameterPoint& p) {
        const FiveParams f = five_params(p);
        const QComplex z = p[S::z];
        const QComplex A = f.a * f.a * f.b * f.c * f.d * f.r;
        return qpoch_multi({A * z, f.b * f.c * f.d * f.r * z}, f.q, infinity) * thm61_vwp(f, z);
    };
    auto vwp62 = [](const ParameterPoint& p) {
        const FiveParams f = five_params(p);
        return thm61_vwp(f, p[S::z]);
    };
    {
        IdentitySpec s = special(
            "thm61", "Thm 6.1",
            "int h(cos 2theta; 1) h(cos theta; abcdrz) / h(cos theta; a,b,c,d,r) = products x "
            "8W7(a^2bcdr/q; ab, ac, ad, ar, 1/z; q, bcdrz)",
            IdentityKind::series_integral, {S::z}, 1e-7,
            [](const ParameterPoint& p, const EvalContext& ctx) {
                const FiveParams f = five_params(p);
                const QComplex w = f.a * f.b * f.c * f.d * f.r * p[S::z];
                return integrate_theta(
                    [f, w](double th) { return five_weight(th, f) * h_theta(th, w, f.q.value()).value; }, ctx);
            },
            [pref12, vwp61](const ParameterPoint& p, const EvalContext&) { return pref12(p) * vwp61(p); });
        s.domain_text += "; z != 0, |bcdrz| < 1";
        s.domain = [abcdr_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (auto bad = abcdr_domain(p))
                return bad;
            if (p[S::z] == QComplex{0.0, 0.0})
                return "z != 0";
            if (!(std::abs(p[S::b] * p[S::c] * p[S::d] * p[S::r] * p[S::z]) < 1.0))
                return "|bcdrz| < 1";
            return std::nullopt;
        };
        auto base_poles = s.poles;
        s.poles = [base_poles](const ParameterPoint& p) {
            auto v = base_poles(p);
            const QComplex A = p[S::a] * p[S::a] * p[S::b] * p[S::c] * p[S::d] * p[S::r];
            v.push_back(A * p[S::z]);
            return v;
        };
        reg.push_back(s);

        IdentitySpec t = s;
        t.id = "thm62";
        t.citation = "Thm 6.2";
        t.summary = "series form of thm61: 3phi2-weighted sum with (bcdrz)^n = (abdr, acdr)_inf/(dr, a^2bcdr)_inf x 8W7";
        t.kind = IdentityKind::series_series;
        t.default_tolerance = 1e-8;
        t.lhs = [](const ParameterPoint& p, const EvalContext&) {
            const FiveParams f = five_params(p);
            const QComplex A = f.a * f.a * f.b * f.c * f.d * f.r;
            return five_g3_sum(f, {}, {A * p[S::z]}, p[S::z]);
        };
        t.rhs = [pref2, vwp62](const ParameterPoint& p, const EvalContext&) { return pref2(p) * vwp62(p); };
        reg.push_back(std::move(t));
    }
    {
        auto uv_domain = [abcdr_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (auto bad = abcdr_domain(p))
                return bad;
            if (p[S::u] == QComplex{0.0, 0.0} || p[S::v] == QComplex{0.0, 0.0})
                return "u, v != 0";
            return std::nullopt;
        };
        auto uv_poles = [five_pole_list](const ParameterPoint& p) {
            auto v = five_pole_list(p);
            const QComplex al = five_params(p).alpha();
            v.push_back(al * p[S::u]);
            v.push_back(al * p[S::v]);
            return v;
        };
        IdentitySpec s = special(
            "thm63", "Thm 6.3",
            "integral with 3phi2(ae^{+-i theta}, alpha uv/q; alpha u, alpha v; q, bcdr) = products x "
            "Saalschuetz-collapsed outer sum",
            IdentityKind::series_integral, {S::u, S::v}, 1e-7,
            [](const ParameterPoint& p, const EvalContext& ctx) {
                const FiveParams f = five_params(p);
                const QComplex al = f.alpha(), u = p[S::u], v = p[S::v];
                return five_kernel_integral(f, {al * u * v / f.q.value()}, {al * u, al * v}, ctx);
            },
            [pref12](const ParameterPoint& p, const EvalContext&) {
                return pref12(p) * saalschutz_outer_sum(five_params(p), p[S::u], p[S::v]);
            });
        s.domain_text += "; u, v != 0";
        s.domain = uv_domain;
        s.poles = uv_poles;
        reg.push_back(s);

        IdentitySpec t = s;
        t.id = "thm64";
        t.citation = "Thm 6.4";
        t.summary = "series form of thm63";
        t.kind = IdentityKind::series_series;
        t.default_tolerance = 1e-8;
        t.lhs = [](const ParameterPoint& p, const EvalContext&) {
            const FiveParams f = five_params(p);
            const QComplex al = f.alpha(), u = p[S::u], v = p[S::v];
            return five_g3_sum(f, {al * u * v / f.q.value()}, {al * u, al * v});
        };
        t.rhs = [pref2](const ParameterPoint& p, const EvalContext&) {
            return pref2(p) * saalschutz_outer_sum(five_params(p), p[S::u], p[S::v]);
        };
        reg.push_back(std::move(t));
    }
    {
        auto sqa = [](const FiveParams& f) { return std::sqrt(f.q.value() * f.alpha()); };
        IdentitySpec s = special(
            "thm65", "Thm 6.5",
            "integral with 3phi2(ae^{+-i theta}, 0; sqrt(q alpha), -sqrt(q alpha); q, bcdr) = products x "
            "Verma-Jain-collapsed outer sum",
            IdentityKind::series_integral, {}, 1e-7,
            [sqa](const ParameterPoint& p, const EvalContext& ctx) {
                const FiveParams f = five_params(p);
                return five_kernel_integral(f, {0.0}, {sqa(f), -sqa(f)}, ctx);
            },
            [pref12](const ParameterPoint& p, const EvalContext&) {
                return pref12(p) * verma_jain_outer_sum(five_params(p));
            });
        reg.push_back(s);

        IdentitySpec t = s;
        t.id = "thm66";
        t.citation = "Thm 6.6";
        t.summary = "series form of thm65";
        t.kind = IdentityKind::series_series;
        t.default_tolerance = 1e-8;
        t.lhs = [sqa](const ParameterPoint& p, const EvalContext&) {
            const FiveParams f = five_params(p);
            return five_g3_sum(f, {}, {sqa(f), -sqa(f)});
        };
        t.rhs = [pref2](const ParameterPoint& p, const EvalContext&) {
            return pref2(p) * verma_jain_outer_sum(five_params(p));
        };
        reg.push_back(std::move(t));

        auto lam_domain = [abcdr_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (auto bad = abcdr_domain(p))
                return bad;
            if (p[S::lambda] == QComplex{0.0, 0.0})
                return "lambda != 0";
            return std::nullopt;
        };
        auto lam_poles = [five_pole_list](const ParameterPoint& p) {
            auto v = five_pole_list(p);
            const double qv = p.q().value();
            v.push_back(qv * p[S::lambda]);
            v.push_back(p[S::lambda]);
            return v;
        };
        IdentitySpec u = special(
            "thm67", "Thm 6.7",
            "integral with 4phi3(ae^{+-i theta}, sqrt(lambda), -sqrt(lambda); sqrt(q alpha), -sqrt(q alpha), lambda; "
            "q, bcdr) = products x q-Watson-collapsed outer sum",
            IdentityKind::series_integral, {S::lambda}, 1e-7,
            [sqa](const ParameterPoint& p, const EvalContext& ctx) {
                const FiveParams f = five_params(p);
                const QComplex lam = p[S::lambda], sl = std::sqrt(lam);
                return five_kernel_integral(f, {sl, -sl}, {sqa(f), -sqa(f), lam}, ctx);
            },
            [pref12](const ParameterPoint& p, const EvalContext&) {
                return pref12(p) * watson_outer_sum(five_params(p), p[S::lambda]);
            });
        u.domain_text += "; lambda != 0";
        u.domain = lam_domain;
        u.poles = lam_poles;
        reg.push_back(u);

        IdentitySpec w = u;
        w.id = "thm68";
        w.citation = "Thm 6.8";
        w.summary = "series form of thm67";
        w.kind = IdentityKind::series_series;
        w.default_tolerance = 1e-8;
        w.lhs = [sqa](const ParameterPoint& p, const EvalContext&) {
            const FiveParams f = five_params(p);
            const QComplex lam = p[S::lambda], sl = std::sqrt(lam);
            return five_g3_sum(f, {sl, -sl}, {sqa(f), -sqa(f), lam});
        };
        w.rhs = [pref2](const ParameterPoint& p, const EvalContext&) {
            return pref2(p) * watson_outer_sum(five_params(p), p[S::lambda]);
        };
        reg.push_back(std::move(w));
    }

    // ---- closed summations ------------------------------------------------------
    auto n_domain = [](const ParameterPoint& p) -> std::optional<std::string> {
        if (*p.n < 0 || *p.n > 40)
            return "0 <= n <= 40";
        return std::nullopt;
    };
    auto q_neg = [](const ParameterPoint& p) { return QComplex(std::pow(p.q().value(), -*p.n)); };
    {
        IdentitySpec s;
        s.id = "qgauss";
        s.citation = "q-Gauss sum";
        s.summary = "2phi1(a, b; c; q, c/ab) = (c/a, c/b)_inf / (c, c/ab)_inf";
        s.slots = {S::a, S::b, S::c};
        s.domain_text = "|c/ab| < 1; a, b != 0";
        s.default_tolerance = 1e-8;
        s.domain = [](const ParameterPoint& p) -> std::optional<std::string> {
            const QComplex ab = p[S::a] * p[S::b];
            if (ab == QComplex{0.0, 0.0})
                return "a, b != 0";
            if (!(std::abs(p[S::c] / ab) < 1.0))
                return "|c/ab| < 1";
            return std::nullopt;
        };
        s.lhs = [](const ParameterPoint& p, const EvalContext&) {
            const QComplex a = p[S::a], b = p[S::b], c = p[S::c];
            return phi_eval(SeriesSpec({a, b}, {c}, p.q(), c / (a * b)));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            return qgauss_sum(p[S::a], p[S::b], p[S::c], p.q());
        };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p(q);
            const QComplex a = dr.param(), b = dr.param();
            p.set(S::a, a).set(S::b, b).set(S::c, a * b * dr.param());
            return p;
        };
        s.poles = [](const ParameterPoint& p) { return std::vector<QComplex>{p[S::c], p[S::c] / (p[S::a] * p[S::b])}; };
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "qchu";
        s.citation = "q-Chu-Vandermonde sum";
        s.summary = "2phi1(q^{-n}, alpha q^n; q alpha z; q, qz) = (1/z)_n (-z)^n q^{-C(n,2)} / (q alpha z)_n";
        s.slots = {S::alpha, S::z};
        s.extras = {Extra::n};
        s.domain_text = "0 <= n <= 40; z != 0";
        s.default_tolerance = 1e-8;
        s.domain = [n_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (p[S::z] == QComplex{0.0, 0.0})
                return "z != 0";
            return n_domain(p);
        };
        s.lhs = [q_neg](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], z = p[S::z];
            return phi_eval(SeriesSpec({q_neg(p), al * std::pow(qv, *p.n)}, {qv * al * z}, p.q(), qv * z));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            return qchu_sum(*p.n, p[S::alpha], p[S::z], p.q());
        };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::alpha, S::z});
            p.n = dr.integer(0, 10);
            return p;
        };
        s.poles = [](const ParameterPoint& p) {
            return std::vector<QComplex>{p.q().value() * p[S::alpha] * p[S::z]};
        };
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "qsaalschutz";
        s.citation = "q-Pfaff-Saalschuetz sum";
        s.summary = "3phi2(q^{-n}, alpha q^n, alpha uv/q; alpha u, alpha v; q, q) = "
                    "(q/u, q/v)_n (alpha uv/q)^n / (alpha u, alpha v)_n";
        s.slots = {S::alpha, S::u, S::v};
        s.extras = {Extra::n};
        s.domain_text = "0 <= n <= 40; u, v != 0";
        s.default_tolerance = 1e-8;
        s.domain = [n_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (p[S::u] == QComplex{0.0, 0.0} || p[S::v] == QComplex{0.0, 0.0})
                return "u, v != 0";
            return n_domain(p);
        };
        s.lhs = [q_neg](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], u = p[S::u], v = p[S::v];
            return phi_eval(
                SeriesSpec({q_neg(p), al * std::pow(qv, *p.n), al * u * v / qv}, {al * u, al * v}, p.q(), qv));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            return qsaalschutz_sum(*p.n, p[S::alpha], p[S::u], p[S::v], p.q());
        };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::alpha, S::u, S::v});
            p.n = dr.integer(0, 10);
            return p;
        };
        s.poles = [](const ParameterPoint& p) {
            return std::vector<QComplex>{p[S::alpha] * p[S::u], p[S::alpha] * p[S::v]};
        };
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "verma-jain";
        s.citation = "Verma-Jain sum";
        s.summary = "3phi2(q^{-n}, alpha q^n, 0; sqrt(q alpha), -sqrt(q alpha); q, q) = 0 (n odd), "
                    "(-1)^l q^{l^2} (q; q^2)_l alpha^l / (q alpha; q^2)_l (n = 2l)";
        s.slots = {S::alpha};
        s.extras = {Extra::n};
        s.domain_text = "0 <= n <= 40";
        s.default_tolerance = 1e-8;
        s.domain = n_domain;
        s.lhs = [q_neg](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], r = std::sqrt(qv * al);
            return phi_eval(SeriesSpec({q_neg(p), al * std::pow(qv, *p.n), 0.0}, {r, -r}, p.q(), qv));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            return detail::verma_jain_closed(*p.n, p[S::alpha], p.q());
        };
        s.scale = [](const ParameterPoint& p) {
            // odd n: exact 0 on the right; measure against the size of the summands
            return std::abs(detail::verma_jain_closed(*p.n & ~1, p[S::alpha], p.q()).value);
        };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::alpha});
            p.n = dr.integer(0, 10);
            return p;
        };
        s.poles = [](const ParameterPoint& p) {
            const QComplex r = std::sqrt(p.q().value() * p[S::alpha]);
            return std::vector<QComplex>{r, -r};
        };
        reg.push_back(std::move(s));
    }
    {
        IdentitySpec s;
        s.id = "andrews-watson";
        s.citation = "Andrews q-Watson sum";
        s.summary = "4phi3(q^{-n}, alpha q^n, sqrt(lambda), -sqrt(lambda); sqrt(q alpha), -sqrt(q alpha), lambda; "
                    "q, q) = 0 (n odd), (q, alpha q/lambda; q^2)_{n/2} lambda^{n/2} / (q alpha, q lambda; q^2)_{n/2}";
        s.slots = {S::alpha, S::lambda};
        s.extras = {Extra::n};
        s.domain_text = "0 <= n <= 40; lambda != 0";
        s.default_tolerance = 1e-8;
        s.domain = [n_domain](const ParameterPoint& p) -> std::optional<std::string> {
            if (p[S::lambda] == QComplex{0.0, 0.0})
                return "lambda != 0";
            return n_domain(p);
        };
        s.lhs = [q_neg](const ParameterPoint& p, const EvalContext&) {
            const double qv = p.q().value();
            const QComplex al = p[S::alpha], lam = p[S::lambda];
            const QComplex r = std::sqrt(qv * al), sl = std::sqrt(lam);
            return phi_eval(SeriesSpec({q_neg(p), al * std::pow(qv, *p.n), sl, -sl}, {r, -r, lam}, p.q(), qv));
        };
        s.rhs = [](const ParameterPoint& p, const EvalContext&) {
            return detail::andrews_watson_closed(*p.n, p[S::alpha], p[S::lambda], p.q());
        };
        s.scale = [](const ParameterPoint& p) {
            return std::abs(detail::andrews_watson_closed(*p.n & ~1, p[S::alpha], p[S::lambda], p.q()).value);
        };
        s.sampler = [](Draw& dr, Base q) {
            ParameterPoint p = draw_slots(dr, q, {S::alpha, S::lambda});
            p.n = dr.integer(0, 10);
            return p;
        };
        s.poles = [](const ParameterPoint& p) {
            const QComplex r = std::sqrt(p.q().value() * p[S::alpha]);
            return std::vector<QComplex>{r, -r, p[S::lambda]};
        };
        reg.push_back(std::move(s));
    }
    (void)ok;
    return reg;
}

} // namespace detail

/// The identity catalogue, in registration order.
inline const std::vector<IdentitySpec>& registry()
{
    static const std::vector<IdentitySpec> reg = detail::build_registry();
    return reg;
}

inline const IdentitySpec& find_identity(std::string_view id)
{
    for (const auto& s : registry())
        if (s.id == id)
            return s;
    throw unknown_identity("unknown identity '" + std::string(id) + "'");
}

/// The hypothesis `p` violates, phrased "<citation> requires ...", or nothing.
inline std::optional<std::string> domain_violation(const IdentitySpec& spec, const ParameterPoint& p)
{
    for (Slot s : spec.slots)
        if (!p.has(s))
            return spec.citation + " requires parameter '" + std::string(slot_name(s)) + "'";
    for (Slot s : p.set_slots())
        if (std::find(spec.slots.begin(), spec.slots.end(), s) == spec.slots.end())
            return spec.citation + " does not take parameter '" + std::string(slot_name(s)) + "'"
                   + (s == Slot::alpha ? " (alpha is derived as a^2bcdr/q)" : "");
    for (Extra e : spec.extras) {
        if (e == Extra::n && !p.n)
            return spec.citation + " requires an index n";
        if (e == Extra::m && !p.m)
            return spec.citation + " requires an index m";
        if (e == Extra::theta && !p.theta)
            return spec.citation + " requires an angle theta";
    }
    if (auto bad = spec.domain(p))
        return spec.citation + " requires " + *bad;
    return std::nullopt;
}

namespace detail {

/// Runs one side, prefixing any failure with the side name.
inline EvalResult run_side(const char* side, const SideEvaluator& f, const ParameterPoint& p, const EvalContext& ctx)
{
    try {
        return f(p, ctx);
    } catch (const domain_error& e) {
        throw domain_error(std::string(side) + ": " + e.what());
    } catch (const convergence_error& e) {
        throw convergence_error(std::string(side) + ": " + e.what());
    } catch (const overflow_error& e) {
        throw overflow_error(std::string(side) + ": " + e.what());
    } catch (const std::exception& e) {
        throw error(std::string(side) + ": " + e.what());
    }
}

inline IdentityReport compare(std::string id, const ParameterPoint& p, const EvalResult& l, const EvalResult& r,
                              double tol, double scale)
{
    IdentityReport rep;
    rep.id = std::move(id);
    rep.point = p;
    rep.lhs = l.value;
    rep.rhs = r.value;
    rep.lhs_err = l.err_estimate;
    rep.rhs_err = r.err_estimate;
    rep.tolerance = tol;
    rep.rel_error = relative_error(l.value, r.value, scale);
    const double denom = std::max({std::abs(l.value), std::abs(r.value), scale, 1e-300});
    rep.pass = std::isfinite(rep.rel_error) && rep.rel_error <= std::max(tol, (rep.lhs_err + rep.rhs_err) / denom);
    rep.heuristic = l.heuristic || r.heuristic;
    return rep;
}

} // namespace detail

/// Evaluates both sides of `id` at `p` and compares them. A tolerance <= 0
/// selects the identity's default. Domain violations and evaluator failures
/// are thrown, the latter prefixed with "lhs: " or "rhs: ".
inline IdentityReport check(std::string_view id, const ParameterPoint& p, double tol = 0.0,
                            const EvalContext& ctx = {})
{
    const IdentitySpec& spec = find_identity(id);
    if (auto bad = domain_violation(spec, p))
        throw domain_error(*bad);
    const auto start = std::chrono::steady_clock::now();
    const EvalResult l = detail::run_side("lhs", spec.lhs, p, ctx);
    const EvalResult r = detail::run_side("rhs", spec.rhs, p, ctx);
    const double scale = spec.scale ? spec.scale(p) : 0.0;
    IdentityReport rep = detail::compare(spec.id, p, l, r, tol > 0.0 ? tol : spec.default_tolerance, scale);
    rep.experimental = spec.experimental && spec.experimental(p);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

/// Sample point `index` of identity `spec`: q cycles through cfg.qs, the rest
/// comes from a stream seeded by (seed, id, index). Candidates outside the
/// domain or within 1e-6 of a pole are redrawn.
inline ParameterPoint sample_point(const IdentitySpec& spec, const SampleConfig& cfg, std::uint64_t seed,
                                   std::size_t index)
{
    cfg.validate();
    SplitMix64 rng(sample_seed(seed, spec.id, index));
    Draw draw(rng, cfg);
    const Base q(cfg.qs[index % cfg.qs.size()]);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        ParameterPoint p = spec.sampler(draw, q);
        if (domain_violation(spec, p))
            continue;
        if (spec.accept && !spec.accept(p))
            continue;
        bool pole = false;
        if (spec.poles)
            for (const QComplex& b : spec.poles(p))
                pole = pole || near_pole(b, q.value());
        if (!pole)
            return p;
    }
    throw domain_error("could not draw an in-domain point for '" + spec.id + "'");
}

/// check() at a sampled point, with every failure turned into a failed record.
inline IdentityReport run_sample(const IdentitySpec& spec, const SampleConfig& cfg, std::uint64_t seed,
                                 std::size_t index, double tol = 0.0, const EvalContext& ctx = {})
{
    IdentityReport rep;
    rep.id = spec.id;
    rep.index = index;
    rep.tolerance = tol > 0.0 ? tol : spec.default_tolerance;
    try {
        rep.point = sample_point(spec, cfg, seed, index);
    } catch (const std::exception& e) {
        rep.error = std::string("sampling: ") + e.what();
        return rep;
    }
    try {
        rep = check(spec.id, rep.point, tol, ctx);
        rep.index = index;
    } catch (const std::exception& e) {
        rep.error = e.what();
        rep.pass = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Reductions

/// A specialization of a parent identity that lands on a child identity.
struct Reduction {
    std::string parent;
    std::string child;
    /// e.g. "r = 0".
    std::string embedding_text;
    double default_tolerance = 1e-9;
    /// Child point -> parent point.
    std::function<ParameterPoint(const ParameterPoint&)> embed;
};

inline const std::vector<Reduction>& reductions()
{
    using S = Slot;
    static const std::vector<Reduction> red = [] {
        std::vector<Reduction> v;
        v.push_back({"thm18", "aw-integral", "r = 0 (s, t, h, z, beta, delta fixed at 0.2, 0.3, 0.4, 0.5, 0.25, 0.35)",
                     1e-10, [](const ParameterPoint& c) {
                         ParameterPoint p(c.q());
                         for (Slot x : {S::a, S::b, S::c, S::d})
                             p.set(x, c[x]);
                         p.set(S::r, 0.0).set(S::s, 0.2).set(S::t, 0.3).set(S::h, 0.4);
                         p.set(S::z, 0.5).set(S::beta, 0.25).set(S::delta, 0.35);
                         return p;
                     }});
        v.push_back({"nassrallah-rahman", "rahman", "d = abcuv", 1e-9, [](const ParameterPoint& c) {
                         ParameterPoint p(c.q());
                         for (Slot x : {S::a, S::b, S::c, S::u, S::v})
                             p.set(x, c[x]);
                         p.set(S::d, c[S::a] * c[S::b] * c[S::c] * c[S::u] * c[S::v]);
                         return p;
                     }});
        v.push_back({"nassrallah-rahman", "isv", "d = 0", 1e-9, [](const ParameterPoint& c) {
                         ParameterPoint p(c.q());
                         for (Slot x : {S::a, S::b, S::c, S::u, S::v})
                             p.set(x, c[x]);
                         p.set(S::d, 0.0);
                         return p;
                     }});
        v.push_back({"thm61", "rahman", "z = 1, (d, r) = (u, v)", 1e-9, [](const ParameterPoint& c) {
                         ParameterPoint p(c.q());
                         for (Slot x : {S::a, S::b, S::c})
                             p.set(x, c[x]);
                         p.set(S::d, c[S::u]).set(S::r, c[S::v]).set(S::z, 1.0);
                         return p;
                     }});
        return v;
    }();
    return red;
}

inline const Reduction& find_reduction(std::string_view parent, std::string_view child)
{
    for (const auto& r : reductions())
        if (r.parent == parent && r.child == child)
            return r;
    throw unknown_identity("no reduction registered from '" + std::string(parent) + "' to '" + std::string(child)
                           + "'");
}

/// Closed side of the parent at the embedded point (lhs of the report) against
/// the closed side of the child at the child point (rhs).
inline IdentityReport reduce_check(std::string_view parent, std::string_view child, const ParameterPoint& child_point,
                                   double tol = 0.0, const EvalContext& ctx = {})
{
    const Reduction& red = find_reduction(parent, child);
    const IdentitySpec& ps = find_identity(parent);
    const IdentitySpec& cs = find_identity(child);
    if (auto bad = domain_violation(cs, child_point))
        throw domain_error(*bad);
    const ParameterPoint pp = red.embed(child_point);
    if (auto bad = domain_violation(ps, pp))
        throw domain_error(*bad);
    const auto start = std::chrono::steady_clock::now();
    const EvalResult l = detail::run_side("parent", ps.rhs, pp, ctx);
    const EvalResult r = detail::run_side("child", cs.rhs, child_point, ctx);
    IdentityReport rep =
        detail::compare(red.parent + "->" + red.child, child_point, l, r, tol > 0.0 ? tol : red.default_tolerance, 0.0);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace qseries
