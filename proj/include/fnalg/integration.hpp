#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "fnalg/config.hpp"
#include "fnalg/errors.hpp"
#include "fnalg/fn.hpp"

namespace fnalg {

struct QuadratureConfig {
    int panels = 256;  // even, >= 2
    int max_refinements = 12;
    double abs_tol = 1e-9;

    static QuadratureConfig current() {
        return QuadratureConfig{config::quad_panels(), 12, config::quad_tol()};
    }
};

namespace detail {

template <class F>
double simpson(const F& f, double lo, double hi, int panels) {
    const double h = (hi - lo) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; i += 2) odd += f(lo + i * h);
    for (int i = 2; i < panels; i += 2) even += f(lo + i * h);
    return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
}

/// Composite Simpson with panel doubling until successive estimates agree.
template <class F>
double integrate_callable(const F& f, double lo, double hi, const QuadratureConfig& cfg) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("definite_integral: limits must be finite");
    }
    if (lo == hi) return 0.0;
    if (lo > hi) return -integrate_callable(f, hi, lo, cfg);
    int panels = cfg.panels;
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    double previous = simpson(f, lo, hi, panels);
    double refined = previous;
    for (int level = 0; level < cfg.max_refinements; ++level) {
        panels *= 2;
        refined = simpson(f, lo, hi, panels);
        if (std::abs(refined - previous) <= cfg.abs_tol) return refined;
        if (level + 1 < cfg.max_refinements) previous = refined;
    }
    throw ConvergenceError("quadrature did not converge after " +
                           std::to_string(cfg.max_refinements) +
                           " refinements; last estimates " + format_number(previous) + " and " +
                           format_number(refined));
}

}  // namespace detail

/// Plain-callable entry point, shared by density normalization checks.
inline double definite_integral(const std::function<double(double)>& f, double lo, double hi,
                                QuadratureConfig cfg = QuadratureConfig::current()) {
    return detail::integrate_callable(f, lo, hi, cfg);
}

/// ∫ f over [lo, hi]. Uses a registered closed-form antiderivative when the
/// object carries one, otherwise composite Simpson with panel doubling.
/// Antisymmetric in its limits.
inline double definite_integral(const Fn& f, double lo, double hi,
                                QuadratureConfig cfg = QuadratureConfig::current()) {
    if (f.has_closed_antiderivative()) {
        const Fn F = f.closed_antiderivative();
        return F(hi) - F(lo);
    }
    return detail::integrate_callable([&f](double x) { return f(x); }, lo, hi, cfg);
}

/// The integral as a function object: F(x) = ∫_base^x f. Nothing is computed
/// up front, so antiderivative towers cost nothing to build; each application
/// integrates afresh. F's derivative is f itself, registered closed-form.
inline Fn antiderivative(const Fn& f, double base) {
    Fn F = make_differentiable(
        "int(" + f.describe() + "," + detail::format_number(base) + ")",
        [f, base](double x) { return definite_integral(f, base, x, QuadratureConfig::current()); });
    attach_derivative_maker(F, [f] { return f; });
    return F;
}

}  // namespace fnalg
