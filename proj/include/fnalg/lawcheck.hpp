#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fnalg/catalog.hpp"
#include "fnalg/errors.hpp"
#include "fnalg/fn.hpp"
#include "fnalg/integration.hpp"
#include "fnalg/linear_map.hpp"
#include "fnalg/model.hpp"
#include "fnalg/multivariate.hpp"
#include "fnalg/permutation.hpp"

namespace fnalg::lawcheck {

struct LawResult {
    std::string suite;
    std::string law;
    bool pass = false;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

namespace detail {

inline std::string fmt(double v) { return fnalg::detail::format_number(v); }

inline std::vector<double> linspace(Interval iv, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back((iv.lo + iv.hi) / 2.0);
        return out;
    }
    for (int i = 0; i < n; ++i) {
        out.push_back(iv.lo + (iv.hi - iv.lo) * i / static_cast<double>(n - 1));
    }
    return out;
}

/// Accumulates the worst observed error for one law.
class Check {
public:
    Check(std::string suite, std::string law, double tolerance)
        : suite_(std::move(suite)), law_(std::move(law)), tolerance_(tolerance) {}

    void observe(double err, const std::string& where) {
        ++samples_;
        if (!(err <= worst_)) {  // also catches NaN
            worst_ = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
            where_ = where;
        }
    }

    void require(bool condition, const std::string& why) {
        if (!condition && failure_.empty()) failure_ = why;
    }

    void hard_fail(const std::string& why) {
        if (failure_.empty()) failure_ = why;
    }

    int samples() const { return samples_; }

    LawResult result() const {
        LawResult r;
        r.suite = suite_;
        r.law = law_;
        r.tolerance = tolerance_;
        r.worst = worst_;
        if (!failure_.empty()) {
            r.pass = false;
            r.detail = failure_;
        } else {
            r.pass = worst_ <= tolerance_;
            r.detail = samples_ == 0 ? "no valid samples"
                                     : "worst " + fmt(worst_) + (where_.empty() ? "" : " at " + where_);
        }
        return r;
    }

private:
    std::string suite_;
    std::string law_;
    double tolerance_;
    double worst_ = 0.0;
    int samples_ = 0;
    std::string where_;
    std::string failure_;
};

inline std::vector<const CatalogEntry*> scalar_entries(const Catalog& cat) {
    std::vector<const CatalogEntry*> out;
    for (const CatalogEntry& e : cat.entries()) {
        if (std::holds_alternative<Fn>(e.object)) out.push_back(&e);
    }
    return out;
}

inline std::vector<const CatalogEntry*> invertible_entries(const Catalog& cat) {
    std::vector<const CatalogEntry*> out;
    for (const CatalogEntry* e : scalar_entries(cat)) {
        if (e->fn().invertible()) out.push_back(e);
    }
    return out;
}

/// Same behaviour, Jacobian registration dropped, so jacobian() runs the
/// finite-difference path. The oracle side of closed-form Jacobian checks.
inline VectorFn strip_jacobian(const VectorFn& f) {
    return VectorFn(f.name() + "~fd", f.n_in(), f.n_out(), [f](const Vec& x) { return f(x); });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// algebra

inline std::vector<LawResult> run_algebra(const Catalog& cat) {
    using detail::Check;
    std::vector<LawResult> results;
    const auto scalars = detail::scalar_entries(cat);

    {
        Check check("algebra", "composition-associativity", 1e-12);
        for (const CatalogEntry* fe : scalars) {
            for (const CatalogEntry* ge : scalars) {
                for (const CatalogEntry* he : scalars) {
                    const Fn lhs = fe->fn().compose(ge->fn()).compose(he->fn());
                    const Fn rhs = fe->fn().compose(ge->fn().compose(he->fn()));
                    for (double x : detail::linspace(he->sample_domain, 100)) {
                        double a, b;
                        try {
                            a = lhs(x);
                            b = rhs(x);
                        } catch (const DomainError&) {
                            continue;
                        }
                        if (!std::isfinite(a) || !std::isfinite(b)) continue;
                        check.observe(std::abs(a - b) / (1.0 + std::abs(a)),
                                      "((" + fe->key + "." + ge->key + ")." + he->key + ") x=" +
                                          detail::fmt(x));
                    }
                }
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("algebra", "identity-laws", 1e-15);
        for (const CatalogEntry* e : scalars) {
            const Fn left = identity().compose(e->fn());
            const Fn right = e->fn().compose(identity());
            for (double x : detail::linspace(e->sample_domain, 100)) {
                try {
                    const double v = e->fn()(x);
                    check.observe(std::abs(left(x) - v) / (1.0 + std::abs(v)),
                                  "(id." + e->key + ") x=" + detail::fmt(x));
                    check.observe(std::abs(right(x) - v) / (1.0 + std::abs(v)),
                                  "(" + e->key + ".id) x=" + detail::fmt(x));
                } catch (const DomainError&) {
                    continue;
                }
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("algebra", "capability-propagation", 0.0);
        for (const CatalogEntry* fe : scalars) {
            for (const CatalogEntry* ge : scalars) {
                const Fn& f = fe->fn();
                const Fn& g = ge->fn();
                const Fn c = f.compose(g);
                check.require(c.differentiable() == (f.differentiable() && g.differentiable()),
                              "differentiable flag wrong for (" + fe->key + "." + ge->key + ")");
                const bool kinds_ok =
                    f.invertible() && g.invertible() &&
                    fnalg::detail::combine_kinds(f.inverse_kind(), g.inverse_kind()).has_value();
                check.require(c.invertible() == kinds_ok,
                              "invertible flag wrong for (" + fe->key + "." + ge->key + ")");
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("algebra", "apply-purity", 0.0);
        for (const CatalogEntry* e : scalars) {
            for (double x : detail::linspace(e->sample_domain, 10)) {
                try {
                    const double first = e->fn()(x);
                    const double second = e->fn()(x);
                    check.require(first == second,
                                  e->key + " not bit-stable at x=" + detail::fmt(x));
                    check.observe(0.0, "");
                } catch (const DomainError&) {
                    continue;
                }
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("algebra", "serial-uniqueness", 0.0);
        std::vector<std::uint64_t> serials;
        for (int i = 0; i < 100; ++i) serials.push_back(constant(i).serial());
        std::sort(serials.begin(), serials.end());
        check.require(std::adjacent_find(serials.begin(), serials.end()) == serials.end(),
                      "duplicate serial observed");
        check.observe(0.0, "");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------
// inverse

inline std::vector<LawResult> run_inverse(const Catalog& cat) {
    using detail::Check;
    std::vector<LawResult> results;
    const auto invertibles = detail::invertible_entries(cat);

    {
        Check check("inverse", "involution-object-identity", 0.0);
        for (const CatalogEntry* e : invertibles) {
            check.require(e->fn().inverse().inverse().same_object(e->fn()),
                          e->key + ": inverse of inverse is a different object");
            check.observe(0.0, "");
        }
        results.push_back(check.result());
    }

    {
        Check check("inverse", "roundtrip", 1e-8);
        for (const CatalogEntry* e : invertibles) {
            const Fn& f = e->fn();
            const Fn back = f.inverse();
            const InverseKind kind = f.inverse_kind();
            for (double x : detail::linspace(e->inverse_domain, 100)) {
                try {
                    if (kind == InverseKind::right_only) {
                        // only forward∘backward is guaranteed
                        check.observe(std::abs(f(back(x)) - x) / (1.0 + std::abs(x)),
                                      e->key + " forward∘backward x=" + detail::fmt(x));
                    } else {
                        check.observe(std::abs(back(f(x)) - x) / (1.0 + std::abs(x)),
                                      e->key + " backward∘forward x=" + detail::fmt(x));
                    }
                } catch (const DomainError&) {
                    continue;
                }
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("inverse", "composition-inverse-law", 1e-8);
        for (const CatalogEntry* fe : invertibles) {
            for (const CatalogEntry* ge : invertibles) {
                const Fn& f = fe->fn();
                const Fn& g = ge->fn();
                const Fn c = f.compose(g);
                if (!c.invertible()) continue;
                const Fn via_knot = c.inverse();
                const Fn via_law = g.inverse().compose(f.inverse());
                const InverseKind kind = c.inverse_kind();
                for (double x : detail::linspace(ge->inverse_domain, 50)) {
                    try {
                        const double y = c(x);
                        if (!std::isfinite(y)) continue;
                        const double r1 = via_knot(y);
                        const double r2 = via_law(y);
                        check.observe(std::abs(r1 - r2) / (1.0 + std::abs(r2)),
                                      "routes (" + fe->key + "." + ge->key + ") x=" +
                                          detail::fmt(x));
                        if (kind != InverseKind::right_only) {
                            check.observe(std::abs(r1 - x) / (1.0 + std::abs(x)),
                                          "roundtrip (" + fe->key + "." + ge->key + ") x=" +
                                              detail::fmt(x));
                        }
                    } catch (const DomainError&) {
                        continue;
                    }
                }
            }
        }
        results.push_back(check.result());
    }

    {
        // Kind algebra of composition: neutral two_sided, matching one-sided
        // kinds survive, a left/right mix claims nothing.
        Check check("inverse", "one-sided-kind-algebra", 0.0);
        const Fn& exp_fn = cat.fn("exp");
        const Fn& sinr = cat.fn("sin_restricted");
        const Fn& asin_fn = cat.fn("asin");
        const Fn two_after_right = exp_fn.compose(sinr);
        check.require(two_after_right.invertible() &&
                          two_after_right.inverse_kind() == InverseKind::right_only,
                      "(exp.sin_restricted) should be right_only");
        if (two_after_right.invertible()) {
            const Fn back = two_after_right.inverse();
            for (double y : detail::linspace({-1.0, 1.0}, 20)) {
                try {
                    const double err =
                        std::abs(two_after_right(back(y)) - y) / (1.0 + std::abs(y));
                    check.observe(err, "right law y=" + detail::fmt(y));
                } catch (const DomainError&) {
                    continue;
                }
            }
            check.require(check.samples() > 0, "right-inverse law had no valid samples");
        }
        const Fn mixed = asin_fn.compose(sinr);  // left_only after right_only
        check.require(!mixed.invertible(), "(asin.sin_restricted) must not claim an inverse");
        bool threw = false;
        try {
            (void)mixed.inverse();
        } catch (const CapabilityError&) {
            threw = true;
        }
        check.require(threw, "inverse() on a left/right mix must raise a capability error");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------
// derivative

inline std::vector<LawResult> run_derivative(const Catalog& cat) {
    using detail::Check;
    std::vector<LawResult> results;

    {
        Check check("derivative", "closed-form-vs-fd", 1e-4);
        for (const CatalogEntry& e : cat.entries()) {
            if (!std::holds_alternative<Fn>(e.object) || !e.has_closed_derivative) continue;
            const Fn& f = e.fn();
            const Fn closed = f.derivative();
            const Fn fd = fd_derivative(f);
            for (double x : detail::linspace(e.derivative_domain, 100)) {
                try {
                    const double c = closed(x);
                    const double d = fd(x);
                    check.observe(std::abs(c - d) / (1.0 + std::abs(c)),
                                  e.key + " x=" + detail::fmt(x));
                } catch (const DomainError&) {
                    continue;
                }
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("derivative", "laziness", 0.0);
        const Fn a = make_differentiable("a", [](double x) { return std::sin(x); });
        const Fn b = make_differentiable("b", [](double x) { return std::cos(x); });
        const auto before = derivative_maker_calls().load();
        const Fn c = a.compose(b);
        check.require(derivative_maker_calls().load() == before,
                      "constructing a composite ran a derivative maker");
        const Fn d = c.derivative();
        check.require(derivative_maker_calls().load() == before + 1,
                      "first derivative demand must run exactly one maker");
        (void)c.derivative();
        check.require(derivative_maker_calls().load() == before + 1,
                      "second demand must be memoized");
        (void)d(0.3);
        check.require(derivative_maker_calls().load() == before + 3,
                      "applying the chain derivative materializes both operand derivatives");
        check.observe(0.0, "");
        results.push_back(check.result());
    }

    {
        Check check("derivative", "memoization-identity", 0.0);
        for (const CatalogEntry* e : detail::scalar_entries(cat)) {
            if (!e->fn().differentiable()) continue;
            check.require(e->fn().derivative().same_object(e->fn().derivative()),
                          e->key + ": repeated derivative demands differ");
            check.observe(0.0, "");
        }
        results.push_back(check.result());
    }

    {
        Check check("derivative", "fd-tower-depth-3", 1e-2);
        const Fn& exp2x = cat.fn("exp2x");
        const Fn d3 = exp2x.derivative().derivative().derivative();
        check.observe(std::abs(d3(0.0) - 8.0), "exp2x d3 at 0");
        results.push_back(check.result());
    }

    {
        Check check("derivative", "sum-rule-structural", 1e-10);
        const std::vector<std::pair<std::string, std::string>> pairs = {
            {"sin", "cos"}, {"exp", "sqr"}, {"sqr", "sin"}};
        for (const auto& [fk, gk] : pairs) {
            const Fn& f = cat.fn(fk);
            const Fn& g = cat.fn(gk);
            const Fn lhs = add(f, g).derivative();
            const Fn rhs = add(f.derivative(), g.derivative());
            for (double x : detail::linspace({-5.0, 5.0}, 100)) {
                check.observe(std::abs(lhs(x) - rhs(x)),
                              "(" + fk + "+" + gk + ")' x=" + detail::fmt(x));
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("derivative", "value-and-derivative-override", 1e-8);
        for (const CatalogEntry* e : detail::scalar_entries(cat)) {
            const Fn& f = e->fn();
            if (!f.differentiable() || !f.has_value_and_derivative_override()) continue;
            for (double x : detail::linspace(e->derivative_domain, 50)) {
                try {
                    const auto [v, d] = f.value_and_derivative(x);
                    const double dv = std::abs(v - f(x)) / (1.0 + std::abs(v));
                    const double dd = std::abs(d - f.derivative()(x)) / (1.0 + std::abs(d));
                    check.observe(std::max(dv, dd), e->key + " x=" + detail::fmt(x));
                } catch (const DomainError&) {
                    continue;
                }
            }
        }
        results.push_back(check.result());
    }

    {
        // Rule-built derivatives of combined-tier objects are differentiable
        // only; whether a catalog closed form re-attaches invertibility is the
        // catalog's own business.
        Check check("derivative", "combined-tier-downgrade", 0.0);
        const Fn c = cat.fn("exp").compose(cat.fn("succ"));
        check.require(c.invertible() && c.differentiable(),
                      "(exp.succ) should sit in the combined tier");
        check.require(!c.derivative().invertible(),
                      "(exp.succ)' must not claim invertibility");
        check.observe(0.0, "");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------
// integral

inline std::vector<LawResult> run_integral(const Catalog& cat) {
    using detail::Check;
    std::vector<LawResult> results;
    const double pi = std::numbers::pi;

    {
        Check check("integral", "fundamental-theorem-forward", 1e-6);
        const struct {
            const char* key;
            Interval window;
            double base;
        } cases[] = {{"sin", {0.0, pi}, 0.0}, {"sqr", {-2.0, 2.0}, 0.0}};
        for (const auto& c : cases) {
            const Fn& f = cat.fn(c.key);
            const Fn F = antiderivative(f, c.base);
            check.require(F.derivative().same_object(f),
                          std::string(c.key) + ": antiderivative's derivative is not the integrand");
            const Fn fd = fd_derivative(F);
            for (double x : detail::linspace(c.window, 25)) {
                check.observe(std::abs(fd(x) - f(x)),
                              std::string(c.key) + " fd route x=" + detail::fmt(x));
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("integral", "fundamental-theorem-backward", 1e-5);
        for (const char* key : {"sin", "exp", "sqr"}) {
            const Fn& g = cat.fn(key);
            const Fn dg = g.derivative();
            const double pairs[][2] = {{0.0, 1.0}, {-1.5, 2.0}, {0.5, 3.0}};
            for (const auto& ab : pairs) {
                const double got = definite_integral(dg, ab[0], ab[1]);
                const double want = g(ab[1]) - g(ab[0]);
                check.observe(std::abs(got - want) / (1.0 + std::abs(want)),
                              std::string(key) + " [" + detail::fmt(ab[0]) + "," +
                                  detail::fmt(ab[1]) + "]");
            }
        }
        results.push_back(check.result());
    }

    {
        const QuadratureConfig cfg = QuadratureConfig::current();
        Check check("integral", "additivity", 2.0 * cfg.abs_tol);
        const Fn& f = cat.fn("sin");
        const double whole = definite_integral(f, 0.0, 2.5, cfg);
        const double split =
            definite_integral(f, 0.0, 1.0, cfg) + definite_integral(f, 1.0, 2.5, cfg);
        check.observe(std::abs(whole - split), "[0,1]+[1,2.5] vs [0,2.5]");
        results.push_back(check.result());
    }

    {
        Check check("integral", "antiderivative-laziness", 0.0);
        int evals = 0;
        const Fn counted = make_fn("counted", [&evals](double x) {
            ++evals;
            return x;
        });
        const Fn F = antiderivative(counted, 0.0);
        check.require(evals == 0, "constructing an antiderivative evaluated the integrand");
        (void)F(1.0);
        check.require(evals > 0, "applying the antiderivative never touched the integrand");
        check.observe(0.0, "");
        results.push_back(check.result());
    }

    {
        Check check("integral", "simpson-cubic-exactness", 1e-12);
        const Fn cubic = make_fn("cubic", [](double x) { return ((x - 2.0) * x + 3.0) * x - 4.0; });
        auto exact = [](double x) {
            return x * x * x * x / 4.0 - 2.0 * x * x * x / 3.0 + 1.5 * x * x - 4.0 * x;
        };
        const double got = definite_integral(cubic, -1.0, 3.0);
        check.observe(std::abs(got - (exact(3.0) - exact(-1.0))), "x^3-2x^2+3x-4 on [-1,3]");
        results.push_back(check.result());
    }

    {
        Check check("integral", "sine-half-period", 1e-9);
        check.observe(std::abs(definite_integral(cat.fn("sin"), 0.0, pi) - 2.0), "[0,pi]");
        const double reversed = definite_integral(cat.fn("sin"), pi, 0.0);
        check.observe(std::abs(reversed + 2.0), "antisymmetry [pi,0]");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------
// multivariate

inline std::vector<LawResult> run_multivariate(const Catalog&) {
    using detail::Check;
    std::vector<LawResult> results;
    const double pi = std::numbers::pi;
    std::mt19937_64 rng(7041);
    std::uniform_real_distribution<double> radius(0.5, 5.0);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);

    {
        Check check("multivariate", "closed-jacobian-vs-fd", 1e-4);
        const VectorFn& p2c = polar_to_cartesian();
        const VectorFn p2c_fd = detail::strip_jacobian(p2c);
        const VectorFn& c2p = cartesian_to_polar();
        const VectorFn c2p_fd = detail::strip_jacobian(c2p);
        for (int i = 0; i < 50; ++i) {
            const Vec rt{radius(rng), angle(rng)};
            const Matrix closed = jacobian(p2c, rt);
            const Matrix fd = jacobian(p2c_fd, rt);
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    check.observe(std::abs(closed.at(r, c) - fd.at(r, c)) /
                                      (1.0 + std::abs(closed.at(r, c))),
                                  "p2c entry (" + std::to_string(r) + "," + std::to_string(c) +
                                      ")");
                }
            }
            const Vec xy = p2c(rt);
            const Matrix closed_b = jacobian(c2p, xy);
            const Matrix fd_b = jacobian(c2p_fd, xy);
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    check.observe(std::abs(closed_b.at(r, c) - fd_b.at(r, c)) /
                                      (1.0 + std::abs(closed_b.at(r, c))),
                                  "c2p entry (" + std::to_string(r) + "," + std::to_string(c) +
                                      ")");
                }
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("multivariate", "polar-roundtrip", 1e-10);
        for (double r = 0.25; r <= 10.0; r += 0.75) {
            for (double t = -3.1; t <= 3.1; t += 0.31) {
                const Vec back = cartesian_to_polar()(polar_to_cartesian()(Vec{r, t}));
                check.observe(std::abs(back[0] - r), "r at (" + detail::fmt(r) + "," +
                                                         detail::fmt(t) + ")");
                check.observe(std::abs(back[1] - t), "theta at (" + detail::fmt(r) + "," +
                                                         detail::fmt(t) + ")");
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("multivariate", "determinant-multiplicativity", 1e-4);
        const VectorFn rot = rotation2d(0.7).as_vector_fn();
        const VectorFn c = polar_to_cartesian().compose(rot);
        for (int i = 0; i < 25; ++i) {
            const Vec x{radius(rng), angle(rng) * 0.3};
            try {
                const double lhs = jacobian_determinant(c, x);
                const double rhs =
                    jacobian_determinant(polar_to_cartesian(), rot(x)) *
                    jacobian_determinant(rot, x);
                check.observe(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)),
                              "x=(" + detail::fmt(x[0]) + "," + detail::fmt(x[1]) + ")");
            } catch (const DomainError&) {
                continue;
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("multivariate", "polar-determinant-is-radius", 1e-5);
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const double r = 0.5 + (5.0 - 0.5) * i / 19.0;
                const double t = -pi + 1e-3 + (2.0 * pi - 2e-3) * j / 19.0;
                check.observe(std::abs(jacobian_determinant(polar_to_cartesian(), Vec{r, t}) - r),
                              "(r,theta)=(" + detail::fmt(r) + "," + detail::fmt(t) + ")");
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("multivariate", "determinant-reciprocity", 1e-4);
        for (int i = 0; i < 25; ++i) {
            const Vec rt{radius(rng), angle(rng) * 0.3};
            const Vec xy = polar_to_cartesian()(rt);
            const double a = jacobian_determinant(cartesian_to_polar(), xy);
            const double b = jacobian_determinant(polar_to_cartesian(), cartesian_to_polar()(xy));
            check.observe(std::abs(a * b - 1.0), "xy=(" + detail::fmt(xy[0]) + "," +
                                                     detail::fmt(xy[1]) + ")");
        }
        results.push_back(check.result());
    }

    {
        Check check("multivariate", "gradient", 1e-6);
        const VectorFn sum_sq("sum_of_squares", 3, 1, [](const Vec& x) {
            return Vec{x[0] * x[0] + x[1] * x[1] + x[2] * x[2]};
        });
        const Vec g = gradient(sum_sq, Vec{1.0, 2.0, 3.0});
        check.observe(std::abs(g[0] - 2.0), "d/dx0");
        check.observe(std::abs(g[1] - 4.0), "d/dx1");
        check.observe(std::abs(g[2] - 6.0), "d/dx2");
        const VectorFn linear_form("a·x", 2, 1,
                                   [](const Vec& x) { return Vec{3.0 * x[0] - x[1]}; });
        const Vec lg = gradient(linear_form, Vec{5.0, 5.0});
        check.observe(std::abs(lg[0] - 3.0), "linear d/dx0");
        check.observe(std::abs(lg[1] + 1.0), "linear d/dx1");
        const VectorFn zero_fn("zero", 2, 1, [](const Vec&) { return Vec{0.0}; });
        const Vec zg = gradient(zero_fn, Vec{4.0, -7.0});
        check.observe(std::abs(zg[0]), "zero d/dx0");
        check.observe(std::abs(zg[1]), "zero d/dx1");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------
// permutations

inline std::vector<LawResult> run_perm(FaultInjection inject) {
    using detail::Check;
    std::vector<LawResult> results;
    std::mt19937_64 rng(40925);

    // Exhaustive S_n fixtures for n <= 4 plus random material at n = 8.
    auto all_perms = [](int n) {
        std::vector<Permutation> out;
        std::vector<int> base(static_cast<std::size_t>(n));
        std::iota(base.begin(), base.end(), 0);
        do {
            out.push_back(Permutation(base, Permutation::unchecked));
        } while (std::next_permutation(base.begin(), base.end()));
        return out;
    };

    std::vector<Permutation> fixtures;
    for (int n = 1; n <= 4; ++n) {
        for (const auto& p : all_perms(n)) fixtures.push_back(p);
    }
    if (inject == FaultInjection::broken_permutation) {
        fixtures.push_back(Permutation({0, 0, 2}, Permutation::unchecked));
    }

    {
        Check check("perm", "valid-mapping", 0.0);
        for (const Permutation& p : fixtures) {
            std::vector<bool> seen(static_cast<std::size_t>(p.n()), false);
            bool ok = true;
            for (int v : p.mapping()) {
                if (v < 0 || v >= p.n() || seen[static_cast<std::size_t>(v)]) {
                    ok = false;
                    break;
                }
                seen[static_cast<std::size_t>(v)] = true;
            }
            check.require(ok, p.to_string() + " is not a permutation of [0," +
                                  std::to_string(p.n()) + ")");
            check.observe(0.0, "");
        }
        results.push_back(check.result());
    }

    {
        Check check("perm", "generic-compose-oracle", 0.0);
        for (int n = 2; n <= 6; ++n) {
            for (int trial = 0; trial < 20; ++trial) {
                Permutation p = random_permutation(n, rng);
                Permutation q = random_permutation(n, rng);
                if (inject == FaultInjection::broken_permutation && n == 3 && trial == 0) {
                    p = Permutation({0, 0, 2}, Permutation::unchecked);
                }
                const Permutation fast = p.compose(q);
                const Fn generic = as_fn(p).compose(as_fn(q));
                for (int i = 0; i < n; ++i) {
                    const int want = p(q(i));  // brute force, straight off the arrays
                    check.require(fast(i) == want,
                                  "perm_compose disagrees with p(q(i)) at i=" + std::to_string(i) +
                                      " for p=" + p.to_string() + " q=" + q.to_string());
                    check.require(static_cast<int>(generic(i)) == want,
                                  "generic compose disagrees at i=" + std::to_string(i));
                }
                check.require(fast.representation() == Representation::permutation,
                              "composition left the permutation representation");
                check.observe(0.0, "");
            }
        }
        results.push_back(check.result());
    }

    {
        Check check("perm", "group-laws", 0.0);
        for (const Permutation& p : fixtures) {
            const Permutation id = identity_perm(p.n());
            check.require(p.compose(id) == p, "right identity fails for " + p.to_string());
            check.require(id.compose(p) == p, "left identity fails for " + p.to_string());
            const Permutation pinv = p.inverse();
            check.require(p.compose(pinv) == id, "p∘p⁻¹ ≠ id for " + p.to_string());
            check.require(pinv.compose(p) == id, "p⁻¹∘p ≠ id for " + p.to_string());
            check.require(pinv.inverse() == p, "inverse is not an involution for " + p.to_string());
            check.observe(0.0, "");
        }
        // associativity: exhaustive at n = 3, random triples at n = 8
        for (const auto& p : all_perms(3)) {
            for (const auto& q : all_perms(3)) {
                for (const auto& r : all_perms(3)) {
                    check.require(p.compose(q).compose(r) == p.compose(q.compose(r)),
                                  "associativity fails at n=3");
                }
            }
        }
        for (int trial = 0; trial < 200; ++trial) {
            const Permutation p = random_permutation(8, rng);
            const Permutation q = random_permutation(8, rng);
            const Permutation r = random_permutation(8, rng);
            check.require(p.compose(q).compose(r) == p.compose(q.compose(r)),
                          "associativity fails at n=8");
            check.require(p.compose(p.inverse()) == identity_perm(8), "inverse law fails at n=8");
        }
        results.push_back(check.result());
    }

    {
        Check check("perm", "parse-print-roundtrip", 0.0);
        for (int trial = 0; trial < 40; ++trial) {
            const Permutation p = random_permutation(1 + trial % 10, rng);
            check.require(Permutation::parse(p.to_string()) == p,
                          "parse(to_string) changed " + p.to_string());
            check.observe(0.0, "");
        }
        bool threw = false;
        try {
            (void)Permutation::parse("[0,0,2]");
        } catch (const ValidationError&) {
            threw = true;
        }
        check.require(threw, "parsing a non-bijection must fail validation");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------
// models

inline std::vector<LawResult> run_model(const Catalog& cat) {
    using detail::Check;
    std::vector<LawResult> results;
    const double pi = std::numbers::pi;
    const Fn& log_fn = cat.fn("log");

    struct Named {
        std::string name;
        TransformedModel model;
    };
    std::vector<Named> transformed;
    transformed.push_back({"identity∘N01", transform_model(n01(), identity())});
    transformed.push_back({"logNormal(1,0.5)", transform_model(normal_model(1.0, 0.5), log_fn)});
    transformed.push_back({"logNormal(0.5,0.2)", transform_model(normal_model(0.5, 0.2), log_fn)});

    {
        Check check("model", "density-normalization", 1e-3);
        for (const Named& t : transformed) {
            const Interval support = t.model.support();
            const double mass = definite_integral(
                [&t](double y) { return t.model.density(y); }, support.lo, support.hi,
                QuadratureConfig{256, 14, 1e-8});
            check.observe(std::abs(mass - 1.0), t.name);
        }
        // 2-D: standard normal seen in polar coordinates.
        const MultivariateModel polar_view = transform_model_multivariate(
            standard_normal_2d(), polar_to_cartesian(),
            {Interval{1e-9, 8.0}, Interval{-pi, pi}});
        const double mass2d = definite_integral(
            [&polar_view](double r) {
                return definite_integral(
                    [&polar_view, r](double t) { return polar_view.density(Vec{r, t}); }, -pi + 1e-12,
                    pi, QuadratureConfig{64, 8, 1e-7});
            },
            1e-9, 8.0, QuadratureConfig{128, 8, 1e-6});
        check.observe(std::abs(mass2d - 1.0), "polar view of 2-D normal");
        results.push_back(check.result());
    }

    {
        Check check("model", "sampling-density-chi-square", 2.0);
        for (const Named& t : transformed) {
            RandomSource source(20240);
            const int n = 100000;
            const int bins = 20;
            // central window: base mean ± 3 sd pulled back through the map
            const double mu = t.model.base().param("mean");
            const double sd = t.model.base().param("sd");
            const Fn back = t.model.map().inverse();
            const double a = back(mu - 3.0 * sd);
            const double b = back(mu + 3.0 * sd);
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            std::vector<int> counts(bins, 0);
            for (int i = 0; i < n; ++i) {
                const double y = t.model.sample(source);
                if (y < lo || y >= hi) continue;
                const int bin = static_cast<int>((y - lo) / (hi - lo) * bins);
                if (bin >= 0 && bin < bins) ++counts[static_cast<std::size_t>(bin)];
            }
            double chi2 = 0.0;
            for (int bin = 0; bin < bins; ++bin) {
                const double edge_lo = lo + (hi - lo) * bin / bins;
                const double edge_hi = lo + (hi - lo) * (bin + 1) / bins;
                const double expected =
                    n * definite_integral([&t](double y) { return t.model.density(y); }, edge_lo,
                                          edge_hi, QuadratureConfig{64, 10, 1e-9});
                chi2 += (counts[static_cast<std::size_t>(bin)] - expected) *
                        (counts[static_cast<std::size_t>(bin)] - expected) / expected;
            }
            check.observe(chi2 / (bins - 1), t.name + " chi2/dof");
        }
        results.push_back(check.result());
    }

    {
        Check check("model", "identity-transform-no-op", 1e-12);
        const TransformedModel wrapped = transform_model(n01(), identity());
        for (double x : detail::linspace({-5.0, 5.0}, 50)) {
            check.observe(std::abs(wrapped.density(x) - n01().density(x)), "x=" + detail::fmt(x));
        }
        RandomSource a(42);
        RandomSource b(42);
        for (int i = 0; i < 1000; ++i) {
            check.require(wrapped.sample(a) == n01().sample(b),
                          "identity transform perturbed the sample stream");
        }
        results.push_back(check.result());
    }

    {
        Check check("model", "aom-chain-rule", 1e-8);
        const std::vector<std::pair<std::string, std::string>> pairs = {
            {"log", "exp"}, {"exp", "succ"}, {"sin", "sqr"}};
        for (const auto& [fk, gk] : pairs) {
            const Fn& f = cat.fn(fk);
            const Fn& g = cat.fn(gk);
            const Datum d{0.7, 0.1};
            const double lhs = transformed_aom(f.compose(g), d);
            const double rhs = transformed_aom(f, Datum{g(d.value), transformed_aom(g, d)});
            check.observe(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)),
                          "(" + fk + "." + gk + ")");
        }
        results.push_back(check.result());
    }

    {
        Check check("model", "log-normal-closed-form", 1e-10);
        const double mu = 1.0;
        const double sigma = 0.5;
        const TransformedModel lognormal = transform_model(normal_model(mu, sigma), log_fn);
        for (double y : detail::linspace({0.1, 20.0}, 50)) {
            const double direct =
                std::exp(-0.5 * std::pow((std::log(y) - mu) / sigma, 2)) /
                (y * sigma * std::sqrt(2.0 * pi));
            check.observe(std::abs(lognormal.density(y) - direct) / (1.0 + direct),
                          "y=" + detail::fmt(y));
        }
        results.push_back(check.result());
    }

    {
        Check check("model", "fit-normal", 1e-12);
        const ContinuousModel fitted = fit_normal(std::vector<double>{1.0, 2.0, 3.0});
        check.observe(std::abs(fitted.param("mean") - 2.0), "mean of {1,2,3}");
        check.observe(std::abs(fitted.param("sd") - 1.0), "sd of {1,2,3}");
        bool degenerate = false;
        try {
            (void)fit_normal(std::vector<double>{5.0, 5.0, 5.0, 5.0});
        } catch (const DegenerateDataError&) {
            degenerate = true;
        }
        check.require(degenerate, "zero-spread data must raise a degenerate-spread error");
        bool insufficient = false;
        try {
            (void)fit_normal(std::vector<double>{5.0});
        } catch (const InsufficientDataError&) {
            insufficient = true;
        }
        check.require(insufficient, "a single datum must raise an insufficient-data error");
        results.push_back(check.result());
    }

    return results;
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> suite_names() {
    return {"algebra", "inverse", "derivative", "integral", "multivariate", "perm", "model"};
}

inline std::vector<LawResult> run_suite(const std::string& name,
                                        FaultInjection inject = FaultInjection::none) {
    const Catalog cat = build_catalog(inject);
    if (name == "algebra") return run_algebra(cat);
    if (name == "inverse") return run_inverse(cat);
    if (name == "derivative") return run_derivative(cat);
    if (name == "integral") return run_integral(cat);
    if (name == "multivariate") return run_multivariate(cat);
    if (name == "perm") return run_perm(inject);
    if (name == "model") return run_model(cat);
    if (name == "all") {
        std::vector<LawResult> all;
        for (const std::string& suite : suite_names()) {
            for (LawResult& r : run_suite(suite, inject)) all.push_back(std::move(r));
        }
        return all;
    }
    throw NotFoundError("unknown suite '" + name +
                        "'; known: algebra, inverse, derivative, integral, multivariate, perm, "
                        "model, all");
}

}  // namespace fnalg::lawcheck
