#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fnalg/errors.hpp"
#include "fnalg/fn.hpp"
#include "fnalg/multivariate.hpp"
#include "fnalg/permutation.hpp"
#include "fnalg/typed_fn.hpp"

namespace fnalg {

using StringFn = TypedFn<std::string, int>;

/// Deliberate defects the law suites must catch. `none` is the honest build.
enum class FaultInjection { none, wrong_inverse, wrong_derivative, broken_permutation };

inline FaultInjection parse_fault_injection(std::string_view text) {
    if (text == "none" || text.empty()) return FaultInjection::none;
    if (text == "wrong-inverse") return FaultInjection::wrong_inverse;
    if (text == "wrong-derivative") return FaultInjection::wrong_derivative;
    if (text == "broken-permutation") return FaultInjection::broken_permutation;
    throw NotFoundError("unknown fault injection '" + std::string(text) +
                        "'; known: wrong-inverse, wrong-derivative, broken-permutation");
}

struct CatalogEntry {
    std::string key;
    std::string tier;
    std::variant<Fn, VectorFn, Permutation, StringFn> object;
    Interval sample_domain{-10.0, 10.0};     // generic law sampling
    Interval derivative_domain{-10.0, 10.0}; // closed-form vs FD agreement
    Interval inverse_domain{-10.0, 10.0};    // roundtrip law sampling
    bool has_closed_derivative = false;

    const Fn& fn() const {
        if (const Fn* f = std::get_if<Fn>(&object)) return *f;
        throw CapabilityError("catalog entry '" + key + "' is not a scalar function");
    }
};

/// The standard set of ready-made function objects with registered inverses
/// and closed-form derivatives. Built deterministically; lookups are by key.
class Catalog {
public:
    explicit Catalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) {}

    const std::vector<CatalogEntry>& entries() const { return entries_; }

    const CatalogEntry& lookup(std::string_view key) const {
        for (const CatalogEntry& e : entries_) {
            if (e.key == key) return e;
        }
        std::string known;
        for (const CatalogEntry& e : entries_) {
            if (!known.empty()) known += ", ";
            known += e.key;
        }
        throw NotFoundError("unknown function '" + std::string(key) + "'; known keys: " + known);
    }

    const Fn& fn(std::string_view key) const { return lookup(key).fn(); }

    bool contains(std::string_view key) const {
        for (const CatalogEntry& e : entries_) {
            if (e.key == key) return true;
        }
        return false;
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const CatalogEntry& e : entries_) out.push_back(e.key);
        return out;
    }

private:
    std::vector<CatalogEntry> entries_;
};

inline Catalog build_catalog(FaultInjection inject = FaultInjection::none) {
    std::vector<CatalogEntry> entries;
    const char* combined = "invertible+differentiable";

    auto push = [&entries](CatalogEntry entry) -> CatalogEntry& {
        entries.push_back(std::move(entry));
        return entries.back();
    };

    // identity: shared unit of composition, its own inverse.
    push({"id", combined, identity()}).has_closed_derivative = true;

    // succ / pred: mutual inverses with derivative one.
    {
        Fn succ_raw = make_differentiable("succ", [](double x) { return x + 1.0; });
        Fn pred_raw = make_differentiable(
            "pred", inject == FaultInjection::wrong_inverse
                        ? std::function<double(double)>([](double x) { return x - 1.1; })
                        : std::function<double(double)>([](double x) { return x - 1.0; }));
        Fn succ = make_invertible(succ_raw, pred_raw, InverseKind::two_sided, {-10.0, 10.0},
                                  inject == FaultInjection::wrong_inverse ? Validation::unchecked
                                                                          : Validation::checked);
        Fn pred = succ.inverse();
        attach_derivative(succ, constant(1.0));
        attach_derivative(pred, constant(1.0));
        push({"succ", combined, succ}).has_closed_derivative = true;
        push({"pred", combined, pred}).has_closed_derivative = true;
    }

    // sqr over the reals, closed-form derivative 2x.
    {
        Fn sqr = make_differentiable("sqr", [](double x) { return x * x; });
        attach_derivative(sqr, make_differentiable("2x", [](double x) { return 2.0 * x; }));
        push({"sqr", "differentiable", sqr}).has_closed_derivative = true;
    }

    // Rounding-family and abs: applicable only. They have derivatives almost
    // everywhere but registering one would misstate the jumps.
    entries.push_back({"abs", "applicable", make_fn("abs", [](double x) { return std::abs(x); })});
    entries.push_back(
        {"floor", "applicable", make_fn("floor", [](double x) { return std::floor(x); })});
    entries.push_back(
        {"ceil", "applicable", make_fn("ceil", [](double x) { return std::ceil(x); })});
    entries.push_back(
        {"round", "applicable", make_fn("round", [](double x) { return std::round(x); })});

    // sin / cos with the usual closed forms; cos' = -sin.
    {
        Fn sin_fn = make_differentiable("sin", [](double x) { return std::sin(x); });
        Fn cos_fn = make_differentiable("cos", [](double x) { return std::cos(x); });
        if (inject == FaultInjection::wrong_derivative) {
            attach_derivative(sin_fn, make_differentiable(
                                          "cos~", [](double x) { return std::cos(x) + 0.01; }));
        } else {
            attach_derivative(sin_fn, cos_fn);
        }
        attach_derivative(cos_fn, neg(sin_fn));
        push({"sin", "differentiable", sin_fn}).has_closed_derivative = true;
        push({"cos", "differentiable", cos_fn}).has_closed_derivative = true;
    }

    // sin restricted to its principal branch, with asin as a right inverse:
    // sin(asin(y)) = y on [-1, 1], while asin(sin(x)) recovers x only inside
    // the branch.
    {
        const double half_pi = std::numbers::pi / 2.0;
        Fn sinr_raw = make_differentiable("sin_restricted", [half_pi](double x) {
            if (x < -half_pi || x > half_pi) {
                throw DomainError("sin_restricted: argument outside [-pi/2, pi/2]");
            }
            return std::sin(x);
        });
        Fn asin_raw = make_differentiable("asin", [](double x) {
            if (x < -1.0 || x > 1.0) throw DomainError("asin: argument outside [-1, 1]");
            return std::asin(x);
        });
        Fn sinr = make_invertible(sinr_raw, asin_raw, InverseKind::right_only, {-1.0, 1.0});
        Fn asin_fn = sinr.inverse();
        attach_derivative(sinr, make_differentiable("cos", [](double x) { return std::cos(x); }));
        attach_derivative(asin_fn, make_differentiable("d(asin)", [](double x) {
                              if (x <= -1.0 || x >= 1.0) {
                                  throw DomainError("asin is not differentiable at |x| >= 1");
                              }
                              return 1.0 / std::sqrt(1.0 - x * x);
                          }));
        push({"sin_restricted", combined, sinr, {-1.55, 1.55}, {-1.55, 1.55}, {-1.0, 1.0}})
            .has_closed_derivative = true;
        push({"asin", combined, asin_fn, {-0.99, 0.99}, {-0.9, 0.9}, {-1.0, 1.0}})
            .has_closed_derivative = true;
    }

    // oneOver: its own inverse away from zero; derivative -1/x².
    Fn one_over = [&] {
        Fn raw = make_differentiable("oneOver", [](double x) {
            if (x == 0.0) throw DomainError("oneOver: undefined at 0");
            return 1.0 / x;
        });
        Fn knotted = make_invertible(raw, raw, InverseKind::two_sided, {0.1, 10.0});
        attach_derivative(knotted, make_differentiable("d(oneOver)", [](double x) {
                              if (x == 0.0) throw DomainError("oneOver: undefined at 0");
                              return -1.0 / (x * x);
                          }));
        push({"oneOver", combined, knotted, {0.2, 20.0}, {0.5, 20.0}, {0.1, 10.0}})
            .has_closed_derivative = true;
        return knotted;
    }();

    // exp / log: the combined-tier pair. exp is its own derivative, exp also
    // carries a one-call value+derivative override; log' is oneOver.
    {
        Fn exp_raw = make_differentiable("exp", [](double x) { return std::exp(x); });
        Fn log_raw = make_differentiable("log", [](double x) {
            if (x <= 0.0) {
                throw DomainError("log: non-positive argument " + detail::format_number(x));
            }
            return std::log(x);
        });
        Fn exp_fn = make_invertible(exp_raw, log_raw, InverseKind::two_sided, {-5.0, 5.0});
        Fn log_fn = exp_fn.inverse();
        attach_derivative(exp_fn, exp_fn);
        attach_derivative(log_fn, one_over);
        attach_value_and_derivative(exp_fn, [](double x) {
            const double e = std::exp(x);
            return std::make_pair(e, e);
        });
        push({"exp", combined, exp_fn, {-10.0, 10.0}, {-5.0, 5.0}, {-5.0, 5.0}})
            .has_closed_derivative = true;
        push({"log", combined, log_fn, {0.2, 20.0}, {0.5, 20.0}, {1e-6, 1e6}})
            .has_closed_derivative = true;
    }

    // e^{2x}: differentiable with no closed form registered, so its whole
    // derivative tower runs on nested finite differences.
    push({"exp2x", "differentiable",
          make_differentiable("exp2x", [](double x) { return std::exp(2.0 * x); }),
          {-2.0, 2.0},
          {-2.0, 2.0},
          {-2.0, 2.0}});

    // The non-numeric exhibit: the object model is not tied to reals.
    push({"leng", "applicable",
          StringFn("leng", [](const std::string& s) { return static_cast<int>(s.size()); })});

    // The polar pair, registered as mutual inverses with closed Jacobians.
    push({"polar2cartesian", "vector:invertible+jacobian", polar_to_cartesian()});
    push({"cartesian2polar", "vector:invertible+jacobian", cartesian_to_polar()});

    return Catalog(std::move(entries));
}

/// The process-wide honest catalog, built once.
inline const Catalog& catalog() {
    static const Catalog c = build_catalog();
    return c;
}

}  // namespace fnalg
