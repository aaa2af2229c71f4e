#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "fnalg/config.hpp"
#include "fnalg/errors.hpp"
#include "fnalg/lazy.hpp"

namespace fnalg {

class Fn;

/// Which inverse law a registered pair guarantees, seen from the forward side:
/// two_sided means backward is a full inverse, left_only means backward∘forward
/// is the identity on the forward domain, right_only means forward∘backward is
/// the identity on the backward domain.
enum class InverseKind { two_sided, left_only, right_only };

/// Storage family of a function object. Specialized representations
/// (permutations, linear maps) keep composition inside their own family.
enum class Representation { generic, permutation, linear_map };

enum class Validation { checked, unchecked };

/// Central-difference configuration. The divisor is 2*step by definition.
struct FDConfig {
    double step = 0.001;

    double divisor() const { return 2.0 * step; }

    static FDConfig current() { return FDConfig{config::fd_step()}; }
};

/// Counts derivative-maker runs process-wide. Construction of any function
/// object must leave this untouched; only demanding a derivative may bump it.
inline std::atomic<std::uint64_t>& derivative_maker_calls() {
    static std::atomic<std::uint64_t> counter{0};
    return counter;
}

namespace detail {

inline InverseKind mirror(InverseKind k) {
    switch (k) {
        case InverseKind::two_sided: return InverseKind::two_sided;
        case InverseKind::left_only: return InverseKind::right_only;
        case InverseKind::right_only: return InverseKind::left_only;
    }
    return InverseKind::two_sided;
}

inline const char* kind_name(InverseKind k) {
    switch (k) {
        case InverseKind::two_sided: return "two_sided";
        case InverseKind::left_only: return "left_only";
        case InverseKind::right_only: return "right_only";
    }
    return "?";
}

/// One-sided inverse algebra for compose(f, g), f applied after g.
/// two_sided is neutral; matching one-sided kinds survive; a left/right mix
/// guarantees no law, so the composite carries no inverse at all.
inline std::optional<InverseKind> combine_kinds(InverseKind f, InverseKind g) {
    if (f == InverseKind::two_sided) return g;
    if (g == InverseKind::two_sided) return f;
    if (f == g) return f;
    return std::nullopt;
}

}  // namespace detail

/// An immutable univariate real function object. Copies share the underlying
/// node; identity of the node is observable through serial().
///
/// Capability flags are fixed at construction. The only internal mutability is
/// the memoized derivative slot, which is thread-safe and at-most-once.
class Fn {
public:
    Fn() = delete;

    double operator()(double x) const {
        if (!std::isfinite(x)) {
            throw DomainError("apply: non-finite argument to " + describe());
        }
        return node_->body(x);
    }

    double apply(double x) const { return (*this)(x); }

    std::uint64_t serial() const { return node_->serial; }

    const std::string& name() const { return node_->name; }

    std::string describe() const {
        if (!node_->name.empty()) return node_->name;
        return "f" + std::to_string(node_->serial);
    }

    bool invertible() const { return node_->invertible; }
    bool differentiable() const { return node_->differentiable; }

    Representation representation() const { return Representation::generic; }

    bool same_object(const Fn& other) const { return node_ == other.node_; }

    /// f.compose(g) applies g first. Capabilities propagate by AND; the
    /// composite's inverse, when it exists, is inverse(g)∘inverse(f) and the
    /// two composites are knotted as mutual inverses.
    Fn compose(const Fn& g) const;

    Fn inverse() const {
        if (!node_->invertible) {
            throw CapabilityError(describe() + " is not invertible");
        }
        return Fn(node_->inverse);
    }

    InverseKind inverse_kind() const {
        if (!node_->invertible) {
            throw CapabilityError(describe() + " is not invertible");
        }
        return node_->inv_kind;
    }

    /// Memoized: repeated demands return the same object. Falls back to a
    /// central-difference derivative when no closed form was registered.
    Fn derivative() const {
        if (!node_->differentiable) {
            throw CapabilityError(describe() + " is not differentiable");
        }
        return node_->deriv.demand();
    }

    /// Both f(x) and f'(x), by one call when an override is registered.
    std::pair<double, double> value_and_derivative(double x) const {
        if (!node_->differentiable) {
            throw CapabilityError(describe() + " is not differentiable");
        }
        if (node_->fdf) return node_->fdf(x);
        return {(*this)(x), derivative()(x)};
    }

    bool has_value_and_derivative_override() const {
        return static_cast<bool>(node_->fdf);
    }

    bool has_closed_antiderivative() const {
        return node_->antiderivative_cf.has_value();
    }

    Fn closed_antiderivative() const {
        if (!node_->antiderivative_cf) {
            throw CapabilityError(describe() + " has no closed-form antiderivative");
        }
        return *node_->antiderivative_cf;
    }

private:
    struct Node {
        std::uint64_t serial = 0;
        std::string name;
        std::function<double(double)> body;
        bool differentiable = false;
        bool invertible = false;
        InverseKind inv_kind = InverseKind::two_sided;
        std::shared_ptr<Node> inverse;  // knotted mutually; pairs keep each other alive
        LazyCell<Fn> deriv;
        std::function<Fn()> custom_deriv_maker;  // kept for cloning
        std::function<std::pair<double, double>(double)> fdf;
        std::optional<Fn> antiderivative_cf;
    };
    using NodePtr = std::shared_ptr<Node>;

    explicit Fn(NodePtr node) : node_(std::move(node)) {}

    static NodePtr new_node(std::string name, std::function<double(double)> body) {
        auto node = std::make_shared<Node>();
        node->serial = detail::next_serial();
        node->name = std::move(name);
        node->body = std::move(body);
        return node;
    }

    /// All derivative makers funnel through here so materializations are
    /// counted exactly once each.
    static void set_deriv_maker(Node& node, std::function<Fn()> maker, bool custom) {
        if (custom) node.custom_deriv_maker = maker;
        node.deriv.set_maker([m = std::move(maker)] {
            derivative_maker_calls().fetch_add(1);
            return m();
        });
    }

    static void install_fd_default(const NodePtr& node);

    static NodePtr compose_core(const Fn& f, const Fn& g);

    /// Fresh node with the same behaviour, no inverse attached.
    static NodePtr clone_for_upgrade(const Fn& src) {
        auto node = new_node(src.node_->name, src.node_->body);
        node->fdf = src.node_->fdf;
        node->antiderivative_cf = src.node_->antiderivative_cf;
        if (src.node_->differentiable) {
            node->differentiable = true;
            if (src.node_->deriv.materialized()) {
                Fn d = src.node_->deriv.demand();
                set_deriv_maker(*node, [d] { return d; }, true);
            } else if (src.node_->custom_deriv_maker) {
                set_deriv_maker(*node, src.node_->custom_deriv_maker, true);
            } else {
                install_fd_default(node);
            }
        }
        return node;
    }

    NodePtr node_;

    friend Fn make_fn(std::string, std::function<double(double)>);
    friend Fn make_differentiable(std::string, std::function<double(double)>);
    friend Fn constant(double);
    friend Fn fd_derivative(const Fn&, FDConfig);
    friend Fn add(const Fn&, const Fn&);
    friend Fn sub(const Fn&, const Fn&);
    friend Fn mul(const Fn&, const Fn&);
    friend Fn div(const Fn&, const Fn&);
    friend Fn neg(const Fn&);
    friend Fn make_invertible(const Fn&, const Fn&, InverseKind, Interval, Validation);
    friend void attach_derivative(Fn&, const Fn&);
    friend void attach_derivative_maker(Fn&, std::function<Fn()>);
    friend void attach_value_and_derivative(Fn&, std::function<std::pair<double, double>(double)>);
    friend Fn with_antiderivative(const Fn&, const Fn&);
    friend Fn lazy_derivative(const Fn&);
};

/// Applicable-only function object.
inline Fn make_fn(std::string name, std::function<double(double)> body) {
    return Fn(Fn::new_node(std::move(name), std::move(body)));
}

/// Differentiable function object with the central-difference default
/// derivative. Register a closed form afterwards with attach_derivative.
inline Fn make_differentiable(std::string name, std::function<double(double)> body) {
    auto node = Fn::new_node(std::move(name), std::move(body));
    node->differentiable = true;
    Fn::install_fd_default(node);
    return Fn(node);
}

/// The derivative tower of any FD-backed object is FD all the way up.
inline Fn fd_derivative(const Fn& f, FDConfig cfg = FDConfig::current()) {
    auto node = Fn::new_node("d(" + f.describe() + ")", [f, cfg](double x) {
        return (f(x + cfg.step) - f(x - cfg.step)) / cfg.divisor();
    });
    node->differentiable = true;
    Fn::install_fd_default(node);
    return Fn(node);
}

inline void Fn::install_fd_default(const NodePtr& node) {
    std::weak_ptr<Node> self = node;
    set_deriv_maker(*node,
                    [self] {
                        auto locked = self.lock();
                        if (!locked) throw Error("derivative demanded on a dead node");
                        return fd_derivative(Fn(locked), FDConfig::current());
                    },
                    false);
}

/// Constant function. Differentiable; the whole derivative tower is zero.
inline Fn constant(double value) {
    auto node = Fn::new_node(detail::format_number(value), [value](double) { return value; });
    node->differentiable = true;
    Fn::set_deriv_maker(*node, [] { return constant(0.0); }, true);
    return Fn(node);
}

/// Derivative-by-reference: applies derivative(f) but demands it only when
/// first evaluated. Keeps rule-built derivatives from forcing their operands'
/// towers at construction time.
inline Fn lazy_derivative(const Fn& f) {
    auto node = Fn::new_node("d(" + f.describe() + ")",
                             [f](double x) { return f.derivative()(x); });
    node->differentiable = true;
    Fn::set_deriv_maker(*node, [f] { return lazy_derivative(f.derivative()); }, true);
    return Fn(node);
}

// ---------------------------------------------------------------------------
// pointwise arithmetic
//
// Results are differentiable iff both operands are, and never invertible:
// a pointwise combination of bijections is not a bijection in general, and no
// narrower rule is claimed.

inline Fn add(const Fn& f, const Fn& g) {
    auto node = Fn::new_node("(" + f.describe() + "+" + g.describe() + ")",
                             [f, g](double x) { return f(x) + g(x); });
    if (f.differentiable() && g.differentiable()) {
        node->differentiable = true;
        Fn::set_deriv_maker(*node, [f, g] { return add(lazy_derivative(f), lazy_derivative(g)); },
                            true);
    }
    return Fn(node);
}

inline Fn sub(const Fn& f, const Fn& g) {
    auto node = Fn::new_node("(" + f.describe() + "-" + g.describe() + ")",
                             [f, g](double x) { return f(x) - g(x); });
    if (f.differentiable() && g.differentiable()) {
        node->differentiable = true;
        Fn::set_deriv_maker(*node, [f, g] { return sub(lazy_derivative(f), lazy_derivative(g)); },
                            true);
    }
    return Fn(node);
}

inline Fn neg(const Fn& f) {
    auto node = Fn::new_node("(-" + f.describe() + ")", [f](double x) { return -f(x); });
    if (f.differentiable()) {
        node->differentiable = true;
        Fn::set_deriv_maker(*node, [f] { return neg(lazy_derivative(f)); }, true);
    }
    return Fn(node);
}

inline Fn mul(const Fn& f, const Fn& g) {
    auto node = Fn::new_node("(" + f.describe() + "*" + g.describe() + ")",
                             [f, g](double x) { return f(x) * g(x); });
    if (f.differentiable() && g.differentiable()) {
        node->differentiable = true;
        Fn::set_deriv_maker(*node,
                            [f, g] {
                                return add(mul(lazy_derivative(f), g), mul(f, lazy_derivative(g)));
                            },
                            true);
    }
    return Fn(node);
}

inline Fn div(const Fn& f, const Fn& g) {
    auto node = Fn::new_node("(" + f.describe() + "/" + g.describe() + ")", [f, g](double x) {
        const double denom = g(x);
        if (denom == 0.0) {
            throw DomainError("division by zero at x = " + detail::format_number(x));
        }
        return f(x) / denom;
    });
    if (f.differentiable() && g.differentiable()) {
        node->differentiable = true;
        Fn::set_deriv_maker(*node,
                            [f, g] {
                                return div(sub(mul(lazy_derivative(f), g), mul(f, lazy_derivative(g))),
                                           mul(g, g));
                            },
                            true);
    }
    return Fn(node);
}

inline Fn operator+(const Fn& f, const Fn& g) { return add(f, g); }
inline Fn operator-(const Fn& f, const Fn& g) { return sub(f, g); }
inline Fn operator*(const Fn& f, const Fn& g) { return mul(f, g); }
inline Fn operator/(const Fn& f, const Fn& g) { return div(f, g); }
inline Fn operator-(const Fn& f) { return neg(f); }

// ---------------------------------------------------------------------------
// composition

inline Fn::NodePtr Fn::compose_core(const Fn& f, const Fn& g) {
    auto node = new_node("(" + f.describe() + "." + g.describe() + ")",
                         [f, g](double x) { return f(g(x)); });
    if (f.differentiable() && g.differentiable()) {
        node->differentiable = true;
        // (f∘g)' = (f'∘g) × g'. Built from lazy references so that demanding
        // the composite's derivative runs exactly one maker; f' and g' are
        // materialized only once the result is applied.
        set_deriv_maker(*node,
                        [f, g] {
                            return mul(lazy_derivative(f).compose(g), lazy_derivative(g));
                        },
                        true);
    }
    return node;
}

inline Fn Fn::compose(const Fn& g) const {
    const Fn& f = *this;
    NodePtr node = compose_core(f, g);
    if (f.invertible() && g.invertible()) {
        if (auto kind = detail::combine_kinds(f.inverse_kind(), g.inverse_kind())) {
            // (f∘g)^{-1} = g^{-1}∘f^{-1}. Both composites are built first,
            // then knotted, so neither escapes half-tied.
            NodePtr twin = compose_core(g.inverse(), f.inverse());
            node->invertible = true;
            node->inv_kind = *kind;
            node->inverse = twin;
            twin->invertible = true;
            twin->inv_kind = detail::mirror(*kind);
            twin->inverse = node;
        }
    }
    return Fn(node);
}

inline Fn compose(const Fn& f, const Fn& g) { return f.compose(g); }

inline double apply(const Fn& f, double x) { return f(x); }

inline std::string describe(const Fn& f) { return f.describe(); }

inline Fn derivative(const Fn& f) { return f.derivative(); }

inline Fn inverse(const Fn& f) { return f.inverse(); }

inline std::pair<double, double> value_and_derivative(const Fn& f, double x) {
    return f.value_and_derivative(x);
}

// ---------------------------------------------------------------------------
// invertible tier

/// A registered pair with the law it guarantees.
struct InversePair {
    Fn forward;
    Fn backward;
    InverseKind kind;
};

inline InversePair inverse_pair(const Fn& f) {
    return InversePair{f, f.inverse(), f.inverse_kind()};
}

namespace detail {

inline void validate_roundtrip(const Fn& outer, const Fn& inner, Interval domain,
                               const char* law) {
    constexpr int kSamples = 16;
    constexpr double kTol = 1e-8;
    double worst = 0.0;
    double worst_x = domain.lo;
    for (int i = 0; i < kSamples; ++i) {
        const double x =
            domain.lo + (domain.hi - domain.lo) * (i + 0.5) / static_cast<double>(kSamples);
        double err;
        try {
            err = std::abs(outer(inner(x)) - x) / (1.0 + std::abs(x));
        } catch (const DomainError& e) {
            throw ValidationError(std::string("inverse validation (") + law + ") hit a domain error at x = " +
                                  format_number(x) + ": " + e.what());
        }
        if (err > worst) {
            worst = err;
            worst_x = x;
        }
    }
    if (worst > kTol) {
        throw ValidationError(std::string("inverse validation failed (") + law +
                              "): worst sample x = " + format_number(worst_x) +
                              ", relative error " + format_number(worst) + " > " +
                              format_number(kTol));
    }
}

}  // namespace detail

/// Upgrades f with the invertible capability, registering finv as its inverse.
/// Registration is mutual: the result's inverse's inverse is the result
/// itself. Unless skipped, the pair is validated by sampling domain_hint.
/// Fresh objects are returned; the inputs are left untouched.
inline Fn make_invertible(const Fn& f, const Fn& finv, InverseKind kind, Interval domain_hint,
                          Validation validation = Validation::checked) {
    if (domain_hint.hi <= domain_hint.lo) {
        throw ValidationError("make_invertible: empty domain hint");
    }
    if (validation == Validation::checked) {
        switch (kind) {
            case InverseKind::two_sided: {
                // backward∘forward on the hint, forward∘backward on its image.
                detail::validate_roundtrip(finv, f, domain_hint, "backward∘forward");
                const double lo = f(domain_hint.lo);
                const double hi = f(domain_hint.hi);
                detail::validate_roundtrip(f, finv, {std::min(lo, hi), std::max(lo, hi)},
                                           "forward∘backward");
                break;
            }
            case InverseKind::left_only:
                detail::validate_roundtrip(finv, f, domain_hint, "backward∘forward");
                break;
            case InverseKind::right_only:
                detail::validate_roundtrip(f, finv, domain_hint, "forward∘backward");
                break;
        }
    }
    Fn::NodePtr fwd = Fn::clone_for_upgrade(f);
    if (f.same_object(finv)) {
        fwd->invertible = true;
        fwd->inv_kind = kind;
        fwd->inverse = fwd;  // self-inverse
        return Fn(fwd);
    }
    Fn::NodePtr bwd = Fn::clone_for_upgrade(finv);
    fwd->invertible = true;
    fwd->inv_kind = kind;
    fwd->inverse = bwd;
    bwd->invertible = true;
    bwd->inv_kind = detail::mirror(kind);
    bwd->inverse = fwd;
    return Fn(fwd);
}

/// (f⁻¹)'(y) = 1 / f'(f⁻¹(y)). Opt-in helper for registering the derivative
/// of an inverse in the combined tier; not applied automatically.
inline Fn derivative_of_inverse(const Fn& f) {
    if (!f.invertible()) throw CapabilityError(f.describe() + " is not invertible");
    if (!f.differentiable()) throw CapabilityError(f.describe() + " is not differentiable");
    const Fn back = f.inverse();
    return make_differentiable("d(" + back.describe() + ")", [f, back](double y) {
        const double x = back(y);
        const double slope = f.derivative()(x);
        if (slope == 0.0) {
            throw DomainError("inverse not differentiable where the forward slope vanishes, y = " +
                              detail::format_number(y));
        }
        return 1.0 / slope;
    });
}

// ---------------------------------------------------------------------------
// registration hooks (construction-knot phase only)

/// Replaces the finite-difference default with a closed form. Rejected once
/// the slot has materialized.
inline void attach_derivative(Fn& f, const Fn& closed_form) {
    if (!f.differentiable()) {
        throw CapabilityError(f.describe() + " is not differentiable; cannot attach a derivative");
    }
    Fn::set_deriv_maker(*f.node_, [closed_form] { return closed_form; }, true);
}

inline void attach_derivative_maker(Fn& f, std::function<Fn()> maker) {
    if (!f.differentiable()) {
        throw CapabilityError(f.describe() + " is not differentiable; cannot attach a derivative");
    }
    Fn::set_deriv_maker(*f.node_, std::move(maker), true);
}

/// Combined f(x), f'(x) override in the spirit of root-finder interfaces that
/// want both at once. Must agree with the default; the law suite checks it.
inline void attach_value_and_derivative(Fn& f,
                                        std::function<std::pair<double, double>(double)> fdf) {
    if (!f.differentiable()) {
        throw CapabilityError(f.describe() + " is not differentiable; cannot attach value+derivative");
    }
    f.node_->fdf = std::move(fdf);
}

/// Fresh object that additionally carries a closed-form antiderivative,
/// consulted by definite integration.
inline Fn with_antiderivative(const Fn& f, const Fn& antiderivative) {
    Fn::NodePtr node = Fn::clone_for_upgrade(f);
    node->invertible = f.invertible();
    node->inv_kind = f.node_->inv_kind;
    node->inverse = f.node_->inverse;
    node->antiderivative_cf = antiderivative;
    return Fn(node);
}

// ---------------------------------------------------------------------------
// identity and iteration

inline const Fn& identity() {
    static const Fn id = [] {
        Fn raw = make_differentiable("id", [](double x) { return x; });
        attach_derivative(raw, constant(1.0));
        return make_invertible(raw, raw, InverseKind::two_sided, {-10.0, 10.0});
    }();
    return id;
}

/// n-fold self-composition; iterate(f, 0) is the identity.
inline Fn iterate(const Fn& f, int n) {
    if (n < 0) throw DomainError("iterate: negative count");
    if (n == 0) return identity();
    Fn result = f;
    for (int i = 1; i < n; ++i) result = result.compose(f);
    return result;
}

}  // namespace fnalg
