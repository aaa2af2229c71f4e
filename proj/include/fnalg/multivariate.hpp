#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fnalg/config.hpp"
#include "fnalg/errors.hpp"
#include "fnalg/matrix.hpp"

namespace fnalg {

using Vec = std::vector<double>;

/// Map from an n_in-vector to an n_out-vector, with an optional closed-form
/// Jacobian and an optional registered inverse (square maps only). Immutable
/// after the construction knot; evaluation is reentrant.
class VectorFn {
public:
    VectorFn(std::string name, int n_in, int n_out, std::function<Vec(const Vec&)> body)
        : node_(std::make_shared<Node>()) {
        if (n_in <= 0 || n_out <= 0) throw DimensionError("VectorFn dimensions must be positive");
        node_->name = std::move(name);
        node_->n_in = n_in;
        node_->n_out = n_out;
        node_->body = std::move(body);
    }

    Vec operator()(const Vec& x) const {
        check_input(x);
        Vec y = node_->body(x);
        if (static_cast<int>(y.size()) != node_->n_out) {
            throw DimensionError(node_->name + " produced " + std::to_string(y.size()) +
                                 " components, declared " + std::to_string(node_->n_out));
        }
        return y;
    }

    Vec apply(const Vec& x) const { return (*this)(x); }

    int n_in() const { return node_->n_in; }
    int n_out() const { return node_->n_out; }
    const std::string& name() const { return node_->name; }

    bool has_closed_jacobian() const { return static_cast<bool>(node_->jacobian_maker); }

    bool has_inverse() const { return static_cast<bool>(node_->inverse); }

    VectorFn inverse() const {
        if (!node_->inverse) throw CapabilityError(node_->name + " has no registered inverse");
        return VectorFn(node_->inverse);
    }

    bool same_object(const VectorFn& other) const { return node_ == other.node_; }

    /// f.compose(g) applies g first. The Jacobian maker is the chain rule
    /// J_f(g(x)) * J_g(x); the inverse, when both parts have one, is the
    /// reversed composition, knotted mutually.
    VectorFn compose(const VectorFn& g) const;

    /// ∂f_i/∂x_j at x: closed form if registered, otherwise column-by-column
    /// central differences.
    friend Matrix jacobian(const VectorFn& f, const Vec& x) {
        f.check_input(x);
        if (f.node_->jacobian_maker) {
            Matrix j = f.node_->jacobian_maker(x);
            if (j.rows() != f.n_out() || j.cols() != f.n_in()) {
                throw DimensionError(f.name() + ": closed-form Jacobian has shape " + j.shape());
            }
            return j;
        }
        const double h = config::fd_step();
        Matrix j(f.n_out(), f.n_in());
        Vec probe = x;
        for (int col = 0; col < f.n_in(); ++col) {
            probe[col] = x[col] + h;
            const Vec hi = f(probe);
            probe[col] = x[col] - h;
            const Vec lo = f(probe);
            probe[col] = x[col];
            for (int row = 0; row < f.n_out(); ++row) {
                j.at(row, col) = (hi[row] - lo[row]) / (2.0 * h);
            }
        }
        return j;
    }

    friend void attach_jacobian(VectorFn& f, std::function<Matrix(const Vec&)> maker) {
        f.node_->jacobian_maker = std::move(maker);
    }

    /// Validates the roundtrip g(f(x)) ≈ x on the samples, then knots f and g
    /// as mutual inverses. Both maps must be square and of equal dimension.
    friend void make_mutual_inverse(VectorFn& f, VectorFn& g, std::span<const Vec> samples,
                                    double tol) {
        if (f.n_in() != f.n_out() || g.n_in() != g.n_out() || f.n_in() != g.n_in()) {
            throw DimensionError("mutual inverse requires square maps of equal dimension");
        }
        for (const Vec& x : samples) {
            const Vec back = g(f(x));
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double err = std::abs(back[i] - x[i]) / (1.0 + std::abs(x[i]));
                if (err > tol) {
                    throw ValidationError("inverse validation failed for " + f.name() + "/" +
                                          g.name() + " at sample component " + std::to_string(i));
                }
            }
        }
        f.node_->inverse = g.node_;
        g.node_->inverse = f.node_;
    }

private:
    struct Node {
        std::string name;
        int n_in = 0;
        int n_out = 0;
        std::function<Vec(const Vec&)> body;
        std::function<Matrix(const Vec&)> jacobian_maker;
        std::shared_ptr<Node> inverse;  // mutual knot keeps the pair alive
    };

    explicit VectorFn(std::shared_ptr<Node> node) : node_(std::move(node)) {}

    void check_input(const Vec& x) const {
        if (static_cast<int>(x.size()) != node_->n_in) {
            throw DimensionError(node_->name + " expects " + std::to_string(node_->n_in) +
                                 " components, got " + std::to_string(x.size()));
        }
    }

    std::shared_ptr<Node> node_;
};

inline VectorFn VectorFn::compose(const VectorFn& g) const {
    if (n_in() != g.n_out()) {
        throw DimensionError("compose dimension mismatch: " + name() + " after " + g.name());
    }
    const VectorFn f = *this;
    VectorFn r("(" + f.name() + "." + g.name() + ")", g.n_in(), f.n_out(),
               [f, g](const Vec& x) { return f(g(x)); });
    attach_jacobian(r, [f, g](const Vec& x) { return jacobian(f, g(x)) * jacobian(g, x); });
    if (f.has_inverse() && g.has_inverse() && f.n_in() == f.n_out() && g.n_in() == g.n_out()) {
        VectorFn gi = g.inverse();
        VectorFn fi = f.inverse();
        VectorFn twin("(" + gi.name() + "." + fi.name() + ")", fi.n_in(), gi.n_out(),
                      [gi, fi](const Vec& y) { return gi(fi(y)); });
        attach_jacobian(twin,
                        [gi, fi](const Vec& y) { return jacobian(gi, fi(y)) * jacobian(fi, y); });
        r.node_->inverse = twin.node_;
        twin.node_->inverse = r.node_;
    }
    return r;
}

inline VectorFn compose(const VectorFn& f, const VectorFn& g) { return f.compose(g); }

/// Vector of partials of a scalar-valued map.
inline Vec gradient(const VectorFn& f, const Vec& x) {
    if (f.n_out() != 1) {
        throw DimensionError("gradient requires a scalar-valued map, got n_out = " +
                             std::to_string(f.n_out()));
    }
    const Matrix j = jacobian(f, x);
    Vec g(static_cast<std::size_t>(f.n_in()));
    for (int col = 0; col < f.n_in(); ++col) g[static_cast<std::size_t>(col)] = j.at(0, col);
    return g;
}

inline double jacobian_determinant(const VectorFn& f, const Vec& x) {
    if (f.n_in() != f.n_out()) {
        throw DimensionError("Jacobian determinant requires a square map, got " +
                             std::to_string(f.n_out()) + "x" + std::to_string(f.n_in()));
    }
    return jacobian(f, x).determinant();
}

namespace detail {

inline std::pair<VectorFn, VectorFn> build_polar_pair() {
    VectorFn p2c("polar2cartesian", 2, 2, [](const Vec& rt) {
        const double r = rt[0];
        const double theta = rt[1];
        if (r <= 0.0) {
            throw DomainError("polar2cartesian: radius must be positive, got " +
                              format_number(r));
        }
        return Vec{r * std::cos(theta), r * std::sin(theta)};
    });
    attach_jacobian(p2c, [](const Vec& rt) {
        const double r = rt[0];
        const double theta = rt[1];
        return Matrix{{std::cos(theta), -r * std::sin(theta)},
                      {std::sin(theta), r * std::cos(theta)}};
    });

    VectorFn c2p("cartesian2polar", 2, 2, [](const Vec& xy) {
        const double x = xy[0];
        const double y = xy[1];
        if (x == 0.0 && y == 0.0) {
            throw DomainError("cartesian2polar: undefined at the origin");
        }
        return Vec{std::hypot(x, y), std::atan2(y, x)};
    });
    attach_jacobian(c2p, [](const Vec& xy) {
        const double x = xy[0];
        const double y = xy[1];
        const double r2 = x * x + y * y;
        const double r = std::sqrt(r2);
        return Matrix{{x / r, y / r}, {-y / r2, x / r2}};
    });

    // Validation grid inside the bijective branch: r > 0, θ ∈ (−π, π).
    std::vector<Vec> samples;
    for (int i = 1; i <= 4; ++i) {
        for (int k = -2; k <= 2; ++k) {
            samples.push_back(Vec{0.5 * i, 0.6 * k});
        }
    }
    make_mutual_inverse(p2c, c2p, samples, 1e-10);
    return {p2c, c2p};
}

inline const std::pair<VectorFn, VectorFn>& polar_pair() {
    static const std::pair<VectorFn, VectorFn> pair = build_polar_pair();
    return pair;
}

}  // namespace detail

/// (r, θ) ↦ (r cos θ, r sin θ), r > 0 strictly. Mutual inverse of
/// cartesian_to_polar with closed-form Jacobians on both sides.
inline const VectorFn& polar_to_cartesian() { return detail::polar_pair().first; }

/// (x, y) ↦ (√(x²+y²), atan2(y, x)), undefined at the origin; θ ∈ (−π, π].
inline const VectorFn& cartesian_to_polar() { return detail::polar_pair().second; }

}  // namespace fnalg
