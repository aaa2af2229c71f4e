#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "fnalg/fn.hpp"
#include "fnalg/matrix.hpp"
#include "fnalg/multivariate.hpp"

namespace fnalg {

/// A linear transformation held by its matrix. Composition is a matrix
/// product and inversion a matrix inverse, so both stay inside this
/// representation; the Jacobian at every point is the matrix itself.
class LinearMap {
public:
    explicit LinearMap(Matrix matrix, std::string name = "")
        : matrix_(std::move(matrix)), name_(std::move(name)) {}

    static LinearMap identity(int n) {
        return LinearMap(Matrix::identity(n), "id" + std::to_string(n));
    }

    const Matrix& matrix() const { return matrix_; }
    const std::string& name() const { return name_.empty() ? fallback_name() : name_; }
    int rows() const { return matrix_.rows(); }
    int cols() const { return matrix_.cols(); }

    Representation representation() const { return Representation::linear_map; }

    Vec operator()(const Vec& x) const { return matrix_ * x; }
    Vec apply(const Vec& x) const { return (*this)(x); }

    /// a.compose(b) applies b first: the matrix is a.matrix * b.matrix.
    LinearMap compose(const LinearMap& b) const {
        if (cols() != b.rows()) {
            throw DimensionError("linear compose dimension mismatch: " + matrix_.shape() +
                                 " after " + b.matrix_.shape());
        }
        return LinearMap(matrix_ * b.matrix_, "(" + name() + "." + b.name() + ")");
    }

    LinearMap inverse() const {
        return LinearMap(matrix_.inverse(), "inv(" + name() + ")");
    }

    /// View as a VectorFn with the matrix as closed-form Jacobian; when the
    /// map is square and nonsingular the inverse map is knotted on as well.
    VectorFn as_vector_fn() const {
        const Matrix m = matrix_;
        VectorFn f(name(), cols(), rows(), [m](const Vec& x) { return m * x; });
        attach_jacobian(f, [m](const Vec&) { return m; });
        if (rows() == cols()) {
            try {
                const Matrix mi = matrix_.inverse();
                VectorFn g("inv(" + name() + ")", rows(), cols(),
                           [mi](const Vec& y) { return mi * y; });
                attach_jacobian(g, [mi](const Vec&) { return mi; });
                std::vector<Vec> samples;
                Vec probe(static_cast<std::size_t>(cols()), 1.0);
                samples.push_back(probe);
                make_mutual_inverse(f, g, samples, 1e-6 * condition_estimate());
            } catch (const SingularMatrixError&) {
                // stays a plain forward map
            }
        }
        return f;
    }

    /// Crude conditioning scale used to loosen roundtrip tolerances for
    /// ill-conditioned matrices.
    double condition_estimate() const {
        double max_abs = 0.0;
        double min_row_abs = 0.0;
        for (int i = 0; i < matrix_.rows(); ++i) {
            double row_max = 0.0;
            for (int j = 0; j < matrix_.cols(); ++j) {
                row_max = std::max(row_max, std::abs(matrix_.at(i, j)));
            }
            max_abs = std::max(max_abs, row_max);
            min_row_abs = (i == 0) ? row_max : std::min(min_row_abs, row_max);
        }
        if (min_row_abs <= 0.0) return 1e12;
        return std::max(1.0, max_abs / min_row_abs);
    }

private:
    const std::string& fallback_name() const {
        static const std::string anon = "linear";
        return anon;
    }

    Matrix matrix_;
    std::string name_;
};

inline LinearMap linear_compose(const LinearMap& a, const LinearMap& b) { return a.compose(b); }

inline LinearMap linear_inverse(const LinearMap& a) { return a.inverse(); }

/// Counterclockwise rotation of the plane.
inline LinearMap rotation2d(double angle) {
    return LinearMap(Matrix{{std::cos(angle), -std::sin(angle)},
                            {std::sin(angle), std::cos(angle)}},
                     "rot(" + detail::format_number(angle) + ")");
}

}  // namespace fnalg
