#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fnalg/errors.hpp"

namespace fnalg {

/// Small dense row-major matrix. Sized for Jacobians and linear maps, not for
/// numerical linear algebra at scale.
class Matrix {
public:
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows <= 0 || cols <= 0) throw DimensionError("matrix dimensions must be positive");
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = static_cast<int>(rows.size());
        if (rows_ == 0) throw DimensionError("matrix needs at least one row");
        cols_ = static_cast<int>(rows.begin()->size());
        if (cols_ == 0) throw DimensionError("matrix needs at least one column");
        data_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != cols_) {
                throw DimensionError("ragged matrix initializer");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) {
            throw DimensionError("matrix product dimension mismatch: " + shape() + " * " +
                                 rhs.shape());
        }
        Matrix out(rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int k = 0; k < cols_; ++k) {
                const double a = at(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < rhs.cols_; ++j) {
                    out.at(i, j) += a * rhs.at(k, j);
                }
            }
        }
        return out;
    }

    std::vector<double> operator*(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != cols_) {
            throw DimensionError("matrix-vector dimension mismatch");
        }
        std::vector<double> out(static_cast<std::size_t>(rows_), 0.0);
        for (int i = 0; i < rows_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < cols_; ++j) acc += at(i, j) * x[j];
            out[i] = acc;
        }
        return out;
    }

    /// LU with partial pivoting; pivots below 1e-12 in magnitude count as
    /// singular and give determinant zero.
    double determinant() const {
        if (rows_ != cols_) throw DimensionError("determinant of a non-square matrix");
        Matrix lu = *this;
        const int n = rows_;
        double det = 1.0;
        for (int col = 0; col < n; ++col) {
            int pivot = col;
            for (int r = col + 1; r < n; ++r) {
                if (std::abs(lu.at(r, col)) > std::abs(lu.at(pivot, col))) pivot = r;
            }
            if (std::abs(lu.at(pivot, col)) < 1e-12) return 0.0;
            if (pivot != col) {
                lu.swap_rows(pivot, col);
                det = -det;
            }
            det *= lu.at(col, col);
            for (int r = col + 1; r < n; ++r) {
                const double factor = lu.at(r, col) / lu.at(col, col);
                for (int c = col; c < n; ++c) lu.at(r, c) -= factor * lu.at(col, c);
            }
        }
        return det;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw DimensionError("inverse of a non-square matrix");
        const int n = rows_;
        Matrix work = *this;
        Matrix out = identity(n);
        for (int col = 0; col < n; ++col) {
            int pivot = col;
            for (int r = col + 1; r < n; ++r) {
                if (std::abs(work.at(r, col)) > std::abs(work.at(pivot, col))) pivot = r;
            }
            if (std::abs(work.at(pivot, col)) < 1e-12) {
                throw SingularMatrixError("matrix is singular to working precision");
            }
            if (pivot != col) {
                work.swap_rows(pivot, col);
                out.swap_rows(pivot, col);
            }
            const double scale = 1.0 / work.at(col, col);
            for (int c = 0; c < n; ++c) {
                work.at(col, c) *= scale;
                out.at(col, c) *= scale;
            }
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                const double factor = work.at(r, col);
                if (factor == 0.0) continue;
                for (int c = 0; c < n; ++c) {
                    work.at(r, c) -= factor * work.at(col, c);
                    out.at(r, c) -= factor * out.at(col, c);
                }
            }
        }
        return out;
    }

    bool operator==(const Matrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }

    /// Row-major nested-list form, e.g. "[[1,0],[0,1]]".
    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (int i = 0; i < rows_; ++i) {
            if (i > 0) os << ',';
            os << '[';
            for (int j = 0; j < cols_; ++j) {
                if (j > 0) os << ',';
                os << at(i, j);
            }
            os << ']';
        }
        os << ']';
        return os.str();
    }

    std::string shape() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Parses the row-major nested-list form produced by Matrix::to_string.
inline Matrix parse_matrix(std::string_view text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto expect = [&](char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) {
            throw ParseError(pos, std::string("expected '") + c + "' in matrix literal");
        }
        ++pos;
    };
    expect('[');
    std::vector<std::vector<double>> rows;
    while (true) {
        expect('[');
        std::vector<double> row;
        while (true) {
            skip_ws();
            const char* begin = text.data() + pos;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) throw ParseError(pos, "expected a number in matrix literal");
            pos += static_cast<std::size_t>(end - begin);
            row.push_back(v);
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        expect(']');
        rows.push_back(std::move(row));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
            ++pos;
            continue;
        }
        break;
    }
    expect(']');
    skip_ws();
    if (pos != text.size()) throw ParseError(pos, "trailing characters after matrix literal");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size()) {
            throw ParseError(0, "ragged rows in matrix literal");
        }
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
        }
    }
    return m;
}

}  // namespace fnalg
