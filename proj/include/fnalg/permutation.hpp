#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fnalg/errors.hpp"
#include "fnalg/fn.hpp"

namespace fnalg {

/// A permutation of [0, n) stored as its image array. Every permutation is a
/// bijection, so the invertible capability is unconditional; composition and
/// inversion stay inside this representation and run in O(n).
///
/// Orientation matches function composition: (p∘q)(i) = p(q(i)).
class Permutation {
public:
    /// Bypasses bijection validation. Exists for fault-injection tests.
    struct unchecked_t {};
    static constexpr unchecked_t unchecked{};

    explicit Permutation(std::vector<int> mapping, std::string name = "")
        : mapping_(std::move(mapping)), name_(std::move(name)) {
        std::vector<bool> seen(mapping_.size(), false);
        for (int v : mapping_) {
            if (v < 0 || v >= static_cast<int>(mapping_.size()) || seen[v]) {
                throw ValidationError("not a permutation of [0," +
                                      std::to_string(mapping_.size()) + "): " + render(mapping_));
            }
            seen[v] = true;
        }
    }

    Permutation(std::vector<int> mapping, unchecked_t, std::string name = "")
        : mapping_(std::move(mapping)), name_(std::move(name)) {}

    static Permutation identity(int n) {
        std::vector<int> m(static_cast<std::size_t>(n));
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m), unchecked, "id" + std::to_string(n));
    }

    int n() const { return static_cast<int>(mapping_.size()); }

    int operator()(int i) const {
        if (i < 0 || i >= n()) {
            throw DomainError("permutation index " + std::to_string(i) + " out of [0," +
                              std::to_string(n()) + ")");
        }
        return mapping_[static_cast<std::size_t>(i)];
    }

    int apply(int i) const { return (*this)(i); }

    const std::vector<int>& mapping() const { return mapping_; }
    const std::string& name() const { return name_; }

    Representation representation() const { return Representation::permutation; }
    bool invertible() const { return true; }

    Permutation compose(const Permutation& q) const {
        if (n() != q.n()) {
            throw DimensionError("permutation size mismatch: " + std::to_string(n()) + " vs " +
                                 std::to_string(q.n()));
        }
        std::vector<int> out(mapping_.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = mapping_[static_cast<std::size_t>(q.mapping_[i])];
        }
        return Permutation(std::move(out), unchecked);
    }

    Permutation inverse() const {
        std::vector<int> out(mapping_.size());
        for (std::size_t i = 0; i < mapping_.size(); ++i) {
            out[static_cast<std::size_t>(mapping_[i])] = static_cast<int>(i);
        }
        return Permutation(std::move(out), unchecked);
    }

    bool operator==(const Permutation& rhs) const { return mapping_ == rhs.mapping_; }

    /// Bracketed integer list, e.g. "[2,0,1]".
    std::string to_string() const { return render(mapping_); }

    static Permutation parse(std::string_view text) {
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        };
        skip_ws();
        if (pos >= text.size() || text[pos] != '[') {
            throw ParseError(pos, "expected '[' in permutation literal");
        }
        ++pos;
        std::vector<int> mapping;
        skip_ws();
        while (pos < text.size() && text[pos] != ']') {
            const char* begin = text.data() + pos;
            char* end = nullptr;
            const long v = std::strtol(begin, &end, 10);
            if (end == begin) throw ParseError(pos, "expected an integer in permutation literal");
            pos += static_cast<std::size_t>(end - begin);
            mapping.push_back(static_cast<int>(v));
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                skip_ws();
            }
        }
        if (pos >= text.size()) throw ParseError(pos, "unterminated permutation literal");
        ++pos;  // ']'
        skip_ws();
        if (pos != text.size()) throw ParseError(pos, "trailing characters after permutation literal");
        return Permutation(std::move(mapping));
    }

private:
    static std::string render(const std::vector<int>& mapping) {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < mapping.size(); ++i) {
            if (i > 0) os << ',';
            os << mapping[i];
        }
        os << ']';
        return os.str();
    }

    std::vector<int> mapping_;
    std::string name_;
};

inline int perm_apply(const Permutation& p, int i) { return p(i); }

inline Permutation perm_compose(const Permutation& p, const Permutation& q) {
    return p.compose(q);
}

inline Permutation perm_inverse(const Permutation& p) { return p.inverse(); }

inline Permutation identity_perm(int n) { return Permutation::identity(n); }

template <class Rng>
Permutation random_permutation(int n, Rng& rng) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    std::shuffle(m.begin(), m.end(), rng);
    return Permutation(std::move(m), Permutation::unchecked);
}

/// View through the generic function-object lens, for oracle comparisons
/// against the specialized composition.
inline Fn as_fn(const Permutation& p) {
    return make_fn(p.name().empty() ? p.to_string() : p.name(), [p](double x) {
        const int i = static_cast<int>(std::llround(x));
        return static_cast<double>(p(i));
    });
}

}  // namespace fnalg
