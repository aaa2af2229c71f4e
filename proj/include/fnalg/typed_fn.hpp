#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "fnalg/config.hpp"

namespace fnalg {

/// Applicable-tier function object over arbitrary argument and result types.
/// The numeric capability tiers live on Fn; this template exists to show the
/// object model itself is not tied to reals (string length being the stock
/// example). Serials come from the same process-wide counter as Fn.
template <class T, class U>
class TypedFn {
public:
    TypedFn(std::string name, std::function<U(T)> body)
        : node_(std::make_shared<const Node>(
              Node{detail::next_serial(), std::move(name), std::move(body)})) {}

    U operator()(const T& x) const { return node_->body(x); }
    U apply(const T& x) const { return (*this)(x); }

    std::uint64_t serial() const { return node_->serial; }

    std::string describe() const {
        if (!node_->name.empty()) return node_->name;
        return "f" + std::to_string(node_->serial);
    }

    template <class S>
    TypedFn<S, U> compose(const TypedFn<S, T>& g) const {
        const TypedFn f = *this;
        return TypedFn<S, U>("(" + f.describe() + "." + g.describe() + ")",
                             [f, g](const S& x) { return f(g(x)); });
    }

private:
    struct Node {
        std::uint64_t serial;
        std::string name;
        std::function<U(T)> body;
    };
    std::shared_ptr<const Node> node_;
};

template <class T, class U>
U apply(const TypedFn<T, U>& f, const T& x) {
    return f(x);
}

}  // namespace fnalg
