#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <utility>

#include "fnalg/errors.hpp"

namespace fnalg {

/// A memoized, on-demand slot. The maker runs at most once even under
/// concurrent demand; losers observe the winner's value. Demanding never
/// cascades: the maker decides how deep to go.
template <class T>
class LazyCell {
public:
    LazyCell() = default;

    LazyCell(const LazyCell&) = delete;
    LazyCell& operator=(const LazyCell&) = delete;

    void set_maker(std::function<T()> maker) {
        std::lock_guard lock(mutex_);
        if (value_.has_value()) {
            throw Error("LazyCell: cannot replace maker after materialization");
        }
        maker_ = std::move(maker);
    }

    bool has_maker() const {
        std::lock_guard lock(mutex_);
        return static_cast<bool>(maker_);
    }

    bool materialized() const {
        std::lock_guard lock(mutex_);
        return value_.has_value();
    }

    const T& demand() const {
        std::call_once(once_, [this] {
            std::function<T()> maker;
            {
                std::lock_guard lock(mutex_);
                maker = maker_;
            }
            if (!maker) {
                throw Error("LazyCell: demanded with no maker installed");
            }
            T made = maker();
            std::lock_guard lock(mutex_);
            value_.emplace(std::move(made));
            maker_ = nullptr;
        });
        return *value_;
    }

private:
    mutable std::once_flag once_;
    mutable std::mutex mutex_;
    mutable std::optional<T> value_;
    mutable std::function<T()> maker_;
};

}  // namespace fnalg
