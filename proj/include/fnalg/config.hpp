#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <string>

namespace fnalg {

/// Process-wide tunables. Each knob maps to a CLI flag / config key of the
/// same name. Reads are lock-free; writes are expected at startup only.
namespace config {

namespace detail {
inline std::atomic<double>& fd_step_slot() {
    static std::atomic<double> v{0.001};
    return v;
}
inline std::atomic<double>& quad_tol_slot() {
    static std::atomic<double> v{1e-9};
    return v;
}
inline std::atomic<int>& quad_panels_slot() {
    static std::atomic<int> v{256};
    return v;
}
}  // namespace detail

/// Central-difference half-width used by default derivatives (`fd_step`).
inline double fd_step() { return detail::fd_step_slot().load(); }
inline void set_fd_step(double step) { detail::fd_step_slot().store(step); }

/// Quadrature convergence tolerance (`quad_tol`).
inline double quad_tol() { return detail::quad_tol_slot().load(); }
inline void set_quad_tol(double tol) { detail::quad_tol_slot().store(tol); }

/// Initial Simpson panel count (`quad_panels`).
inline int quad_panels() { return detail::quad_panels_slot().load(); }
inline void set_quad_panels(int panels) { detail::quad_panels_slot().store(panels); }

}  // namespace config

namespace detail {

/// Creation-order serial shared by every kind of function object.
inline std::uint64_t next_serial() {
    static std::atomic<std::uint64_t> counter{0};
    return counter.fetch_add(1);
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace detail

/// A closed real interval, used for validation sampling and law checks.
struct Interval {
    double lo;
    double hi;
};

}  // namespace fnalg
