#pragma once

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fnalg/catalog.hpp"
#include "fnalg/errors.hpp"
#include "fnalg/expression.hpp"
#include "fnalg/lawcheck.hpp"
#include "fnalg/model.hpp"

/// Command bodies behind the CLI, written against streams so they are
/// testable in-process. Exit codes: 0 success, 1 check failure, 2 usage or
/// parse error, 3 domain or capability error.
namespace fnalg::cli {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

namespace detail {

inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Maps a thrown error to the documented exit code, printing the message.
inline int report(const Error& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const ParseError*>(&e)) return kExitUsage;
    return kExitDomain;
}

}  // namespace detail

inline int cmd_eval(const std::string& expression, double x, std::ostream& out,
                    std::ostream& err) {
    try {
        const Fn f = expr::build(expression, catalog());
        out << detail::format_value(f(x)) << "\n";
        return kExitOk;
    } catch (const Error& e) {
        return detail::report(e, err);
    }
}

enum class TableFormat { csv, json };

inline int cmd_table(const std::string& expression, double lo, double hi, int steps,
                     TableFormat format, std::ostream& out, std::ostream& err) {
    if (steps < 1) {
        err << "error: table needs at least 1 step\n";
        return kExitUsage;
    }
    try {
        const Fn f = expr::build(expression, catalog());
        nlohmann::json rows = nlohmann::json::array();
        if (format == TableFormat::csv) out << "x,value\n";
        for (int i = 0; i <= steps; ++i) {
            const double x = lo + (hi - lo) * i / static_cast<double>(steps);
            std::string cell;
            double value = 0.0;
            bool ok = true;
            try {
                value = f(x);
            } catch (const Error& e) {
                ok = false;
                cell = std::string("error(") + e.what() + ")";
            }
            if (format == TableFormat::csv) {
                out << detail::format_value(x) << ","
                    << (ok ? detail::format_value(value) : "error") << "\n";
            } else {
                nlohmann::json row{{"x", x}};
                if (ok) {
                    row["value"] = value;
                } else {
                    row["error"] = cell;
                }
                rows.push_back(std::move(row));
            }
        }
        if (format == TableFormat::json) out << rows.dump() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        return detail::report(e, err);
    }
}

inline int cmd_check(const std::string& suite, FaultInjection inject, std::ostream& out,
                     std::ostream& err) {
    try {
        const auto results = lawcheck::run_suite(suite, inject);
        int failures = 0;
        for (const auto& r : results) {
            out << (r.pass ? "PASS" : "FAIL") << "  " << r.suite << "/" << r.law;
            if (r.tolerance > 0.0) {
                out << "  (tol " << r.tolerance << ")";
            }
            out << "  " << r.detail << "\n";
            if (!r.pass) ++failures;
        }
        out << (failures == 0 ? "all laws hold" : std::to_string(failures) + " law(s) violated")
            << " [" << results.size() << " checked]\n";
        return failures == 0 ? kExitOk : kExitCheckFailed;
    } catch (const Error& e) {
        return detail::report(e, err);
    }
}

inline int cmd_demo_lognormal(const std::string& csv_path, std::uint64_t seed, std::ostream& out,
                              std::ostream& err) {
    try {
        const std::vector<Datum> data = read_data_csv_file(csv_path);
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data[i].value <= 0.0) {
                throw DomainError("row " + std::to_string(i + 1) +
                                  ": log-normal data must be positive, got " +
                                  fnalg::detail::format_number(data[i].value));
            }
        }
        const Fn& log_fn = catalog().fn("log");
        std::vector<double> logs;
        logs.reserve(data.size());
        for (const Datum& d : data) logs.push_back(log_fn(d.value));
        const ContinuousModel fitted = fit_normal(logs);
        const TransformedModel model = transform_model(fitted, log_fn);

        out << "fitted mu = " << detail::format_value(fitted.param("mean")) << "\n";
        out << "fitted sigma = " << detail::format_value(fitted.param("sd")) << "\n";
        const Datum& first = data.front();
        out << "first datum value = " << detail::format_value(first.value)
            << ", aom = " << detail::format_value(first.aom)
            << ", transformed aom = " << detail::format_value(transformed_aom(log_fn, first))
            << "\n";

        RandomSource source(seed);
        const int n = 10000;
        double mean = 0.0;
        std::vector<double> draws;
        draws.reserve(n);
        for (int i = 0; i < n; ++i) {
            draws.push_back(model.sample(source));
            mean += draws.back();
        }
        mean /= n;
        double ss = 0.0;
        for (double v : draws) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / (n - 1));
        out << "sample mean = " << detail::format_value(mean)
            << ", sample sd = " << detail::format_value(sd) << " (n = " << n
            << ", seed = " << seed << ")\n";
        out << "model = " << to_json(model).dump() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        return detail::report(e, err);
    }
}

inline int cmd_demo_polar(std::ostream& out, std::ostream& err) {
    try {
        const double pi = std::numbers::pi;
        const VectorFn& p2c = polar_to_cartesian();
        const MultivariateModel polar_view = transform_model_multivariate(
            standard_normal_2d(), p2c, {Interval{1e-9, 8.0}, Interval{-pi, pi}});

        out << "jacobian determinant of polar2cartesian (should equal r):\n";
        for (double r : {0.5, 1.0, 2.0, 4.0}) {
            out << "  r = " << r
                << ": det J = " << detail::format_value(jacobian_determinant(p2c, Vec{r, 0.8}))
                << "\n";
        }
        out << "standard 2-D normal seen in polar coordinates, density vs r e^{-r^2/2}/(2 pi):\n";
        for (double r : {0.5, 1.0, 2.0}) {
            const double got = polar_view.density(Vec{r, 0.3});
            const double want = r * std::exp(-0.5 * r * r) / (2.0 * pi);
            out << "  r = " << r << ": density = " << detail::format_value(got)
                << ", closed form = " << detail::format_value(want) << "\n";
        }
        const double mass = definite_integral(
            [&polar_view, pi](double r) {
                return definite_integral(
                    [&polar_view, r](double t) { return polar_view.density(Vec{r, t}); },
                    -pi + 1e-12, pi, QuadratureConfig{64, 8, 1e-7});
            },
            1e-9, 8.0, QuadratureConfig{128, 8, 1e-6});
        out << "total mass over r in (0,8], theta in (-pi,pi] = " << detail::format_value(mass)
            << "\n";
        return kExitOk;
    } catch (const Error& e) {
        return detail::report(e, err);
    }
}

}  // namespace fnalg::cli
