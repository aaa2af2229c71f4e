#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fnalg/errors.hpp"
#include "fnalg/fn.hpp"
#include "fnalg/integration.hpp"
#include "fnalg/multivariate.hpp"

namespace fnalg {

/// Seedable deterministic generator, always passed in explicitly so samplers
/// stay pure with respect to everything but the source.
using RandomSource = std::mt19937_64;

/// A continuous measurement: the recorded value plus the measurement quantum
/// around it (accuracy of measurement).
struct Datum {
    double value;
    double aom;

    Datum(double value_, double aom_) : value(value_), aom(aom_) {
        if (!(aom > 0.0)) {
            throw ValidationError("Datum: accuracy of measurement must be positive");
        }
    }
};

inline double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

/// Parameterised probability model over continuous data: density, sampling,
/// labelled parameters, and a declared effective support for normalization
/// checks.
class ContinuousModel {
public:
    ContinuousModel(std::string name, std::function<double(double)> density,
                    std::function<double(RandomSource&)> sampler,
                    std::vector<std::pair<std::string, double>> params, Interval support)
        : name_(std::move(name)),
          density_(std::move(density)),
          sampler_(std::move(sampler)),
          params_(std::move(params)),
          support_(support) {}

    double density(double x) const { return density_(x); }
    double sample(RandomSource& source) const { return sampler_(source); }

    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, double>>& params() const { return params_; }
    Interval support() const { return support_; }

    double param(const std::string& key) const {
        for (const auto& [k, v] : params_) {
            if (k == key) return v;
        }
        throw NotFoundError(name_ + " has no parameter '" + key + "'");
    }

private:
    std::string name_;
    std::function<double(double)> density_;
    std::function<double(RandomSource&)> sampler_;
    std::vector<std::pair<std::string, double>> params_;
    Interval support_;
};

/// Normal(mean, sd). Support is declared as mean ± 8 sd, wide enough that the
/// truncated normalization error is far below the checking tolerance.
inline ContinuousModel normal_model(double mean, double sd) {
    if (!(sd > 0.0)) throw ValidationError("normal_model: sd must be positive");
    return ContinuousModel(
        "Normal", [mean, sd](double x) { return normal_pdf(x, mean, sd); },
        [mean, sd](RandomSource& source) {
            std::normal_distribution<double> draw(mean, sd);
            return draw(source);
        },
        {{"mean", mean}, {"sd", sd}}, Interval{mean - 8.0 * sd, mean + 8.0 * sd});
}

inline const ContinuousModel& n01() {
    static const ContinuousModel m = [] {
        ContinuousModel base = normal_model(0.0, 1.0);
        return ContinuousModel("N01", [](double x) { return normal_pdf(x, 0.0, 1.0); },
                               [](RandomSource& source) {
                                   std::normal_distribution<double> draw(0.0, 1.0);
                                   return draw(source);
                               },
                               base.params(), base.support());
    }();
    return m;
}

/// AoM rescaling under a transform: the quantum around d.value maps to
/// d.aom * |f'(d.value)| in the transformed space.
inline double transformed_aom(const Fn& f, const Datum& d) {
    if (!f.differentiable()) {
        throw CapabilityError("transformed_aom: " + f.describe() + " is not differentiable");
    }
    const double scaled = d.aom * std::abs(f.derivative()(d.value));
    if (scaled == 0.0) {
        throw DomainError("transformed_aom: derivative of " + f.describe() + " vanishes at " +
                          detail::format_number(d.value) + "; quantum degenerates");
    }
    return scaled;
}

/// A base model viewed through an invertible differentiable map f. The map
/// sends raw data space to the base model's space (log for a log-Normal), so
/// the density picks up |f'| and sampling goes back through f⁻¹.
class TransformedModel {
public:
    TransformedModel(ContinuousModel base, Fn map)
        : base_(std::move(base)),
          map_(std::move(map)),
          name_("Transformed(" + base_.name() + "," + map_.describe() + ")") {}

    double density(double y) const {
        return base_.density(map_(y)) * std::abs(map_.derivative()(y));
    }

    double sample(RandomSource& source) const {
        return map_.inverse()(base_.sample(source));
    }

    /// Base support pulled back through the map.
    Interval support() const {
        const Fn back = map_.inverse();
        const double a = back(base_.support().lo);
        const double b = back(base_.support().hi);
        return Interval{std::min(a, b), std::max(a, b)};
    }

    const ContinuousModel& base() const { return base_; }
    const Fn& map() const { return map_; }
    const std::string& name() const { return name_; }

private:
    ContinuousModel base_;
    Fn map_;
    std::string name_;
};

inline TransformedModel transform_model(const ContinuousModel& base, const Fn& f) {
    if (!f.invertible()) {
        throw CapabilityError("transform_model: " + f.describe() +
                              " lacks the invertible capability");
    }
    if (!f.differentiable()) {
        throw CapabilityError("transform_model: " + f.describe() +
                              " lacks the differentiable capability");
    }
    return TransformedModel(base, f);
}

/// Sample mean and sample standard deviation (n−1 divisor).
inline ContinuousModel fit_normal(const std::vector<double>& data) {
    if (data.size() < 2) {
        throw InsufficientDataError("fit_normal: need at least 2 data, got " +
                                    std::to_string(data.size()));
    }
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(data.size());
    double ss = 0.0;
    for (double v : data) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(data.size() - 1));
    if (sd == 0.0) {
        throw DegenerateDataError("fit_normal: zero spread; all " +
                                  std::to_string(data.size()) + " values equal " +
                                  detail::format_number(mean));
    }
    return normal_model(mean, sd);
}

inline ContinuousModel fit_normal(const std::vector<Datum>& data) {
    std::vector<double> values;
    values.reserve(data.size());
    for (const Datum& d : data) values.push_back(d.value);
    return fit_normal(values);
}

// ---------------------------------------------------------------------------
// multivariate models

class MultivariateModel {
public:
    MultivariateModel(std::string name, int dim, std::function<double(const Vec&)> density,
                      std::function<Vec(RandomSource&)> sampler, std::vector<Interval> support)
        : name_(std::move(name)),
          dim_(dim),
          density_(std::move(density)),
          sampler_(std::move(sampler)),
          support_(std::move(support)) {}

    double density(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim_) {
            throw DimensionError(name_ + " expects " + std::to_string(dim_) + " components");
        }
        return density_(x);
    }

    Vec sample(RandomSource& source) const { return sampler_(source); }

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const std::vector<Interval>& support() const { return support_; }

private:
    std::string name_;
    int dim_;
    std::function<double(const Vec&)> density_;
    std::function<Vec(RandomSource&)> sampler_;
    std::vector<Interval> support_;
};

inline MultivariateModel standard_normal_2d() {
    return MultivariateModel(
        "N01x2", 2,
        [](const Vec& x) { return normal_pdf(x[0], 0.0, 1.0) * normal_pdf(x[1], 0.0, 1.0); },
        [](RandomSource& source) {
            std::normal_distribution<double> draw(0.0, 1.0);
            const double a = draw(source);
            const double b = draw(source);
            return Vec{a, b};
        },
        {Interval{-8.0, 8.0}, Interval{-8.0, 8.0}});
}

/// Change of variables with the Jacobian determinant as the volume factor:
/// density(y) = base.density(f(y)) * |det J_f(y)|. The support box in the
/// transformed coordinates is supplied by the caller since boxes do not map
/// to boxes in general.
inline MultivariateModel transform_model_multivariate(const MultivariateModel& base,
                                                      const VectorFn& f,
                                                      std::vector<Interval> support) {
    if (f.n_in() != f.n_out()) {
        throw DimensionError("transform_model_multivariate: map must be square");
    }
    if (f.n_in() != base.dim()) {
        throw DimensionError("transform_model_multivariate: map dimension " +
                             std::to_string(f.n_in()) + " vs model dimension " +
                             std::to_string(base.dim()));
    }
    if (!f.has_inverse()) {
        throw CapabilityError("transform_model_multivariate: " + f.name() +
                              " has no registered inverse");
    }
    const VectorFn back = f.inverse();
    return MultivariateModel(
        "Transformed(" + base.name() + "," + f.name() + ")", base.dim(),
        [base, f](const Vec& y) {
            return base.density(f(y)) * std::abs(jacobian_determinant(f, y));
        },
        [base, back](RandomSource& source) { return back(base.sample(source)); },
        std::move(support));
}

// ---------------------------------------------------------------------------
// data ingestion and serialization

/// CSV rows of `value[,aom]`; aom defaults to 1e-6. A leading non-numeric
/// header row is tolerated and skipped.
inline std::vector<Datum> read_data_csv(std::istream& in) {
    std::vector<Datum> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string value_text;
        std::string aom_text;
        std::getline(fields, value_text, ',');
        const bool has_aom = static_cast<bool>(std::getline(fields, aom_text, ','));
        try {
            std::size_t used = 0;
            const double value = std::stod(value_text, &used);
            double aom = 1e-6;
            if (has_aom && !aom_text.empty()) aom = std::stod(aom_text);
            out.emplace_back(value, aom);
        } catch (const std::invalid_argument&) {
            if (row == 1) continue;  // header
            throw ParseError(row, "row " + std::to_string(row) + ": not a number: " + value_text);
        }
    }
    return out;
}

inline std::vector<Datum> read_data_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open data file: " + path);
    return read_data_csv(in);
}

inline nlohmann::json to_json(const ContinuousModel& m) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : m.params()) params[k] = v;
    return nlohmann::json{{"name", m.name()}, {"params", params}, {"transform_name", ""}};
}

inline nlohmann::json to_json(const TransformedModel& m) {
    nlohmann::json j = to_json(m.base());
    j["name"] = m.name();
    j["transform_name"] = m.map().describe();
    return j;
}

}  // namespace fnalg
