#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "midasvol/optimizer.hpp"

namespace midasvol {

/// A named point estimate with its (optional) asymptotic inference.
struct Estimate {
    std::string name;
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<double> p_value;
};

/// Pairs names with values and the matching entries of an Inference.
[[nodiscard]] std::vector<Estimate> make_estimates(const std::vector<std::string>& names,
                                                   const Eigen::VectorXd& values,
                                                   const opt::Inference& inference);

/// k ln(n) - 2 llh.
[[nodiscard]] inline double bic(double llh, std::size_t parameters, std::size_t observations) {
    return static_cast<double>(parameters) * std::log(static_cast<double>(observations)) -
           2.0 * llh;
}

/// 2k - 2 llh.
[[nodiscard]] inline double aic(double llh, std::size_t parameters) {
    return 2.0 * static_cast<double>(parameters) - 2.0 * llh;
}

}  // namespace midasvol
