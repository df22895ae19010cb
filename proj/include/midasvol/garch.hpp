#pragma once

#include <span>
#include <vector>

#include "midasvol/estimate.hpp"
#include "midasvol/optimizer.hpp"

namespace midasvol {

/// GJR-GARCH(1,1): h_t = omega + (alpha + gamma 1{e_{t-1} < 0}) e_{t-1}^2 + beta h_{t-1}.
struct GarchParams {
    double mu = 0.0;
    double omega = 0.0;
    double alpha = 0.05;
    double beta = 0.9;
    double gamma = 0.0;

    [[nodiscard]] double persistence() const { return alpha + beta + 0.5 * gamma; }
    /// omega / (1 - alpha - beta - gamma/2); also the variance of the first observation.
    [[nodiscard]] double unconditional_variance() const { return omega / (1.0 - persistence()); }
};

/// Conditional variances; throws InfeasibleParameters outside the stationary region.
[[nodiscard]] std::vector<double> garch_variance(std::span<const double> returns,
                                                 const GarchParams& params);

/// Gaussian log-likelihood; -infinity for infeasible parameters.
[[nodiscard]] double garch_log_likelihood(std::span<const double> returns,
                                          const GarchParams& params);

struct GarchFit {
    GarchParams params;
    bool asymmetric = false;
    std::vector<Estimate> estimates;
    double llh = 0.0;
    double bic = 0.0;
    std::size_t observations = 0;
    std::vector<double> variance;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
};

/// Maximum-likelihood GARCH(1,1) (or GJR when `asymmetric`) with a constant mean.
[[nodiscard]] GarchFit fit_garch(std::span<const double> returns, bool asymmetric,
                                 const opt::MaximizeOptions& options = {});

}  // namespace midasvol
