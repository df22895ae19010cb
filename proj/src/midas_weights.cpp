#include "midasvol/midas_weights.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace midasvol {

void validate(const WeightScheme& scheme) {
    if (const auto* beta = std::get_if<BetaWeights>(&scheme)) {
        if (!(beta->omega1 >= 1.0) || !(beta->omega2 >= 1.0)) {
            throw std::invalid_argument(fmt::format(
                "beta weights need omega1 >= 1 and omega2 >= 1 (got {}, {})", beta->omega1,
                beta->omega2));
        }
        if (beta->restricted && beta->omega1 != 1.0) {
            throw std::invalid_argument("restricted beta weights fix omega1 = 1");
        }
        if (!std::isfinite(beta->omega2) || !std::isfinite(beta->omega1)) {
            throw std::invalid_argument("beta weight parameters must be finite");
        }
    } else {
        const double w = std::get<ExpWeights>(scheme).omega;
        if (!(w > 0.0 && w < 1.0)) {
            throw std::invalid_argument(
                fmt::format("exponential weights need 0 < omega < 1 (got {})", w));
        }
    }
}

std::vector<double> weights(const WeightScheme& scheme, int lags) {
    if (lags < 1) {
        throw std::invalid_argument("lag count must be >= 1");
    }
    validate(scheme);
    std::vector<double> phi(static_cast<std::size_t>(lags));
    if (const auto* beta = std::get_if<BetaWeights>(&scheme)) {
        // Work in logs so large omega2 cannot underflow every weight at once.
        const double denom = static_cast<double>(lags) + 1.0;
        double max_log = -INFINITY;
        for (int k = 1; k <= lags; ++k) {
            const double x = k / denom;
            const double lw =
                (beta->omega1 - 1.0) * std::log(x) + (beta->omega2 - 1.0) * std::log1p(-x);
            phi[k - 1] = lw;
            max_log = std::max(max_log, lw);
        }
        for (double& v : phi) v = std::exp(v - max_log);
    } else {
        const double w = std::get<ExpWeights>(scheme).omega;
        double p = 1.0;
        for (int k = 1; k <= lags; ++k) {
            p *= w;
            phi[k - 1] = p;
        }
        // Rescale before normalising; omega^K can underflow for small omega.
        const double first = phi[0];
        for (double& v : phi) v /= first;
    }
    double sum = 0.0;
    for (double v : phi) sum += v;
    for (double& v : phi) v /= sum;
    return phi;
}

double filter_at(std::span<const double> phi, std::span<const double> history, std::size_t t) {
    if (t < phi.size() || t > history.size()) {
        throw std::out_of_range("filter_at: incomplete lag window");
    }
    double acc = 0.0;
    for (std::size_t k = 1; k <= phi.size(); ++k) {
        acc += phi[k - 1] * history[t - k];
    }
    return acc;
}

int free_parameter_count(const WeightScheme& scheme) {
    if (const auto* beta = std::get_if<BetaWeights>(&scheme)) {
        return beta->restricted ? 1 : 2;
    }
    return 1;
}

std::string describe(const WeightScheme& scheme) {
    if (const auto* beta = std::get_if<BetaWeights>(&scheme)) {
        return beta->restricted ? "beta-restricted" : "beta";
    }
    return "exp";
}

}  // namespace midasvol
