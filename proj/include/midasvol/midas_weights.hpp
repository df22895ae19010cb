#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace midasvol {

/// Beta lag polynomial. `restricted` pins omega1 at 1 (monotone decay for omega2 > 1).
struct BetaWeights {
    double omega1 = 1.0;
    double omega2 = 1.0;
    bool restricted = true;
};

/// Exponentially weighted lags, phi_k proportional to omega^k.
struct ExpWeights {
    double omega = 0.5;
};

using WeightScheme = std::variant<BetaWeights, ExpWeights>;

/// Throws std::invalid_argument unless omega1, omega2 >= 1 (beta) or 0 < omega < 1 (exp).
void validate(const WeightScheme& scheme);

/**
 * Lag weights phi_1..phi_K for a MIDAS filter.
 *
 * The beta kernel is (x)^(omega1-1) (1-x)^(omega2-1) evaluated at x = k/(K+1)
 * and normalised to sum to one; the shifted grid keeps phi_K > 0 when
 * omega2 > 1. Index 0 of the result is the weight of lag 1.
 */
[[nodiscard]] std::vector<double> weights(const WeightScheme& scheme, int lags);

/// Sum_{k=1..K} phi_k * history[t - k]; `history` must hold at least K values before t.
[[nodiscard]] double filter_at(std::span<const double> phi, std::span<const double> history,
                               std::size_t t);

/// Number of free parameters the scheme contributes to an estimation.
[[nodiscard]] int free_parameter_count(const WeightScheme& scheme);

[[nodiscard]] std::string describe(const WeightScheme& scheme);

}  // namespace midasvol
