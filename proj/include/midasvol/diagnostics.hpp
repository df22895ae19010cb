#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "midasvol/timeseries.hpp"

namespace midasvol {

struct SummaryStats {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0;               ///< sample (n-1) standard deviation
    double skewness = 0.0;         ///< NaN for a constant series
    double excess_kurtosis = 0.0;  ///< normal -> 0; NaN for a constant series
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<int> lags;
    std::map<std::string, double> critical_values;  ///< "1%", "5%", "10%"
};

/// Throws DataError when n < 2.
[[nodiscard]] SummaryStats describe(std::span<const double> x);
[[nodiscard]] SummaryStats describe(const DatedSeries& s);

// The tests below throw DataError for too-short or constant input.

/// n (S^2/6 + K^2/24) against chi-squared(2).
[[nodiscard]] TestResult jarque_bera(std::span<const double> x);

/// Kolmogorov-Smirnov against a normal with the sample mean and sd; asymptotic p-value.
[[nodiscard]] TestResult ks_normal(std::span<const double> x);

/// n (n+2) sum_k rho_k^2 / (n-k) against chi-squared(lags).
[[nodiscard]] TestResult ljung_box(std::span<const double> x, int lags = 20);

/// Engle's test: n R^2 of e_t^2 on its own `lags` lags, against chi-squared(lags).
[[nodiscard]] TestResult arch_lm(std::span<const double> x, int lags = 20);

enum class AdfRegression {
    None,            ///< no deterministic terms
    Constant,        ///< intercept
    ConstantTrend    ///< intercept and linear trend
};

[[nodiscard]] std::string_view to_string(AdfRegression r);
[[nodiscard]] AdfRegression adf_regression_from_string(std::string_view text);

/**
 * Augmented Dickey-Fuller test. The lag order minimises BIC over
 * 0..floor(12 (n/100)^(1/4)) on a common sample; the statistic is the
 * t-ratio on y_{t-1} of the refit. p-values and critical values follow
 * MacKinnon's response surfaces. Throws DataError for n < 25.
 */
[[nodiscard]] TestResult adf_test(std::span<const double> x,
                                  AdfRegression regression = AdfRegression::Constant);

/// MacKinnon (2010) critical value for a single-series Dickey-Fuller test with `nobs` observations.
[[nodiscard]] double adf_critical_value(AdfRegression regression, double level, std::size_t nobs);
/// MacKinnon (1994) approximate p-value of a Dickey-Fuller statistic.
[[nodiscard]] double adf_p_value(AdfRegression regression, double statistic);

/// Rank correlation with average ranks for ties. Throws on length mismatch or n < 3.
[[nodiscard]] double spearman(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double spearman(const DatedSeries& a, const DatedSeries& b);

struct ArFit {
    int order = 0;
    std::vector<double> coefficients;  ///< intercept, then phi_1..phi_p
    std::vector<double> residuals;     ///< for t = p+1..n
};

/// Least-squares AR(p) with intercept. Throws DataError for a singular design.
[[nodiscard]] ArFit fit_ar(std::span<const double> x, int order);

/// AR order in 1..max_order minimising BIC on a common sample.
[[nodiscard]] int select_ar_order(std::span<const double> x, int max_order = 4);

/**
 * Squared AR(p) residuals as a volatility proxy, dated t = p+1..n.
 * Without an order, p is chosen by BIC in 1..4. p = 0 gives squared deviations from the mean.
 */
[[nodiscard]] DatedSeries ar_residual_volatility(const DatedSeries& s,
                                                 std::optional<int> order = std::nullopt);

}  // namespace midasvol
