#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "midasvol/estimate.hpp"
#include "midasvol/garch_midas.hpp"
#include "midasvol/midas_weights.hpp"
#include "midasvol/optimizer.hpp"
#include "midasvol/timeseries.hpp"

namespace midasvol {

/// First-step volatility fit of one return series.
struct UnivariateVolFit {
    std::string model;  ///< "garch11" or "garch-midas"
    DatedSeries variance;
    DatedSeries residuals;  ///< xi_t = (r_t - mu) / sqrt(variance_t)
    std::vector<Estimate> estimates;
    double llh = 0.0;
    bool converged = false;
};

/// GARCH(1,1) first step.
[[nodiscard]] UnivariateVolFit standardize(const DatedSeries& returns,
                                           const opt::MaximizeOptions& options = {});
/// GARCH-MIDAS first step; residuals cover the post-burn-in days only.
[[nodiscard]] UnivariateVolFit standardize(const MixedPanel& panel, const GarchMidasModel& model,
                                           const GarchMidasFitOptions& options = {});

/// Daily correlation recursion of a bivariate DCC model.
struct DccPath {
    std::vector<double> q11;
    std::vector<double> q22;
    std::vector<double> q12;
    std::vector<double> rho;
};

/**
 * Q_t = (1 - a - b) T_t + a xi_{t-1} xi_{t-1}' + b Q_{t-1} with unit-diagonal
 * target T_t whose off-diagonal is target[t], and Q_1 = T_1.
 * Throws InfeasibleParameters unless a, b >= 0 and a + b < 1.
 */
[[nodiscard]] DccPath dcc_recursion(std::span<const double> xa, std::span<const double> xb,
                                    std::span<const double> target, double a, double b);

/**
 * Second-step (correlation) Gaussian log-likelihood
 * -1/2 sum [ln(1 - rho^2) + (xa^2 + xb^2 - 2 rho xa xb)/(1 - rho^2) - xa^2 - xb^2].
 * -infinity for infeasible (a, b) or |rho| = 1.
 */
[[nodiscard]] double dcc_log_likelihood(std::span<const double> xa, std::span<const double> xb,
                                        std::span<const double> target, double a, double b);

struct DccMidasSpec {
    int window = 22;         ///< N_c, residuals per rolling correlation
    int span = 24;           ///< K_c, lagged correlations in the long-run filter
    int period_length = 22;  ///< days between updates of the rolling correlation
    WeightScheme scheme = BetaWeights{1.0, 3.0, true};
};

struct DccFit {
    std::string kind;  ///< "ccc", "dcc-garch" or "dcc-midas"
    double a = 0.0;
    double b = 0.0;
    std::optional<WeightScheme> weighting;  ///< DCC-MIDAS only
    std::optional<DccMidasSpec> midas;
    double unconditional = 0.0;  ///< sample correlation of the residuals
    std::vector<Date> dates;     ///< likelihood days
    std::vector<double> rho;
    std::vector<double> rho_bar;  ///< target path: constant S, or the MIDAS long-run correlation
    std::vector<Estimate> estimates;
    double llh = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t parameter_count = 0;
    std::size_t observations = 0;
    std::size_t first_day = 0;  ///< index into the residual pair
    bool converged = false;
    bool degenerate = false;  ///< perfectly correlated residuals; nothing estimated
};

/// Sum xa xb / sqrt(sum xa^2 sum xb^2) over the pair.
[[nodiscard]] double product_correlation(std::span<const double> xa, std::span<const double> xb);

/// Sample (Pearson) correlation.
[[nodiscard]] double sample_correlation(std::span<const double> xa, std::span<const double> xb);

/// DCC-GARCH with correlation targeting at the sample correlation.
[[nodiscard]] DccFit dcc_garch_fit(const DatedSeries& xa, const DatedSeries& xb,
                                   const opt::MaximizeOptions& options = {});

/// Constant conditional correlation: DCC with a = b = 0.
[[nodiscard]] DccFit ccc_fit(const DatedSeries& xa, const DatedSeries& xb);

/**
 * Rolling correlations c_s, one per period s of `period_length` days, each over
 * the last `window` residuals ending with the period's final day. Periods
 * whose window would start before day 0 hold NaN; a trailing partial period is
 * omitted.
 */
[[nodiscard]] std::vector<double> rolling_correlations(std::span<const double> xa,
                                                       std::span<const double> xb,
                                                       const DccMidasSpec& spec);

/// First day whose period has K_c defined prior correlations.
[[nodiscard]] std::size_t dcc_midas_first_day(std::span<const double> c, const DccMidasSpec& spec,
                                              std::size_t days);

/**
 * Daily long-run correlation from day `first_day` on:
 * rho_bar = sum_{l=1..K_c} phi_l c_{s-l}, with s the day's period.
 */
[[nodiscard]] std::vector<double> long_run_correlation(std::span<const double> c,
                                                       std::span<const double> phi,
                                                       const DccMidasSpec& spec,
                                                       std::size_t first_day, std::size_t days);

/// DCC-MIDAS: the recursion reverts to the MIDAS-filtered historical correlation.
[[nodiscard]] DccFit dcc_midas_fit(const DatedSeries& xa, const DatedSeries& xb,
                                   const DccMidasSpec& spec = {},
                                   const opt::MaximizeOptions& options = {});

struct CorrelationRow {
    Date date;
    double rho = 0.0;
    double rho_bar = 0.0;
};

struct CorrelationReport {
    std::vector<CorrelationRow> rows;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

[[nodiscard]] CorrelationReport correlation_report(const DccFit& fit);

}  // namespace midasvol
