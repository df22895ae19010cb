#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "midasvol/estimate.hpp"
#include "midasvol/midas_weights.hpp"
#include "midasvol/optimizer.hpp"
#include "midasvol/timeseries.hpp"

namespace midasvol {

/// How the MIDAS filter maps to the long-run variance tau.
enum class Link {
    Identity,  ///< tau = m + sum_j theta_j X^j_filtered (realized-volatility form)
    Log        ///< log tau = m + sum_j theta_j X^j_filtered (macro-covariate form)
};

[[nodiscard]] std::string_view to_string(Link link);

struct CovariateSpec {
    std::string name;  ///< must match a panel covariate
    int lag = 12;
    WeightScheme scheme = BetaWeights{1.0, 3.0, true};  ///< kind, restriction and start values
};

struct GarchMidasModel {
    std::vector<CovariateSpec> covariates;
    Link link = Link::Log;
    bool include_asymmetry = true;

    /// Throws std::invalid_argument unless 1 <= covariates <= 2 and every K >= 1.
    void validate() const;
    [[nodiscard]] int max_lag() const;
};

struct GarchMidasParams {
    double mu = 0.0;
    double alpha = 0.05;
    double beta = 0.9;
    double gamma = 0.0;
    double m = 0.0;
    std::vector<double> theta;            ///< one per covariate
    std::vector<WeightScheme> weighting;  ///< one per covariate; same kinds as the model
};

/// First panel day of the likelihood sample: every covariate has a full lag window.
[[nodiscard]] std::size_t first_likelihood_day(const MixedPanel& panel,
                                               const GarchMidasModel& model);

/**
 * Daily long-run component tau for days first_likelihood_day..end.
 * Constant within a low-frequency period of every covariate.
 * @throws InfeasibleParameters when the identity link yields tau <= 0.
 */
[[nodiscard]] std::vector<double> long_run_component(const MixedPanel& panel,
                                                     const GarchMidasModel& model,
                                                     const GarchMidasParams& params);

/**
 * Unit-variance GJR short-run component over the days covered by `tau`
 * (which start at `first_day` of the panel). g starts at 1 and the recursion
 * runs continuously across period boundaries; the previous day's squared
 * innovation is scaled by the current day's tau.
 * @throws InfeasibleParameters outside alpha, beta >= 0, alpha + gamma >= 0,
 *         alpha + beta + gamma/2 < 1.
 */
[[nodiscard]] std::vector<double> short_run_component(const MixedPanel& panel,
                                                      std::span<const double> tau,
                                                      const GarchMidasParams& params,
                                                      std::size_t first_day);

/// Per-day Gaussian log-likelihood terms over the post-burn-in sample; empty if infeasible.
[[nodiscard]] std::vector<double> log_likelihood_terms(const MixedPanel& panel,
                                                       const GarchMidasModel& model,
                                                       const GarchMidasParams& params);

/// Gaussian log-likelihood over the post-burn-in days; -infinity when infeasible.
[[nodiscard]] double log_likelihood(const MixedPanel& panel, const GarchMidasModel& model,
                                    const GarchMidasParams& params);

/// Start used by `fit` when none is supplied.
[[nodiscard]] GarchMidasParams default_start(const MixedPanel& panel,
                                             const GarchMidasModel& model);

struct GarchMidasFitOptions {
    std::optional<GarchMidasParams> start;
    opt::MaximizeOptions optimizer;
    /// Holds theta and the weight parameters at their start values (nested short-run fit).
    bool fix_long_run = false;
    /// Robust sandwich covariance instead of the inverse Hessian.
    bool robust = false;
};

struct GarchMidasFit {
    GarchMidasModel model;
    GarchMidasParams params;
    std::vector<Estimate> estimates;  ///< reporting order: mu, alpha, beta, [gamma], m, theta/omega...
    std::string covariance_type;
    double llh = 0.0;
    double bic = 0.0;
    double variance_ratio = 0.0;  ///< percent
    std::size_t parameter_count = 0;
    std::size_t observations = 0;
    std::size_t first_day = 0;  ///< burn-in: panel days before this are excluded
    std::vector<Date> dates;
    std::vector<double> tau;
    std::vector<double> g;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;

    [[nodiscard]] const Estimate& estimate(std::string_view name) const;
};

/// Maximum-likelihood estimation of a GARCH-MIDAS model on a panel.
[[nodiscard]] GarchMidasFit fit(const MixedPanel& panel, const GarchMidasModel& model,
                                const GarchMidasFitOptions& options = {});

/// The optimiser-space objective used by `fit`, with the matching bounds and start.
struct GarchMidasProblem {
    opt::Objective objective;
    opt::Bounds bounds;
    Eigen::VectorXd start;
};
[[nodiscard]] GarchMidasProblem make_problem(const MixedPanel& panel,
                                             const GarchMidasModel& model,
                                             const GarchMidasParams& start, bool fix_long_run);
/// Optimiser-space vector for a parameter point.
[[nodiscard]] Eigen::VectorXd pack(const GarchMidasModel& model, const GarchMidasParams& params);

/// 100 * Var(log tau) / Var(log(tau g)) over the daily paths.
[[nodiscard]] double variance_ratio(std::span<const double> tau, std::span<const double> g);
[[nodiscard]] double variance_ratio(const GarchMidasFit& fit);

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Stationary Gaussian AR(1) monthly covariate.
struct Ar1Covariate {
    double mean = 0.0;
    double phi = 0.9;
    double sd = 1.0;  ///< innovation standard deviation
};

/// exp of a stationary Gaussian AR(1): positive and right-skewed, like a realized volatility.
struct LogAr1Covariate {
    double log_mean = 0.0;
    double phi = 0.9;
    double sd = 0.2;  ///< innovation standard deviation of the log process

    /// Parameters giving a stationary level with the requested mean and standard deviation.
    [[nodiscard]] static LogAr1Covariate with_moments(double mean, double sd, double phi);
};

/// The realized volatility of the simulated returns themselves (RV model).
struct RealizedVolatilityCovariate {};

struct ConstantCovariate {
    double value = 0.0;
};

using CovariateGenerator =
    std::variant<Ar1Covariate, LogAr1Covariate, RealizedVolatilityCovariate, ConstantCovariate>;

struct SimulationSpec {
    std::size_t periods = 240;
    std::size_t days_per_period = 22;  ///< at most 28; day i of month t is calendar day i
    std::vector<CovariateGenerator> generators;  ///< one per model covariate
    YearMonth first_period = std::chrono::year{2000} / std::chrono::January;
};

/**
 * Simulates a GARCH-MIDAS panel with standard normal innovations.
 * Exogenous covariates are emitted with K months of pre-sample history; the
 * realized-volatility covariate starts from its stationary level and has none.
 * Identical seeds give identical panels.
 */
[[nodiscard]] MixedPanel simulate(const GarchMidasModel& model, const GarchMidasParams& params,
                                  const SimulationSpec& spec, std::uint64_t seed);

}  // namespace midasvol
