#include "midasvol/garch.hpp"

#include "compensated_sum.hpp"
#include "midasvol/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace midasvol {

std::vector<Estimate> make_estimates(const std::vector<std::string>& names,
                                     const Eigen::VectorXd& values,
                                     const opt::Inference& inference) {
    std::vector<Estimate> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        Estimate e{names[i], values[static_cast<Eigen::Index>(i)], std::nullopt, std::nullopt};
        if (i < inference.std_errors.size()) {
            e.std_error = inference.std_errors[i];
            e.p_value = inference.p_values[i];
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<double> garch_variance(std::span<const double> returns, const GarchParams& p) {
    if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0 || p.alpha + p.gamma < 0.0 ||
        !(p.persistence() < 1.0)) {
        throw InfeasibleParameters("GARCH parameters outside the stationary region");
    }
    std::vector<double> h(returns.size());
    if (h.empty()) return h;
    h[0] = p.unconditional_variance();
    for (std::size_t t = 1; t < returns.size(); ++t) {
        const double e = returns[t - 1] - p.mu;
        const double arch = p.alpha + (e < 0.0 ? p.gamma : 0.0);
        h[t] = p.omega + arch * e * e + p.beta * h[t - 1];
    }
    return h;
}

double garch_log_likelihood(std::span<const double> returns, const GarchParams& params) {
    std::vector<double> h;
    try {
        h = garch_variance(returns, params);
    } catch (const InfeasibleParameters&) {
        return -INFINITY;
    }
    const double log2pi = std::log(2.0 * std::numbers::pi);
    detail::CompensatedSum sum;
    for (std::size_t t = 0; t < returns.size(); ++t) {
        const double e = returns[t] - params.mu;
        sum.add(log2pi + std::log(h[t]) + e * e / h[t]);
    }
    const double llh = -0.5 * sum.value();
    return std::isfinite(llh) ? llh : -INFINITY;
}

namespace {

// Optimiser coordinates: mu, omega, alpha, beta[, alpha + gamma].
GarchParams unpack(const Eigen::VectorXd& x, bool asymmetric) {
    GarchParams p;
    p.mu = x[0];
    p.omega = x[1];
    p.alpha = x[2];
    p.beta = x[3];
    p.gamma = asymmetric ? x[4] - x[2] : 0.0;
    return p;
}

}  // namespace

GarchFit fit_garch(std::span<const double> returns, bool asymmetric,
                   const opt::MaximizeOptions& options) {
    if (returns.size() < 10) {
        throw DataError("GARCH fit needs at least 10 observations");
    }
    const double n = static_cast<double>(returns.size());
    const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
    double var = 0.0;
    for (double r : returns) var += (r - mean) * (r - mean);
    var /= n;
    if (!(var > 0.0)) {
        throw DataError("GARCH fit on a constant series");
    }

    const std::size_t dim = asymmetric ? 5 : 4;
    Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
    const double alpha0 = 0.05;
    const double gamma0 = asymmetric ? 0.05 : 0.0;
    const double beta0 = 0.9;
    start[0] = mean;
    start[1] = var * (1.0 - alpha0 - beta0 - 0.5 * gamma0);
    start[2] = alpha0;
    start[3] = beta0;
    if (asymmetric) start[4] = alpha0 + gamma0;

    opt::Bounds bounds(dim);
    bounds.lower(1, 0.0);
    bounds.scale(0, std::sqrt(var));
    if (asymmetric) {
        bounds.add_simplex({2, 4, 3}, {0.5, 0.5, 1.0}, 1.0 - 1e-6);
    } else {
        bounds.add_simplex({2, 3}, {1.0, 1.0}, 1.0 - 1e-6);
    }
    const opt::Objective objective = [&](const Eigen::VectorXd& x) {
        return garch_log_likelihood(returns, unpack(x, asymmetric));
    };
    const opt::Optimum best = opt::maximize(objective, start, bounds, options);

    GarchFit fit;
    fit.asymmetric = asymmetric;
    fit.params = unpack(best.point, asymmetric);
    fit.llh = best.objective;
    fit.observations = returns.size();
    fit.bic = bic(fit.llh, dim, fit.observations);
    fit.variance = garch_variance(returns, fit.params);
    fit.converged = best.converged;
    fit.iterations = best.iterations;
    fit.gradient_norm = best.gradient_norm;

    // Inference in the reporting parametrisation (mu, omega, alpha, beta[, gamma]),
    // differentiated in units of the sample scale so that the Hessian steps fit omega.
    Eigen::VectorXd unit = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
    unit[0] = std::sqrt(var);
    unit[1] = var;
    Eigen::VectorXd report(static_cast<Eigen::Index>(dim));
    report << fit.params.mu, fit.params.omega, fit.params.alpha, fit.params.beta;
    if (asymmetric) report[4] = fit.params.gamma;
    const opt::Objective in_report = [&](const Eigen::VectorXd& y) {
        const Eigen::VectorXd r = y.cwiseProduct(unit);
        GarchParams p{r[0], r[1], r[2], r[3], asymmetric ? r[4] : 0.0};
        return garch_log_likelihood(returns, p);
    };
    opt::Inference inf = opt::hessian_inference(in_report, report.cwiseQuotient(unit));
    if (inf.available) {
        inf.covariance = unit.asDiagonal() * inf.covariance * unit.asDiagonal();
        for (Eigen::Index i = 0; i < report.size(); ++i) {
            auto& se = inf.std_errors[static_cast<std::size_t>(i)];
            if (se) *se *= unit[i];
        }
    }
    std::vector<std::string> names{"mu", "omega", "alpha", "beta"};
    if (asymmetric) names.emplace_back("gamma");
    fit.estimates = make_estimates(names, report, inf);
    return fit;
}

}  // namespace midasvol
