#include "midasvol/garch_midas.hpp"

#include "compensated_sum.hpp"
#include "midasvol/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace midasvol {

std::string_view to_string(Link link) {
    return link == Link::Identity ? "identity" : "log";
}

void GarchMidasModel::validate() const {
    if (covariates.empty() || covariates.size() > 2) {
        throw std::invalid_argument("a GARCH-MIDAS model takes one or two covariates");
    }
    for (const auto& c : covariates) {
        if (c.lag < 1) {
            throw std::invalid_argument(fmt::format("covariate '{}': K must be >= 1", c.name));
        }
        midasvol::validate(c.scheme);
    }
}

int GarchMidasModel::max_lag() const {
    int k = 0;
    for (const auto& c : covariates) k = std::max(k, c.lag);
    return k;
}

const Estimate& GarchMidasFit::estimate(std::string_view name) const {
    for (const auto& e : estimates) {
        if (e.name == name) return e;
    }
    throw std::out_of_range(fmt::format("fit has no estimate '{}'", name));
}

namespace {

constexpr double kStationarityMargin = 1e-6;

void check_shapes(const GarchMidasModel& model, const GarchMidasParams& params) {
    if (params.theta.size() != model.covariates.size() ||
        params.weighting.size() != model.covariates.size()) {
        throw std::invalid_argument("parameter vector does not match the model's covariates");
    }
    for (std::size_t j = 0; j < model.covariates.size(); ++j) {
        if (params.weighting[j].index() != model.covariates[j].scheme.index()) {
            throw std::invalid_argument("weight scheme kind differs from the model");
        }
    }
}

std::size_t first_complete_day(const PanelCovariate& cov, int lag) {
    const auto needed = static_cast<std::size_t>(lag);
    auto it = std::find_if(cov.period_of_day.begin(), cov.period_of_day.end(),
                           [&](std::size_t p) { return p >= needed; });
    return static_cast<std::size_t>(it - cov.period_of_day.begin());
}

double variance_of(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / (n - 1.0);
}

}  // namespace

std::size_t first_likelihood_day(const MixedPanel& panel, const GarchMidasModel& model) {
    std::size_t first = 0;
    for (const auto& spec : model.covariates) {
        first = std::max(first, first_complete_day(panel.covariate(spec.name), spec.lag));
    }
    return first;
}

std::vector<double> long_run_component(const MixedPanel& panel, const GarchMidasModel& model,
                                       const GarchMidasParams& params) {
    model.validate();
    check_shapes(model, params);
    const std::size_t first = first_likelihood_day(panel, model);
    if (first >= panel.days()) {
        throw DataError(fmt::format("panel has {} periods; burn-in of {} lags leaves no days",
                                    panel.period_count(), model.max_lag()));
    }
    const std::size_t n = panel.days() - first;
    std::vector<double> level(n, params.m);

    for (std::size_t j = 0; j < model.covariates.size(); ++j) {
        const auto& spec = model.covariates[j];
        const PanelCovariate& cov = panel.covariate(spec.name);
        const std::vector<double> phi = weights(params.weighting[j], spec.lag);
        const std::size_t p_lo = cov.period_of_day[first];
        const std::size_t p_hi = cov.period_of_day.back();
        std::vector<double> filtered(p_hi - p_lo + 1);
        for (std::size_t p = p_lo; p <= p_hi; ++p) {
            filtered[p - p_lo] = filter_at(phi, cov.values, p);
        }
        const double theta = params.theta[j];
        for (std::size_t d = first; d < panel.days(); ++d) {
            level[d - first] += theta * filtered[cov.period_of_day[d] - p_lo];
        }
    }
    if (model.link == Link::Log) {
        for (double& v : level) v = std::exp(v);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(level[i] > 0.0)) {
                throw InfeasibleParameters(
                    fmt::format("identity link gives tau <= 0 on {}",
                                format_date(panel.day_dates[first + i])));
            }
        }
    }
    return level;
}

std::vector<double> short_run_component(const MixedPanel& panel, std::span<const double> tau,
                                        const GarchMidasParams& params, std::size_t first_day) {
    const double a = params.alpha;
    const double b = params.beta;
    const double c = params.gamma;
    if (a < 0.0 || b < 0.0 || a + c < 0.0 || !(a + b + 0.5 * c < 1.0)) {
        throw InfeasibleParameters(
            fmt::format("short-run parameters outside the stationary region "
                        "(alpha={}, beta={}, gamma={})",
                        a, b, c));
    }
    if (first_day + tau.size() != panel.days()) {
        throw std::invalid_argument("tau is not aligned with the panel's likelihood days");
    }
    const double intercept = 1.0 - a - 0.5 * c - b;
    std::vector<double> g(tau.size());
    if (g.empty()) return g;
    g[0] = 1.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double e = panel.returns[first_day + i - 1] - params.mu;
        const double arch = a + (e < 0.0 ? c : 0.0);
        g[i] = intercept + arch * e * e / tau[i] + b * g[i - 1];
    }
    return g;
}

std::vector<double> log_likelihood_terms(const MixedPanel& panel, const GarchMidasModel& model,
                                         const GarchMidasParams& params) {
    std::vector<double> tau;
    std::vector<double> g;
    const std::size_t first = first_likelihood_day(panel, model);
    try {
        tau = long_run_component(panel, model, params);
        g = short_run_component(panel, tau, params, first);
    } catch (const InfeasibleParameters&) {
        return {};
    } catch (const std::invalid_argument&) {
        return {};
    }
    const double log2pi = std::log(2.0 * std::numbers::pi);
    std::vector<double> terms(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double h = g[i] * tau[i];
        const double e = panel.returns[first + i] - params.mu;
        terms[i] = -0.5 * (log2pi + std::log(h) + e * e / h);
        if (!std::isfinite(terms[i])) return {};
    }
    return terms;
}

double log_likelihood(const MixedPanel& panel, const GarchMidasModel& model,
                      const GarchMidasParams& params) {
    const std::vector<double> terms = log_likelihood_terms(panel, model, params);
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    detail::CompensatedSum sum;
    for (double t : terms) sum.add(t);
    const double llh = sum.value();
    return std::isfinite(llh) ? llh : -INFINITY;
}

GarchMidasParams default_start(const MixedPanel& panel, const GarchMidasModel& model) {
    model.validate();
    const std::size_t first = first_likelihood_day(panel, model);
    if (first + 2 > panel.days()) {
        throw DataError("panel too short for the model's burn-in");
    }
    const std::span<const double> sample(panel.returns.data() + first, panel.days() - first);
    const double var = variance_of(sample);
    if (!(var > 0.0)) {
        throw DataError("returns have zero variance");
    }
    GarchMidasParams p;
    p.mu = 0.0;
    p.alpha = 0.05;
    p.beta = 0.9;
    p.gamma = model.include_asymmetry ? 0.05 : 0.0;
    p.m = model.link == Link::Log ? std::log(var) : var;
    for (const auto& c : model.covariates) {
        p.theta.push_back(0.0);
        if (std::holds_alternative<BetaWeights>(c.scheme)) {
            const auto& b = std::get<BetaWeights>(c.scheme);
            p.weighting.emplace_back(BetaWeights{b.restricted ? 1.0 : 1.5, 3.0, b.restricted});
        } else {
            p.weighting.emplace_back(ExpWeights{0.5});
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Optimiser-space packing.
//   0: mu | alpha, alpha+gamma, beta  (or alpha, beta) | m | per covariate: theta, weights...
// ---------------------------------------------------------------------------

namespace {

std::size_t short_run_size(const GarchMidasModel& model) {
    return model.include_asymmetry ? 3 : 2;
}

std::size_t packed_size(const GarchMidasModel& model) {
    std::size_t n = 2 + short_run_size(model);
    for (const auto& c : model.covariates) {
        n += 1 + static_cast<std::size_t>(free_parameter_count(c.scheme));
    }
    return n;
}

GarchMidasParams unpack(const GarchMidasModel& model, const Eigen::VectorXd& x) {
    GarchMidasParams p;
    std::size_t i = 0;
    p.mu = x[i++];
    p.alpha = x[i++];
    if (model.include_asymmetry) {
        p.gamma = x[i++] - p.alpha;
    }
    p.beta = x[i++];
    p.m = x[i++];
    for (const auto& c : model.covariates) {
        p.theta.push_back(x[i++]);
        if (const auto* b = std::get_if<BetaWeights>(&c.scheme)) {
            BetaWeights w{1.0, 1.0, b->restricted};
            if (!b->restricted) w.omega1 = x[i++];
            w.omega2 = x[i++];
            p.weighting.emplace_back(w);
        } else {
            p.weighting.emplace_back(ExpWeights{x[i++]});
        }
    }
    return p;
}

// Reporting order: mu, alpha, beta, [gamma], m, then theta and weights per covariate.
std::vector<std::string> report_names(const GarchMidasModel& model) {
    std::vector<std::string> names{"mu", "alpha", "beta"};
    if (model.include_asymmetry) names.emplace_back("gamma");
    names.emplace_back("m");
    for (const auto& c : model.covariates) {
        names.push_back("theta_" + c.name);
        if (const auto* b = std::get_if<BetaWeights>(&c.scheme)) {
            if (!b->restricted) names.push_back("omega1_" + c.name);
            names.push_back("omega2_" + c.name);
        } else {
            names.push_back("omega_" + c.name);
        }
    }
    return names;
}

Eigen::VectorXd to_report(const GarchMidasModel& model, const GarchMidasParams& p) {
    std::vector<double> v{p.mu, p.alpha, p.beta};
    if (model.include_asymmetry) v.push_back(p.gamma);
    v.push_back(p.m);
    for (std::size_t j = 0; j < model.covariates.size(); ++j) {
        v.push_back(p.theta[j]);
        if (const auto* b = std::get_if<BetaWeights>(&p.weighting[j])) {
            if (!b->restricted) v.push_back(b->omega1);
            v.push_back(b->omega2);
        } else {
            v.push_back(std::get<ExpWeights>(p.weighting[j]).omega);
        }
    }
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GarchMidasParams from_report(const GarchMidasModel& model, const Eigen::VectorXd& r) {
    GarchMidasParams p;
    std::size_t i = 0;
    p.mu = r[i++];
    p.alpha = r[i++];
    p.beta = r[i++];
    p.gamma = model.include_asymmetry ? r[i++] : 0.0;
    p.m = r[i++];
    for (const auto& c : model.covariates) {
        p.theta.push_back(r[i++]);
        if (const auto* b = std::get_if<BetaWeights>(&c.scheme)) {
            BetaWeights w{1.0, 1.0, b->restricted};
            if (!b->restricted) w.omega1 = r[i++];
            w.omega2 = r[i++];
            p.weighting.emplace_back(w);
        } else {
            p.weighting.emplace_back(ExpWeights{r[i++]});
        }
    }
    return p;
}

// Weight parameters may wander outside their domain during finite differencing.
bool weights_admissible(const GarchMidasParams& p) {
    for (const auto& w : p.weighting) {
        try {
            validate(w);
        } catch (const std::invalid_argument&) {
            return false;
        }
    }
    return true;
}

}  // namespace

Eigen::VectorXd pack(const GarchMidasModel& model, const GarchMidasParams& p) {
    check_shapes(model, p);
    Eigen::VectorXd x(static_cast<Eigen::Index>(packed_size(model)));
    Eigen::Index i = 0;
    x[i++] = p.mu;
    x[i++] = p.alpha;
    if (model.include_asymmetry) x[i++] = p.alpha + p.gamma;
    x[i++] = p.beta;
    x[i++] = p.m;
    for (std::size_t j = 0; j < model.covariates.size(); ++j) {
        x[i++] = p.theta[j];
        if (const auto* b = std::get_if<BetaWeights>(&p.weighting[j])) {
            if (!b->restricted) x[i++] = b->omega1;
            x[i++] = b->omega2;
        } else {
            x[i++] = std::get<ExpWeights>(p.weighting[j]).omega;
        }
    }
    return x;
}

GarchMidasProblem make_problem(const MixedPanel& panel, const GarchMidasModel& model,
                               const GarchMidasParams& start, bool fix_long_run) {
    model.validate();
    check_shapes(model, start);
    const std::size_t dim = packed_size(model);
    opt::Bounds bounds(dim);
    if (model.include_asymmetry) {
        bounds.add_simplex({1, 2, 3}, {0.5, 0.5, 1.0}, 1.0 - kStationarityMargin);
    } else {
        bounds.add_simplex({1, 2}, {1.0, 1.0}, 1.0 - kStationarityMargin);
    }
    // Unbounded coordinates are scaled to their natural size: the return sd for mu,
    // the return variance for an identity-link m, and the covariate move that
    // shifts tau by that much for theta.
    const std::size_t first = first_likelihood_day(panel, model);
    const std::span<const double> sample(panel.returns.data() + first, panel.days() - first);
    const double var = std::max(variance_of(sample), 1e-300);
    bounds.scale(0, std::sqrt(var));
    if (model.link == Link::Identity) bounds.scale(1 + short_run_size(model), var);
    std::size_t i = 2 + short_run_size(model);
    for (const auto& c : model.covariates) {
        const double sd = std::sqrt(std::max(variance_of(panel.covariate(c.name).values), 1e-300));
        bounds.scale(i, model.link == Link::Log ? 1.0 / sd : var / sd);
        if (fix_long_run) bounds.fix(i);
        ++i;
        const int free = free_parameter_count(c.scheme);
        for (int k = 0; k < free; ++k, ++i) {
            if (std::holds_alternative<BetaWeights>(c.scheme)) {
                bounds.lower(i, 1.0);
            } else {
                bounds.set(i, 0.0, 1.0);
            }
            if (fix_long_run) bounds.fix(i);
        }
    }
    opt::Objective objective = [&panel, model](const Eigen::VectorXd& x) {
        const GarchMidasParams p = unpack(model, x);
        if (!weights_admissible(p)) return -std::numeric_limits<double>::infinity();
        return log_likelihood(panel, model, p);
    };
    return {std::move(objective), std::move(bounds), pack(model, start)};
}

GarchMidasFit fit(const MixedPanel& panel, const GarchMidasModel& model,
                  const GarchMidasFitOptions& options) {
    model.validate();
    const GarchMidasParams start = options.start ? *options.start : default_start(panel, model);
    GarchMidasProblem problem = make_problem(panel, model, start, options.fix_long_run);
    if (!std::isfinite(problem.objective(problem.start))) {
        throw InfeasibleParameters("log-likelihood is not finite at the start point");
    }

    // Start perturbations relative to the (already scaled) transformed coordinates.
    opt::MaximizeOptions optimizer = options.optimizer;
    if (optimizer.perturbation_scale.empty()) {
        std::vector<double> scale;
        scale.push_back(0.2);
        for (std::size_t k = 0; k < short_run_size(model); ++k) scale.push_back(1.0);
        scale.push_back(model.link == Link::Log ? 1.0 : 0.5);
        for (const auto& c : model.covariates) {
            if (!options.fix_long_run) {
                scale.push_back(model.link == Link::Log ? 0.5 : 0.25);
                for (int k = 0; k < free_parameter_count(c.scheme); ++k) scale.push_back(1.0);
            }
        }
        optimizer.perturbation_scale = std::move(scale);
    }
    const opt::Optimum best = opt::maximize(problem.objective, problem.start, problem.bounds,
                                            optimizer);

    GarchMidasFit out;
    out.model = model;
    out.params = unpack(model, best.point);
    out.llh = best.objective;
    out.converged = best.converged;
    out.iterations = best.iterations;
    out.gradient_norm = best.gradient_norm;
    const std::size_t first = first_likelihood_day(panel, model);
    out.first_day = first;
    out.tau = long_run_component(panel, model, out.params);
    out.g = short_run_component(panel, out.tau, out.params, first);
    out.dates.assign(panel.day_dates.begin() + static_cast<std::ptrdiff_t>(first),
                     panel.day_dates.end());
    out.observations = out.tau.size();

    const std::vector<std::string> names = report_names(model);
    const Eigen::VectorXd report = to_report(model, out.params);
    std::vector<bool> active(names.size(), true);
    if (options.fix_long_run) {
        const std::size_t long_run_begin = model.include_asymmetry ? 5 : 4;
        for (std::size_t k = long_run_begin; k < names.size(); ++k) active[k] = false;
    }
    out.parameter_count = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
    out.bic = bic(out.llh, out.parameter_count, out.observations);
    try {
        out.variance_ratio = variance_ratio(out.tau, out.g);
    } catch (const DataError&) {
        out.variance_ratio = std::numeric_limits<double>::quiet_NaN();
    }

    const auto infer = [&](const std::vector<bool>& mask) {
        if (options.robust) {
            const opt::Contributions contributions = [&](const Eigen::VectorXd& r) {
                const GarchMidasParams p = from_report(model, r);
                if (!weights_admissible(p)) return Eigen::VectorXd();
                std::vector<double> terms = log_likelihood_terms(panel, model, p);
                return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(
                    terms.data(), static_cast<Eigen::Index>(terms.size())));
            };
            return opt::sandwich_inference(contributions, report, mask);
        }
        const opt::Objective in_report = [&](const Eigen::VectorXd& r) {
            const GarchMidasParams p = from_report(model, r);
            if (!weights_admissible(p)) return -std::numeric_limits<double>::infinity();
            return log_likelihood(panel, model, p);
        };
        return opt::hessian_inference(in_report, report, mask);
    };
    opt::Inference inf = infer(active);
    if (!inf.available) {
        // A weight parameter on its bound, or one the likelihood is flat in, leaves the
        // full information matrix singular. Fall back to inference conditional on the
        // fitted weights; those parameters then carry no standard error.
        std::vector<bool> conditional = active;
        bool any_weight = false;
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (names[k].rfind("omega", 0) == 0 && conditional[k]) {
                conditional[k] = false;
                any_weight = true;
            }
        }
        if (any_weight) {
            inf = infer(conditional);
            if (inf.available) inf.covariance_type += "-conditional-on-weights";
        }
    }
    out.covariance_type = inf.covariance_type;
    out.estimates = make_estimates(names, report, inf);
    return out;
}

double variance_ratio(std::span<const double> tau, std::span<const double> g) {
    if (tau.size() != g.size() || tau.size() < 2) {
        throw std::invalid_argument("variance_ratio needs aligned paths of length >= 2");
    }
    std::vector<double> log_tau(tau.size());
    std::vector<double> log_total(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        log_tau[i] = std::log(tau[i]);
        log_total[i] = std::log(tau[i] * g[i]);
    }
    // Exactly constant paths have zero variance; the summed form only gets within rounding.
    const auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    const double denom = constant(log_total) ? 0.0 : variance_of(log_total);
    if (!(denom > 0.0)) {
        throw DataError("variance ratio undefined: total volatility is constant");
    }
    if (constant(log_tau)) return 0.0;
    return 100.0 * variance_of(log_tau) / denom;
}

double variance_ratio(const GarchMidasFit& fit) {
    return variance_ratio(fit.tau, fit.g);
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

LogAr1Covariate LogAr1Covariate::with_moments(double mean, double sd, double phi) {
    if (!(mean > 0.0) || !(sd > 0.0) || !(std::abs(phi) < 1.0)) {
        throw std::invalid_argument("log-AR(1) moments need mean > 0, sd > 0 and |phi| < 1");
    }
    const double var_log = std::log1p(sd * sd / (mean * mean));
    return {std::log(mean) - 0.5 * var_log, phi, std::sqrt(var_log * (1.0 - phi * phi))};
}

namespace {

double link_value(Link link, double level) {
    return link == Link::Log ? std::exp(level) : level;
}

// Long-run level the realized-volatility feedback settles at; seeds its pre-sample lags.
double stationary_tau(const GarchMidasModel& model, const GarchMidasParams& params, std::size_t j,
                      double days) {
    const double slope = params.theta[j] * days;
    if (model.link == Link::Identity) {
        if (!(slope < 1.0)) {
            throw InfeasibleParameters("realized-volatility feedback is explosive (theta * N >= 1)");
        }
        return params.m / (1.0 - slope);
    }
    double tau = std::exp(params.m);
    for (int it = 0; it < 200; ++it) {
        const double next = std::exp(params.m + slope * tau);
        if (!std::isfinite(next)) return std::exp(params.m);
        tau = next;
    }
    return tau;
}

}  // namespace

MixedPanel simulate(const GarchMidasModel& model, const GarchMidasParams& params,
                    const SimulationSpec& spec, std::uint64_t seed) {
    model.validate();
    check_shapes(model, params);
    if (spec.generators.size() != model.covariates.size()) {
        throw std::invalid_argument("simulate needs one covariate generator per covariate");
    }
    if (spec.days_per_period < 1 || spec.days_per_period > 28) {
        throw std::invalid_argument("days_per_period must lie in 1..28");
    }
    if (spec.periods < 1) {
        throw std::invalid_argument("simulate needs at least one period");
    }
    const double a = params.alpha;
    const double b = params.beta;
    const double c = params.gamma;
    if (a < 0.0 || b < 0.0 || a + c < 0.0 || !(a + b + 0.5 * c < 1.0)) {
        throw InfeasibleParameters("short-run parameters outside the stationary region");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n_cov = model.covariates.size();
    const auto days = static_cast<double>(spec.days_per_period);

    // Covariate paths on their own axes: [history | periods].
    std::vector<std::vector<double>> paths(n_cov);
    std::vector<std::size_t> history(n_cov, 0);
    std::vector<bool> endogenous(n_cov, false);
    for (std::size_t j = 0; j < n_cov; ++j) {
        const auto lag = static_cast<std::size_t>(model.covariates[j].lag);
        const auto& gen = spec.generators[j];
        if (const auto* ar = std::get_if<Ar1Covariate>(&gen)) {
            if (!(std::abs(ar->phi) < 1.0) || !(ar->sd >= 0.0)) {
                throw std::invalid_argument("AR(1) covariate needs |phi| < 1 and sd >= 0");
            }
            history[j] = lag;
            double x = ar->mean + ar->sd / std::sqrt(1.0 - ar->phi * ar->phi) * normal(rng);
            for (std::size_t s = 0; s < lag + spec.periods; ++s) {
                paths[j].push_back(x);
                x = ar->mean + ar->phi * (x - ar->mean) + ar->sd * normal(rng);
            }
        } else if (const auto* lar = std::get_if<LogAr1Covariate>(&gen)) {
            if (!(std::abs(lar->phi) < 1.0) || !(lar->sd >= 0.0)) {
                throw std::invalid_argument("log-AR(1) covariate needs |phi| < 1 and sd >= 0");
            }
            history[j] = lag;
            double x = lar->log_mean + lar->sd / std::sqrt(1.0 - lar->phi * lar->phi) * normal(rng);
            for (std::size_t s = 0; s < lag + spec.periods; ++s) {
                paths[j].push_back(std::exp(x));
                x = lar->log_mean + lar->phi * (x - lar->log_mean) + lar->sd * normal(rng);
            }
        } else if (const auto* cst = std::get_if<ConstantCovariate>(&gen)) {
            history[j] = lag;
            paths[j].assign(lag + spec.periods, cst->value);
        } else {
            endogenous[j] = true;
            const double level = days * stationary_tau(model, params, j, days);
            paths[j].assign(lag, level);  // pre-sample lags, not emitted
        }
    }

    std::vector<std::vector<double>> phi(n_cov);
    for (std::size_t j = 0; j < n_cov; ++j) {
        phi[j] = weights(params.weighting[j], model.covariates[j].lag);
    }

    MixedPanel panel;
    panel.day_dates.reserve(spec.periods * spec.days_per_period);
    panel.returns.reserve(spec.periods * spec.days_per_period);
    const double intercept = 1.0 - a - 0.5 * c - b;
    double g = 1.0;
    double prev_eps = 0.0;
    bool first_day = true;
    for (std::size_t t = 0; t < spec.periods; ++t) {
        double level = params.m;
        for (std::size_t j = 0; j < n_cov; ++j) {
            const std::size_t pos = endogenous[j] ? static_cast<std::size_t>(model.covariates[j].lag) + t
                                                  : history[j] + t;
            level += params.theta[j] * filter_at(phi[j], paths[j], pos);
        }
        const double tau = link_value(model.link, level);
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            throw InfeasibleParameters(fmt::format("simulated tau is not positive in period {}", t));
        }
        const YearMonth ym = spec.first_period + std::chrono::months{static_cast<int>(t)};
        panel.periods.push_back(ym);
        panel.period_lengths.push_back(spec.days_per_period);
        double rv = 0.0;
        for (std::size_t i = 0; i < spec.days_per_period; ++i) {
            if (!first_day) {
                const double arch = a + (prev_eps < 0.0 ? c : 0.0);
                g = intercept + arch * prev_eps * prev_eps / tau + b * g;
            }
            first_day = false;
            const double eps = std::sqrt(tau * g) * normal(rng);
            const double r = params.mu + eps;
            prev_eps = eps;
            rv += r * r;
            panel.returns.push_back(r);
            panel.day_dates.push_back(ym / std::chrono::day{static_cast<unsigned>(i + 1)});
            panel.month_index.push_back(t);
        }
        for (std::size_t j = 0; j < n_cov; ++j) {
            if (endogenous[j]) paths[j].push_back(rv);
        }
    }

    for (std::size_t j = 0; j < n_cov; ++j) {
        PanelCovariate cov;
        cov.name = model.covariates[j].name;
        cov.frequency = Frequency::Monthly;
        cov.lag = model.covariates[j].lag;
        if (endogenous[j]) {
            cov.values.assign(paths[j].begin() + cov.lag, paths[j].end());
            cov.history = 0;
        } else {
            cov.values = paths[j];
            cov.history = history[j];
        }
        cov.period_of_day.reserve(panel.days());
        for (std::size_t m : panel.month_index) cov.period_of_day.push_back(cov.history + m);
        panel.covariates.push_back(std::move(cov));
    }
    panel.check_invariants();
    return panel;
}

}  // namespace midasvol
