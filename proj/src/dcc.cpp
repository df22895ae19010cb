#include "midasvol/dcc.hpp"

#include "compensated_sum.hpp"
#include "midasvol/errors.hpp"
#include "midasvol/garch.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace midasvol {

namespace {

constexpr double kPersistenceMargin = 1e-6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_pair(std::span<const double> xa, std::span<const double> xb) {
    if (xa.size() != xb.size()) {
        throw DataError(fmt::format("residual pair has different lengths ({} vs {})", xa.size(),
                                    xb.size()));
    }
}

void require_aligned(const DatedSeries& a, const DatedSeries& b) {
    if (a.dates() != b.dates()) {
        throw DataError("residual series are not aligned; intersect their calendars first");
    }
}

std::vector<Date> slice_dates(const DatedSeries& s, std::size_t first) {
    return {s.dates().begin() + static_cast<std::ptrdiff_t>(first), s.dates().end()};
}

bool perfectly_correlated(double r) {
    return std::abs(r) > 1.0 - 1e-10;
}

}  // namespace

UnivariateVolFit standardize(const DatedSeries& returns, const opt::MaximizeOptions& options) {
    const GarchFit g = fit_garch(returns.values(), false, options);
    std::vector<double> xi(returns.size());
    for (std::size_t t = 0; t < xi.size(); ++t) {
        xi[t] = (returns.value(t) - g.params.mu) / std::sqrt(g.variance[t]);
    }
    UnivariateVolFit out;
    out.model = "garch11";
    out.variance = DatedSeries(returns.dates(), g.variance, returns.frequency());
    out.residuals = DatedSeries(returns.dates(), std::move(xi), returns.frequency());
    out.estimates = g.estimates;
    out.llh = g.llh;
    out.converged = g.converged;
    return out;
}

UnivariateVolFit standardize(const MixedPanel& panel, const GarchMidasModel& model,
                             const GarchMidasFitOptions& options) {
    const GarchMidasFit f = fit(panel, model, options);
    std::vector<double> variance(f.tau.size());
    std::vector<double> xi(f.tau.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        variance[i] = f.tau[i] * f.g[i];
        xi[i] = (panel.returns[f.first_day + i] - f.params.mu) / std::sqrt(variance[i]);
    }
    UnivariateVolFit out;
    out.model = "garch-midas";
    out.variance = DatedSeries(f.dates, std::move(variance), Frequency::Daily);
    out.residuals = DatedSeries(f.dates, std::move(xi), Frequency::Daily);
    out.estimates = f.estimates;
    out.llh = f.llh;
    out.converged = f.converged;
    return out;
}

DccPath dcc_recursion(std::span<const double> xa, std::span<const double> xb,
                      std::span<const double> target, double a, double b) {
    require_pair(xa, xb);
    if (target.size() != xa.size()) {
        throw std::invalid_argument("correlation target is not aligned with the residuals");
    }
    if (!(a >= 0.0) || !(b >= 0.0) || !(a + b < 1.0)) {
        throw InfeasibleParameters(fmt::format("DCC needs a, b >= 0 and a + b < 1 (a={}, b={})", a, b));
    }
    const std::size_t n = xa.size();
    DccPath p;
    p.q11.resize(n);
    p.q22.resize(n);
    p.q12.resize(n);
    p.rho.resize(n);
    if (n == 0) return p;
    const double w = 1.0 - a - b;
    p.q11[0] = 1.0;
    p.q22[0] = 1.0;
    p.q12[0] = target[0];
    for (std::size_t t = 1; t < n; ++t) {
        p.q11[t] = w + a * xa[t - 1] * xa[t - 1] + b * p.q11[t - 1];
        p.q22[t] = w + a * xb[t - 1] * xb[t - 1] + b * p.q22[t - 1];
        p.q12[t] = w * target[t] + a * xa[t - 1] * xb[t - 1] + b * p.q12[t - 1];
    }
    for (std::size_t t = 0; t < n; ++t) {
        // Cauchy-Schwarz holds for Q_t, so only rounding can push past the unit interval.
        p.rho[t] = std::clamp(p.q12[t] / std::sqrt(p.q11[t] * p.q22[t]), -1.0, 1.0);
    }
    return p;
}

double dcc_log_likelihood(std::span<const double> xa, std::span<const double> xb,
                          std::span<const double> target, double a, double b) {
    DccPath path;
    try {
        path = dcc_recursion(xa, xb, target, a, b);
    } catch (const InfeasibleParameters&) {
        return -std::numeric_limits<double>::infinity();
    }
    detail::CompensatedSum sum;
    for (std::size_t t = 0; t < xa.size(); ++t) {
        const double r = path.rho[t];
        const double det = 1.0 - r * r;
        if (!(det > 0.0)) return -std::numeric_limits<double>::infinity();
        const double x = xa[t];
        const double y = xb[t];
        sum.add(std::log(det) + (x * x + y * y - 2.0 * r * x * y) / det - x * x - y * y);
    }
    const double llh = -0.5 * sum.value();
    return std::isfinite(llh) ? llh : -INFINITY;
}

double product_correlation(std::span<const double> xa, std::span<const double> xb) {
    require_pair(xa, xb);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        sab += xa[i] * xb[i];
        saa += xa[i] * xa[i];
        sbb += xb[i] * xb[i];
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        throw DataError("correlation undefined: a residual window is identically zero");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double sample_correlation(std::span<const double> xa, std::span<const double> xb) {
    require_pair(xa, xb);
    if (xa.size() < 2) throw DataError("correlation needs at least two observations");
    const double n = static_cast<double>(xa.size());
    const double ma = std::accumulate(xa.begin(), xa.end(), 0.0) / n;
    const double mb = std::accumulate(xb.begin(), xb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        sab += (xa[i] - ma) * (xb[i] - mb);
        saa += (xa[i] - ma) * (xa[i] - ma);
        sbb += (xb[i] - mb) * (xb[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        throw DataError("degenerate residuals: zero variance");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

// Fills the shared bookkeeping of a fitted (or fixed) DCC.
void finish(DccFit& fit, std::span<const double> xa, std::span<const double> xb,
            std::span<const double> target) {
    const DccPath path = dcc_recursion(xa, xb, target, fit.a, fit.b);
    fit.rho = path.rho;
    fit.rho_bar.assign(target.begin(), target.end());
    fit.observations = xa.size();
    fit.llh = dcc_log_likelihood(xa, xb, target, fit.a, fit.b);
    fit.aic = aic(fit.llh, fit.parameter_count);
    fit.bic = bic(fit.llh, fit.parameter_count, fit.observations);
}

DccFit degenerate_fit(std::string kind, const DatedSeries& xa, std::size_t first, double r) {
    DccFit fit;
    fit.kind = std::move(kind);
    fit.degenerate = true;
    fit.unconditional = r;
    fit.first_day = first;
    fit.dates = slice_dates(xa, first);
    fit.observations = fit.dates.size();
    fit.rho.assign(fit.observations, r);
    fit.rho_bar.assign(fit.observations, r);
    fit.llh = kNaN;
    fit.aic = kNaN;
    fit.bic = kNaN;
    return fit;
}

}  // namespace

DccFit ccc_fit(const DatedSeries& xa, const DatedSeries& xb) {
    require_aligned(xa, xb);
    const double s = sample_correlation(xa.values(), xb.values());
    if (perfectly_correlated(s)) return degenerate_fit("ccc", xa, 0, s);
    DccFit fit;
    fit.kind = "ccc";
    fit.unconditional = s;
    fit.dates = xa.dates();
    fit.converged = true;
    const std::vector<double> target(xa.size(), s);
    finish(fit, xa.values(), xb.values(), target);
    return fit;
}

DccFit dcc_garch_fit(const DatedSeries& xa, const DatedSeries& xb,
                     const opt::MaximizeOptions& options) {
    require_aligned(xa, xb);
    const double s = sample_correlation(xa.values(), xb.values());
    if (perfectly_correlated(s)) return degenerate_fit("dcc-garch", xa, 0, s);
    const std::vector<double> target(xa.size(), s);
    const std::span<const double> a_vals = xa.values();
    const std::span<const double> b_vals = xb.values();

    const opt::Objective objective = [&](const Eigen::VectorXd& x) {
        return dcc_log_likelihood(a_vals, b_vals, target, x[0], x[1]);
    };
    opt::Bounds bounds(2);
    bounds.add_simplex({0, 1}, {1.0, 1.0}, 1.0 - kPersistenceMargin);
    Eigen::VectorXd start(2);
    start << 0.02, 0.95;
    const opt::Optimum best = opt::maximize(objective, start, bounds, options);

    DccFit fit;
    fit.kind = "dcc-garch";
    fit.a = best.point[0];
    fit.b = best.point[1];
    fit.unconditional = s;
    fit.dates = xa.dates();
    fit.parameter_count = 2;
    fit.converged = best.converged;
    finish(fit, a_vals, b_vals, target);
    const opt::Inference inf = opt::hessian_inference(objective, best.point);
    fit.estimates = make_estimates({"a", "b"}, best.point, inf);
    return fit;
}

std::vector<double> rolling_correlations(std::span<const double> xa, std::span<const double> xb,
                                         const DccMidasSpec& spec) {
    require_pair(xa, xb);
    if (spec.window < 2 || spec.period_length < 1 || spec.span < 1) {
        throw std::invalid_argument("DCC-MIDAS needs window >= 2, span >= 1, period length >= 1");
    }
    const auto len = static_cast<std::size_t>(spec.period_length);
    const auto window = static_cast<std::size_t>(spec.window);
    const std::size_t periods = xa.size() / len;
    std::vector<double> c(periods, kNaN);
    for (std::size_t s = 0; s < periods; ++s) {
        const std::size_t end = (s + 1) * len;  // one past the period's last day
        if (end < window) continue;
        c[s] = product_correlation(xa.subspan(end - window, window), xb.subspan(end - window, window));
    }
    return c;
}

std::size_t dcc_midas_first_day(std::span<const double> c, const DccMidasSpec& spec,
                                std::size_t days) {
    const auto span = static_cast<std::size_t>(spec.span);
    const auto len = static_cast<std::size_t>(spec.period_length);
    auto first_defined = std::find_if(c.begin(), c.end(), [](double v) { return !std::isnan(v); });
    if (first_defined == c.end()) {
        throw DataError("residual sample is shorter than one correlation window");
    }
    const std::size_t period = static_cast<std::size_t>(first_defined - c.begin()) + span;
    const std::size_t day = period * len;
    if (day + 2 > days) {
        throw DataError(fmt::format("DCC-MIDAS needs more than window + span periods of data "
                                    "({} days available, likelihood would start on day {})",
                                    days, day));
    }
    return day;
}

std::vector<double> long_run_correlation(std::span<const double> c, std::span<const double> phi,
                                         const DccMidasSpec& spec, std::size_t first_day,
                                         std::size_t days) {
    const auto len = static_cast<std::size_t>(spec.period_length);
    std::vector<double> out;
    out.reserve(days - first_day);
    std::size_t cached_period = std::numeric_limits<std::size_t>::max();
    double value = 0.0;
    for (std::size_t d = first_day; d < days; ++d) {
        const std::size_t s = d / len;
        if (s != cached_period) {
            value = filter_at(phi, c, s);
            cached_period = s;
        }
        out.push_back(value);
    }
    return out;
}

DccFit dcc_midas_fit(const DatedSeries& xa, const DatedSeries& xb, const DccMidasSpec& spec,
                     const opt::MaximizeOptions& options) {
    require_aligned(xa, xb);
    validate(spec.scheme);
    const std::vector<double> c = rolling_correlations(xa.values(), xb.values(), spec);
    const std::size_t first = dcc_midas_first_day(c, spec, xa.size());
    const std::span<const double> a_vals = std::span<const double>(xa.values()).subspan(first);
    const std::span<const double> b_vals = std::span<const double>(xb.values()).subspan(first);
    const double s = sample_correlation(a_vals, b_vals);
    if (perfectly_correlated(s)) return degenerate_fit("dcc-midas", xa, first, s);

    const int n_weights = free_parameter_count(spec.scheme);
    const bool beta_scheme = std::holds_alternative<BetaWeights>(spec.scheme);
    const bool restricted = beta_scheme && std::get<BetaWeights>(spec.scheme).restricted;
    const auto scheme_at = [&](const Eigen::VectorXd& x) -> WeightScheme {
        if (!beta_scheme) return ExpWeights{x[2]};
        if (restricted) return BetaWeights{1.0, x[2], true};
        return BetaWeights{x[2], x[3], false};
    };
    const auto target_at = [&](const WeightScheme& w) {
        const std::vector<double> phi = weights(w, spec.span);
        return long_run_correlation(c, phi, spec, first, xa.size());
    };
    const opt::Objective objective = [&](const Eigen::VectorXd& x) {
        const WeightScheme w = scheme_at(x);
        try {
            validate(w);
        } catch (const std::invalid_argument&) {
            return -std::numeric_limits<double>::infinity();
        }
        return dcc_log_likelihood(a_vals, b_vals, target_at(w), x[0], x[1]);
    };

    const std::size_t dim = 2 + static_cast<std::size_t>(n_weights);
    opt::Bounds bounds(dim);
    bounds.add_simplex({0, 1}, {1.0, 1.0}, 1.0 - kPersistenceMargin);
    for (std::size_t i = 2; i < dim; ++i) {
        if (beta_scheme) bounds.lower(i, 1.0);
        else bounds.set(i, 0.0, 1.0);
    }
    Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
    start[0] = 0.02;
    start[1] = 0.95;
    if (const auto* bw = std::get_if<BetaWeights>(&spec.scheme)) {
        if (restricted) {
            start[2] = std::max(bw->omega2, 1.0 + 1e-3);
        } else {
            start[2] = std::max(bw->omega1, 1.0 + 1e-3);
            start[3] = std::max(bw->omega2, 1.0 + 1e-3);
        }
    } else {
        start[2] = std::get<ExpWeights>(spec.scheme).omega;
    }
    const opt::Optimum best = opt::maximize(objective, start, bounds, options);

    DccFit fit;
    fit.kind = "dcc-midas";
    fit.a = best.point[0];
    fit.b = best.point[1];
    fit.weighting = scheme_at(best.point);
    fit.midas = spec;
    fit.unconditional = s;
    fit.first_day = first;
    fit.dates = slice_dates(xa, first);
    fit.parameter_count = dim;
    fit.converged = best.converged;
    finish(fit, a_vals, b_vals, target_at(*fit.weighting));

    std::vector<std::string> names{"a", "b"};
    if (!beta_scheme) names.emplace_back("omega");
    else if (restricted) names.emplace_back("omega2");
    else {
        names.emplace_back("omega1");
        names.emplace_back("omega2");
    }
    const opt::Inference inf = opt::hessian_inference(objective, best.point);
    fit.estimates = make_estimates(names, best.point, inf);
    return fit;
}

CorrelationReport correlation_report(const DccFit& fit) {
    CorrelationReport r;
    r.rows.reserve(fit.rho.size());
    for (std::size_t i = 0; i < fit.rho.size(); ++i) {
        r.rows.push_back({fit.dates[i], fit.rho[i], fit.rho_bar[i]});
    }
    if (!fit.rho.empty()) {
        const auto [lo, hi] = std::minmax_element(fit.rho.begin(), fit.rho.end());
        r.min = *lo;
        r.max = *hi;
        r.mean = std::accumulate(fit.rho.begin(), fit.rho.end(), 0.0) /
                 static_cast<double>(fit.rho.size());
    }
    return r;
}

}  // namespace midasvol
