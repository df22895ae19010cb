#include "midasvol/diagnostics.hpp"

#include "midasvol/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace midasvol {

namespace {

double chi2_sf(double x, int df) {
    if (!(x > 0.0)) return 1.0;
    boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Central moments m2, m3, m4 (divisor n).
std::array<double, 3> central_moments(std::span<const double> x, double mean) {
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(x.size());
    return {m2 / n, m3 / n, m4 / n};
}

void require_length(std::span<const double> x, std::size_t minimum, std::string_view what) {
    if (x.size() < minimum) {
        throw DataError(fmt::format("{} needs at least {} observations, got {}", what, minimum,
                                    x.size()));
    }
}

void require_variation(std::span<const double> x, std::string_view what) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) {
        throw DataError(fmt::format("{}: series is constant (zero variance)", what));
    }
}

struct OlsResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
    double ssr = 0.0;
    Eigen::VectorXd std_errors;
};

OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool want_se) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) {
        throw DataError("singular regression design");
    }
    OlsResult out;
    out.beta = qr.solve(y);
    out.residuals = y - X * out.beta;
    out.ssr = out.residuals.squaredNorm();
    if (want_se) {
        const double dof = static_cast<double>(X.rows() - X.cols());
        const double s2 = out.ssr / dof;
        const Eigen::MatrixXd xtx_inv =
            (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
        out.std_errors = (s2 * xtx_inv.diagonal()).cwiseSqrt();
    }
    return out;
}

double gaussian_bic(double ssr, Eigen::Index nobs, Eigen::Index k) {
    const double n = static_cast<double>(nobs);
    const double llf = -0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(ssr / n) + 1.0);
    return -2.0 * llf + static_cast<double>(k) * std::log(n);
}

}  // namespace

SummaryStats describe(std::span<const double> x) {
    require_length(x, 2, "describe");
    SummaryStats s;
    s.n = x.size();
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    s.min = *lo;
    s.max = *hi;
    s.mean = mean_of(x);
    const auto [m2, m3, m4] = central_moments(x, s.mean);
    const double n = static_cast<double>(x.size());
    s.sd = std::sqrt(m2 * n / (n - 1.0));
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

SummaryStats describe(const DatedSeries& s) {
    return describe(s.values());
}

TestResult jarque_bera(std::span<const double> x) {
    require_length(x, 3, "Jarque-Bera");
    require_variation(x, "Jarque-Bera");
    const auto [m2, m3, m4] = central_moments(x, mean_of(x));
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2) - 3.0;
    const double n = static_cast<double>(x.size());
    TestResult r;
    r.statistic = n * (skew * skew / 6.0 + kurt * kurt / 24.0);
    r.p_value = chi2_sf(r.statistic, 2);
    return r;
}

namespace {

// P(K > t) for the limiting Kolmogorov distribution.
double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.0) {
        // Small-t series for the CDF converges fast here.
        double sum = 0.0;
        const double pi2 = std::numbers::pi * std::numbers::pi;
        for (int k = 1; k <= 50; ++k) {
            const double j = 2.0 * k - 1.0;
            sum += std::exp(-j * j * pi2 / (8.0 * t * t));
        }
        const double cdf = std::sqrt(2.0 * std::numbers::pi) / t * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

TestResult ks_normal(std::span<const double> x) {
    require_length(x, 3, "Kolmogorov-Smirnov");
    require_variation(x, "Kolmogorov-Smirnov");
    const SummaryStats s = describe(x);
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf((sorted[i] - s.mean) / s.sd);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    TestResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf(std::sqrt(n) * d);
    return r;
}

TestResult ljung_box(std::span<const double> x, int lags) {
    if (lags < 1) throw std::invalid_argument("Ljung-Box needs lags >= 1");
    require_length(x, static_cast<std::size_t>(lags) + 2, "Ljung-Box");
    require_variation(x, "Ljung-Box");
    const double mean = mean_of(x);
    const std::size_t n = x.size();
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        double num = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
            num += (x[t] - mean) * (x[t - static_cast<std::size_t>(k)] - mean);
        }
        const double rho = num / denom;
        q += rho * rho / static_cast<double>(n - static_cast<std::size_t>(k));
    }
    const double nd = static_cast<double>(n);
    TestResult r;
    r.statistic = nd * (nd + 2.0) * q;
    r.p_value = chi2_sf(r.statistic, lags);
    r.lags = lags;
    return r;
}

TestResult arch_lm(std::span<const double> x, int lags) {
    if (lags < 1) throw std::invalid_argument("ARCH-LM needs lags >= 1");
    require_length(x, static_cast<std::size_t>(lags) + 3, "ARCH-LM");
    require_variation(x, "ARCH-LM");
    const double mean = mean_of(x);
    std::vector<double> e2(x.size());
    std::transform(x.begin(), x.end(), e2.begin(), [&](double v) { return (v - mean) * (v - mean); });
    const auto p = static_cast<Eigen::Index>(lags);
    const auto nobs = static_cast<Eigen::Index>(e2.size()) - p;
    Eigen::MatrixXd X(nobs, p + 1);
    Eigen::VectorXd y(nobs);
    for (Eigen::Index t = 0; t < nobs; ++t) {
        y[t] = e2[static_cast<std::size_t>(t + p)];
        X(t, 0) = 1.0;
        for (Eigen::Index k = 1; k <= p; ++k) X(t, k) = e2[static_cast<std::size_t>(t + p - k)];
    }
    const OlsResult fit = ols(X, y, false);
    const double tss = (y.array() - y.mean()).square().sum();
    TestResult r;
    r.statistic = static_cast<double>(nobs) * (1.0 - fit.ssr / tss);
    r.p_value = chi2_sf(r.statistic, lags);
    r.lags = lags;
    return r;
}

// ---------------------------------------------------------------------------
// Augmented Dickey-Fuller
// ---------------------------------------------------------------------------

std::string_view to_string(AdfRegression r) {
    switch (r) {
        case AdfRegression::None: return "none";
        case AdfRegression::Constant: return "constant";
        case AdfRegression::ConstantTrend: return "constant-trend";
    }
    return "constant";
}

AdfRegression adf_regression_from_string(std::string_view text) {
    if (text == "none") return AdfRegression::None;
    if (text == "constant") return AdfRegression::Constant;
    if (text == "constant-trend") return AdfRegression::ConstantTrend;
    throw ConfigError(fmt::format("unknown ADF regression '{}' (none | constant | constant-trend)",
                                  text));
}

namespace {

// MacKinnon (2010), one series: b0 + b1/T + b2/T^2 + b3/T^3 for 1%, 5%, 10%.
constexpr std::array<std::array<double, 4>, 3> kCritNone{{
    {-2.56574, -2.2358, -3.627, 0.0},
    {-1.94100, -0.2686, -3.365, 31.223},
    {-1.61682, 0.2656, -2.714, 25.364},
}};
constexpr std::array<std::array<double, 4>, 3> kCritConstant{{
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
}};
constexpr std::array<std::array<double, 4>, 3> kCritTrend{{
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
}};

struct PValueSurface {
    double tau_max;
    double tau_min;
    double tau_star;
    std::array<double, 3> small;
    std::array<double, 4> large;
};

// MacKinnon (1994) approximate distribution, one series.
const PValueSurface& surface(AdfRegression r) {
    static const PValueSurface none{std::numeric_limits<double>::infinity(), -19.04, -1.04,
                                    {0.6344, 1.2378, 3.2496e-2},
                                    {0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2}};
    static const PValueSurface constant{2.74, -18.83, -1.61,
                                        {2.1659, 1.4412, 3.8269e-2},
                                        {1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2}};
    static const PValueSurface trend{0.7, -16.18, -2.89,
                                     {3.2512, 1.6047, 4.9588e-2},
                                     {2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2}};
    switch (r) {
        case AdfRegression::None: return none;
        case AdfRegression::Constant: return constant;
        case AdfRegression::ConstantTrend: return trend;
    }
    return constant;
}

int deterministic_terms(AdfRegression r) {
    switch (r) {
        case AdfRegression::None: return 0;
        case AdfRegression::Constant: return 1;
        case AdfRegression::ConstantTrend: return 2;
    }
    return 1;
}

// Design for lag order p on the last nobs differences: [deterministics | y_{t-1} | dy lags].
void adf_design(std::span<const double> y, std::span<const double> dy, int p, Eigen::Index nobs,
                AdfRegression regression, Eigen::MatrixXd& X, Eigen::VectorXd& target) {
    const int nd = deterministic_terms(regression);
    const auto m = static_cast<Eigen::Index>(dy.size());
    X.resize(nobs, nd + 1 + p);
    target.resize(nobs);
    for (Eigen::Index i = 0; i < nobs; ++i) {
        const Eigen::Index t = m - nobs + i;  // index into dy
        target[i] = dy[static_cast<std::size_t>(t)];
        int c = 0;
        if (nd >= 1) X(i, c++) = 1.0;
        if (nd >= 2) X(i, c++) = static_cast<double>(i + 1);
        X(i, c++) = y[static_cast<std::size_t>(t)];
        for (int k = 1; k <= p; ++k) X(i, c++) = dy[static_cast<std::size_t>(t - k)];
    }
}

}  // namespace

double adf_critical_value(AdfRegression regression, double level, std::size_t nobs) {
    const auto& table = regression == AdfRegression::None       ? kCritNone
                        : regression == AdfRegression::Constant ? kCritConstant
                                                                : kCritTrend;
    std::size_t row = 0;
    if (level == 0.01) row = 0;
    else if (level == 0.05) row = 1;
    else if (level == 0.10) row = 2;
    else throw std::invalid_argument("ADF critical values exist for levels 0.01, 0.05, 0.10");
    const auto& b = table[row];
    const double inv = 1.0 / static_cast<double>(nobs);
    return b[0] + inv * (b[1] + inv * (b[2] + inv * b[3]));
}

double adf_p_value(AdfRegression regression, double statistic) {
    const PValueSurface& s = surface(regression);
    if (statistic > s.tau_max) return 1.0;
    if (statistic < s.tau_min) return 0.0;
    double z = 0.0;
    if (statistic <= s.tau_star) {
        z = s.small[0] + statistic * (s.small[1] + statistic * s.small[2]);
    } else {
        z = s.large[0] + statistic * (s.large[1] + statistic * (s.large[2] + statistic * s.large[3]));
    }
    return normal_cdf(z);
}

TestResult adf_test(std::span<const double> x, AdfRegression regression) {
    require_length(x, 25, "ADF test");
    require_variation(x, "ADF test");
    const std::size_t n = x.size();
    std::vector<double> dy(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = x[i + 1] - x[i];
    // y_{t-1} aligned with dy[t] is x[t].
    const std::span<const double> y_lag(x.data(), n - 1);

    const int nd = deterministic_terms(regression);
    int max_lag = static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    max_lag = std::min(max_lag, static_cast<int>(n) / 2 - nd - 2);
    max_lag = std::max(max_lag, 0);

    // Lag selection on the common sample that allows max_lag.
    const auto common = static_cast<Eigen::Index>(dy.size()) - max_lag;
    int best_lag = 0;
    double best_bic = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd X;
    Eigen::VectorXd target;
    for (int p = 0; p <= max_lag; ++p) {
        adf_design(y_lag, dy, p, common, regression, X, target);
        const OlsResult fit = ols(X, target, false);
        const double bic = gaussian_bic(fit.ssr, common, X.cols());
        if (bic < best_bic) {
            best_bic = bic;
            best_lag = p;
        }
    }

    const auto nobs = static_cast<Eigen::Index>(dy.size()) - best_lag;
    adf_design(y_lag, dy, best_lag, nobs, regression, X, target);
    const OlsResult fit = ols(X, target, true);
    TestResult r;
    r.statistic = fit.beta[nd] / fit.std_errors[nd];
    r.p_value = adf_p_value(regression, r.statistic);
    r.lags = best_lag;
    const auto obs = static_cast<std::size_t>(nobs);
    r.critical_values["1%"] = adf_critical_value(regression, 0.01, obs);
    r.critical_values["5%"] = adf_critical_value(regression, 0.05, obs);
    r.critical_values["10%"] = adf_critical_value(regression, 0.10, obs);
    return r;
}

// ---------------------------------------------------------------------------
// Rank correlation
// ---------------------------------------------------------------------------

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> rank(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw DataError("rank correlation undefined for a constant series");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DataError(fmt::format("spearman: length mismatch ({} vs {})", a.size(), b.size()));
    }
    require_length(a, 3, "spearman");
    const std::vector<double> ra = average_ranks(a);
    const std::vector<double> rb = average_ranks(b);
    return pearson(ra, rb);
}

double spearman(const DatedSeries& a, const DatedSeries& b) {
    if (a.dates() != b.dates()) {
        throw DataError("spearman: series are not aligned on the same dates");
    }
    return spearman(a.values(), b.values());
}

// ---------------------------------------------------------------------------
// AR(p) volatility proxy
// ---------------------------------------------------------------------------

namespace {

void ar_design(std::span<const double> x, int order, std::size_t first, Eigen::MatrixXd& X,
               Eigen::VectorXd& y) {
    const auto nobs = static_cast<Eigen::Index>(x.size() - first);
    X.resize(nobs, order + 1);
    y.resize(nobs);
    for (Eigen::Index i = 0; i < nobs; ++i) {
        const std::size_t t = first + static_cast<std::size_t>(i);
        y[i] = x[t];
        X(i, 0) = 1.0;
        for (int k = 1; k <= order; ++k) X(i, k) = x[t - static_cast<std::size_t>(k)];
    }
}

}  // namespace

ArFit fit_ar(std::span<const double> x, int order) {
    if (order < 0) throw std::invalid_argument("AR order must be >= 0");
    require_length(x, static_cast<std::size_t>(order) + 2, "AR fit");
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    ar_design(x, order, static_cast<std::size_t>(order), X, y);
    const OlsResult fit = ols(X, y, false);
    ArFit out;
    out.order = order;
    out.coefficients.assign(fit.beta.begin(), fit.beta.end());
    out.residuals.assign(fit.residuals.begin(), fit.residuals.end());
    return out;
}

int select_ar_order(std::span<const double> x, int max_order) {
    if (max_order < 1) throw std::invalid_argument("max AR order must be >= 1");
    require_length(x, static_cast<std::size_t>(max_order) + 2, "AR order selection");
    int best = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    for (int p = 1; p <= max_order; ++p) {
        ar_design(x, p, static_cast<std::size_t>(max_order), X, y);
        const OlsResult fit = ols(X, y, false);
        const double bic = gaussian_bic(fit.ssr, X.rows(), X.cols());
        if (bic < best_bic) {
            best_bic = bic;
            best = p;
        }
    }
    return best;
}

DatedSeries ar_residual_volatility(const DatedSeries& s, std::optional<int> order) {
    const std::span<const double> x = s.values();
    const int p = order ? *order : select_ar_order(x);
    if (p < 0) throw std::invalid_argument("AR order must be >= 0");
    if (x.size() <= static_cast<std::size_t>(p) + 1) {
        throw DataError(fmt::format("AR({}) volatility proxy needs more than {} observations", p,
                                    p + 1));
    }
    const ArFit fit = fit_ar(x, p);
    std::vector<double> sq(fit.residuals.size());
    std::transform(fit.residuals.begin(), fit.residuals.end(), sq.begin(),
                   [](double e) { return e * e; });
    std::vector<Date> dates(s.dates().begin() + p, s.dates().end());
    return DatedSeries(std::move(dates), std::move(sq), s.frequency());
}

}  // namespace midasvol
