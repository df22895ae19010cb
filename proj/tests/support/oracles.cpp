#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace oracle {

using midasvol::Date;

std::vector<double> beta_weights(double omega1, double omega2, int lags) {
    std::vector<double> raw;
    double total = 0.0;
    for (int k = 1; k <= lags; ++k) {
        const double x = static_cast<double>(k) / (lags + 1.0);
        raw.push_back(std::pow(x, omega1 - 1.0) * std::pow(1.0 - x, omega2 - 1.0));
        total += raw.back();
    }
    for (double& w : raw) w /= total;
    return raw;
}

std::vector<double> exp_weights(double omega, int lags) {
    std::vector<double> raw;
    double total = 0.0;
    for (int k = 1; k <= lags; ++k) {
        raw.push_back(std::pow(omega, k));
        total += raw.back();
    }
    for (double& w : raw) w /= total;
    return raw;
}

namespace {

std::size_t first_day(const std::vector<MidasCovariate>& covariates, std::size_t days) {
    std::size_t first = 0;
    for (const auto& c : covariates) {
        std::size_t d = 0;
        while (d < days && c.period_of_day[d] < static_cast<std::size_t>(c.lag)) ++d;
        first = std::max(first, d);
    }
    return first;
}

}  // namespace

std::vector<double> garch_midas_tau(const std::vector<MidasCovariate>& covariates,
                                    std::size_t days, bool log_link, double m) {
    std::vector<double> tau;
    for (std::size_t d = first_day(covariates, days); d < days; ++d) {
        double level = m;
        for (const auto& c : covariates) {
            const std::size_t t = c.period_of_day[d];
            double filtered = 0.0;
            for (int k = 1; k <= c.lag; ++k) filtered += c.phi[k - 1] * c.values[t - k];
            level += c.theta * filtered;
        }
        tau.push_back(log_link ? std::exp(level) : level);
    }
    return tau;
}

double garch_midas_llh(const std::vector<double>& returns,
                       const std::vector<std::size_t>& month_index,
                       const std::vector<MidasCovariate>& covariates, bool log_link, double mu,
                       double alpha, double beta, double gamma, double m) {
    const std::size_t n = returns.size();
    const std::size_t start = first_day(covariates, n);
    const std::vector<double> tau = garch_midas_tau(covariates, n, log_link, m);
    const std::size_t months = month_index.empty() ? 0 : month_index.back() + 1;

    double llh = 0.0;
    double g = 1.0;
    std::size_t d = 0;
    for (std::size_t t = 0; t < months; ++t) {
        for (; d < n && month_index[d] == t; ++d) {
            if (d < start) continue;
            const double tau_d = tau[d - start];
            if (d > start) {
                const double e = returns[d - 1] - mu;
                const double news = (alpha + (e < 0.0 ? gamma : 0.0)) * e * e / tau_d;
                g = (1.0 - alpha - 0.5 * gamma - beta) + news + beta * g;
            }
            const double e = returns[d] - mu;
            llh += -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(g * tau_d) +
                           e * e / (g * tau_d));
        }
    }
    return llh;
}

double gjr_llh(const std::vector<double>& r, double mu, double omega, double alpha, double beta,
               double gamma) {
    double h = omega / (1.0 - alpha - beta - 0.5 * gamma);
    double llh = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        if (t > 0) {
            const double e = r[t - 1] - mu;
            h = omega + (alpha + (e < 0.0 ? gamma : 0.0)) * e * e + beta * h;
        }
        const double e = r[t] - mu;
        llh += -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(h) + e * e / h);
    }
    return llh;
}

std::vector<Date> set_intersection(const std::vector<Date>& a, const std::vector<Date>& b) {
    const std::set<Date> sb(b.begin(), b.end());
    std::set<Date> common;
    for (const Date& d : a) {
        if (sb.contains(d)) common.insert(d);
    }
    return {common.begin(), common.end()};
}

double dcc_llh_matrix(const std::vector<double>& xa, const std::vector<double>& xb,
                      const std::vector<double>& target, double a, double b,
                      std::vector<double>* rho_out) {
    using M = std::array<std::array<double, 2>, 2>;
    auto target_at = [&](std::size_t t) { return M{{{1.0, target[t]}, {target[t], 1.0}}}; };
    M q = target_at(0);
    double llh = 0.0;
    for (std::size_t t = 0; t < xa.size(); ++t) {
        if (t > 0) {
            const M s = target_at(t);
            const double x[2] = {xa[t - 1], xb[t - 1]};
            M next{};
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    next[i][j] = (1.0 - a - b) * s[i][j] + a * x[i] * x[j] + b * q[i][j];
                }
            }
            q = next;
        }
        const double r12 = q[0][1] / std::sqrt(q[0][0] * q[1][1]);
        if (rho_out) rho_out->push_back(r12);
        const double det = 1.0 - r12 * r12;
        // R^-1 = [[1, -r], [-r, 1]] / det
        const double quad = (xa[t] * xa[t] + xb[t] * xb[t] - 2.0 * r12 * xa[t] * xb[t]) / det;
        llh += -0.5 * (std::log(det) + quad - (xa[t] * xa[t] + xb[t] * xb[t]));
    }
    return llh;
}

double ols_r_squared(const std::vector<std::vector<double>>& regressors,
                     const std::vector<double>& y) {
    const std::size_t n = y.size();
    const std::size_t p = regressors.size() + 1;
    auto col = [&](std::size_t j, std::size_t i) { return j == 0 ? 1.0 : regressors[j - 1][i]; };
    // Augmented normal equations [X'X | X'y].
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t k = 0; k < p; ++k) a[j][k] += col(j, i) * col(k, i);
            a[j][p] += col(j, i) * y[i];
        }
    }
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < p; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
        }
        std::swap(a[c], a[pivot]);
        if (std::abs(a[c][c]) < 1e-300) throw std::runtime_error("singular normal equations");
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
        }
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ssr = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (std::size_t j = 0; j < p; ++j) fitted += a[j][p] / a[j][j] * col(j, i);
        ssr += (y[i] - fitted) * (y[i] - fitted);
        sst += (y[i] - mean) * (y[i] - mean);
    }
    return 1.0 - ssr / sst;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double below = 0.0;
        double equal = 0.0;
        for (double v : x) {
            if (v < x[i]) below += 1.0;
            if (v == x[i]) equal += 1.0;
        }
        ranks[i] = below + (equal + 1.0) / 2.0;
    }
    return ranks;
}

std::vector<Date> weekdays(Date start, std::size_t n) {
    std::vector<Date> out;
    std::chrono::sys_days d{start};
    while (out.size() < n) {
        const std::chrono::weekday wd{d};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.emplace_back(d);
        d += std::chrono::days{1};
    }
    return out;
}

std::vector<double> normals(std::mt19937_64& rng, std::size_t n, double mean, double sd) {
    std::normal_distribution<double> z(mean, sd);
    std::vector<double> out(n);
    for (double& v : out) v = z(rng);
    return out;
}

RandomPanel random_panel(std::mt19937_64& rng, std::size_t months, int covariate_count, int lag,
                         bool positive_covariates) {
    using namespace std::chrono;
    std::uniform_int_distribution<int> length(15, 23);
    std::normal_distribution<double> z(0.0, 1.0);
    const year_month first = year{2001} / March;

    std::vector<Date> dates;
    std::vector<double> values;
    for (std::size_t t = 0; t < months; ++t) {
        const year_month ym = first + std::chrono::months{static_cast<int>(t)};
        const int days = length(rng);
        for (int i = 1; i <= days; ++i) {
            dates.push_back(ym / day{static_cast<unsigned>(i)});
            values.push_back(0.01 * z(rng));
        }
    }
    RandomPanel out{midasvol::DatedSeries(dates, values, midasvol::Frequency::Daily), {}};

    for (int j = 0; j < covariate_count; ++j) {
        std::vector<Date> cd;
        std::vector<double> cv;
        double x = 0.0;
        for (int t = -lag; t < static_cast<int>(months); ++t) {
            cd.push_back((first + std::chrono::months{t}) / day{1});
            x = 0.8 * x + z(rng);
            cv.push_back(positive_covariates ? 1e-4 * std::exp(0.5 * x) : x);
        }
        out.covariates.push_back({"X" + std::to_string(j + 1),
                                  midasvol::DatedSeries(cd, cv, midasvol::Frequency::Monthly), lag});
    }
    return out;
}

Pair simulate_dcc(std::mt19937_64& rng, const std::vector<double>& target, double a, double b) {
    std::normal_distribution<double> z;
    Pair out;
    double q11 = 1.0, q22 = 1.0, q12 = target.empty() ? 0.0 : target[0];
    for (std::size_t t = 0; t < target.size(); ++t) {
        if (t > 0) {
            const double xa = out.a.back(), xb = out.b.back();
            q11 = (1.0 - a - b) + a * xa * xa + b * q11;
            q22 = (1.0 - a - b) + a * xb * xb + b * q22;
            q12 = (1.0 - a - b) * target[t] + a * xa * xb + b * q12;
        }
        const double r = q12 / std::sqrt(q11 * q22);
        const double u = z(rng), v = z(rng);
        out.a.push_back(u);
        out.b.push_back(r * u + std::sqrt(1.0 - r * r) * v);
        out.rho.push_back(r);
    }
    return out;
}

}  // namespace oracle
