#include "midasvol/optimizer.hpp"

#include "midasvol/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

namespace midasvol::opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

std::vector<bool> all_active(std::size_t n, const std::vector<bool>& active) {
    if (active.empty()) return std::vector<bool>(n, true);
    if (active.size() != n) {
        throw std::invalid_argument("active mask has the wrong length");
    }
    return active;
}

// Minimisation problem in unconstrained coordinates.
class Problem {
public:
    Problem(const Objective& objective, const Bounds& bounds, const Eigen::VectorXd& anchor)
        : objective_(objective), bounds_(bounds), anchor_(anchor) {}

    double operator()(const Eigen::VectorXd& z) {
        ++evaluations;
        const double f = objective_(bounds_.to_constrained(z, anchor_));
        return std::isfinite(f) ? -f : kInf;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& z) {
        Eigen::VectorXd g(z.size());
        Eigen::VectorXd probe = z;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const double h = 6e-6 * std::max(1.0, std::abs(z[i]));
            probe[i] = z[i] + h;
            const double up = (*this)(probe);
            probe[i] = z[i] - h;
            const double down = (*this)(probe);
            probe[i] = z[i];
            g[i] = (up - down) / (2.0 * h);
        }
        return g;
    }

    Eigen::MatrixXd hessian(const Eigen::VectorXd& z) {
        Objective neg = [this](const Eigen::VectorXd& p) { return -(*this)(p); };
        return -numerical_hessian(neg, z);
    }

    long evaluations = 0;

private:
    const Objective& objective_;
    const Bounds& bounds_;
    const Eigen::VectorXd& anchor_;
};

struct StartResult {
    Eigen::VectorXd z;
    double value = kInf;  // minimised value (negated objective)
    bool converged = false;
    int iterations = 0;
    long evaluations = 0;
    double gradient_norm = kInf;
    std::vector<double> trace;
};

Eigen::MatrixXd diagonal_scaling(Problem& f, const Eigen::VectorXd& z, double fz,
                                 const Eigen::VectorXd& g) {
    const Eigen::Index n = z.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd probe = z;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double step = 1e-4 * std::max(1.0, std::abs(z[i]));
        probe[i] = z[i] + step;
        const double up = f(probe);
        probe[i] = z[i] - step;
        const double down = f(probe);
        probe[i] = z[i];
        const double d2 = (up - 2.0 * fz + down) / (step * step);
        h(i, i) = (std::isfinite(d2) && d2 > 1e-8) ? 1.0 / d2 : 1.0 / (1.0 + std::abs(g[i]));
    }
    return h;
}

// Backtracking Armijo search along p; returns the accepted step length or 0.
double line_search(Problem& f, const Eigen::VectorXd& z, double fz, const Eigen::VectorXd& g,
                   const Eigen::VectorXd& p, double& f_new) {
    const double slope = g.dot(p);
    double t = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double candidate = f(z + t * p);
        if (std::isfinite(candidate) && candidate <= fz + 1e-4 * t * slope) {
            f_new = candidate;
            return t;
        }
        t *= 0.5;
    }
    return 0.0;
}

StartResult run_start(const Objective& objective, const Bounds& bounds,
                      const Eigen::VectorXd& anchor, Eigen::VectorXd z,
                      const MaximizeOptions& options) {
    Problem f(objective, bounds, anchor);
    StartResult result;
    double fz = f(z);
    if (!std::isfinite(fz)) {
        result.z = z;
        result.evaluations = f.evaluations;
        return result;
    }
    if (z.size() == 0) {
        result.z = z;
        result.value = fz;
        result.converged = true;
        result.gradient_norm = 0.0;
        result.evaluations = f.evaluations;
        return result;
    }
    Eigen::VectorXd g = f.gradient(z);
    Eigen::MatrixXd h = diagonal_scaling(f, z, fz, g);
    bool fresh = true;
    int small_steps = 0;
    double last_change = kInf;
    int it = 0;
    bool converged = false;

    auto converged_now = [&](double change, const Eigen::VectorXd& grad) {
        return std::abs(change) < options.objective_tolerance &&
               grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance;
    };

    for (; it < options.max_iterations; ++it) {
        if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance &&
            (it == 0 || std::abs(last_change) < options.objective_tolerance)) {
            converged = true;
            break;
        }
        Eigen::VectorXd p = -h * g;
        if (!(g.dot(p) < 0.0)) {
            h = diagonal_scaling(f, z, fz, g);
            fresh = true;
            p = -h * g;
        }
        const double longest = p.lpNorm<Eigen::Infinity>();
        if (longest > 5.0) p *= 5.0 / longest;

        double f_new = fz;
        const double t = line_search(f, z, fz, g, p, f_new);
        if (t == 0.0) {
            if (fresh) break;
            h = diagonal_scaling(f, z, fz, g);
            fresh = true;
            continue;
        }
        const Eigen::VectorXd s = t * p;
        z += s;
        const Eigen::VectorXd g_new = f.gradient(z);
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(z.size(), z.size());
            h = (id - rho * s * y.transpose()) * h * (id - rho * y * s.transpose()) +
                rho * s * s.transpose();
            fresh = false;
        }
        last_change = fz - f_new;
        fz = f_new;
        g = g_new;
        result.trace.push_back(-fz);
        if (converged_now(last_change, g)) {
            converged = true;
            ++it;
            break;
        }
        small_steps = std::abs(last_change) < options.objective_tolerance ? small_steps + 1 : 0;
        if (small_steps >= 8) break;
    }

    // Newton polish when quasi-Newton stalls short of the gradient tolerance.
    for (int k = 0; !converged && k < 25 && it < options.max_iterations; ++k, ++it) {
        Eigen::MatrixXd hess;
        try {
            hess = f.hessian(z);
        } catch (const Error&) {
            break;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        Eigen::VectorXd p;
        if (llt.info() == Eigen::Success) {
            p = -llt.solve(g);
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
            Eigen::VectorXd ev = eig.eigenvalues().cwiseAbs().cwiseMax(1e-6);
            p = -eig.eigenvectors() * (eig.eigenvectors().transpose() * g).cwiseQuotient(ev);
        }
        double f_new = fz;
        const double t = line_search(f, z, fz, g, p, f_new);
        if (t == 0.0) {
            converged = g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance;
            break;
        }
        z += t * p;
        last_change = fz - f_new;
        fz = f_new;
        g = f.gradient(z);
        result.trace.push_back(-fz);
        if (converged_now(last_change, g)) {
            converged = true;
        }
    }

    result.z = z;
    result.value = fz;
    result.converged = converged;
    result.iterations = it;
    result.gradient_norm = g.lpNorm<Eigen::Infinity>();
    result.evaluations = f.evaluations;
    return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

Bounds::Bounds(std::size_t dimension)
    : lower_(dimension, -kInf),
      upper_(dimension, kInf),
      scale_(dimension, 1.0),
      fixed_(dimension, false),
      group_of_(dimension, -1) {}

Bounds& Bounds::set(std::size_t index, double lower, double upper) {
    if (!(lower < upper)) {
        throw std::invalid_argument("bounds need lower < upper");
    }
    if (group_of_.at(index) >= 0 || scale_.at(index) != 1.0) {
        throw std::invalid_argument("simplex members and scaled coordinates cannot carry box bounds");
    }
    lower_.at(index) = lower;
    upper_.at(index) = upper;
    return *this;
}

Bounds& Bounds::lower(std::size_t index, double lower) {
    return set(index, lower, upper_.at(index));
}

Bounds& Bounds::fix(std::size_t index) {
    fixed_.at(index) = true;
    return *this;
}

Bounds& Bounds::scale(std::size_t index, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("coordinate scale must be positive and finite");
    }
    if (group_of_.at(index) >= 0 || std::isfinite(lower_[index]) || std::isfinite(upper_[index])) {
        throw std::invalid_argument("only unbounded coordinates can be scaled");
    }
    scale_[index] = s;
    return *this;
}

Bounds& Bounds::add_simplex(std::vector<std::size_t> indices, std::vector<double> weights,
                            double total) {
    if (indices.empty() || indices.size() != weights.size() || !(total > 0.0)) {
        throw std::invalid_argument("malformed simplex constraint");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const std::size_t i = indices[k];
        if (group_of_.at(i) >= 0 || std::isfinite(lower_[i]) || std::isfinite(upper_[i]) ||
            scale_[i] != 1.0) {
            throw std::invalid_argument("parameter already constrained");
        }
        if (!(weights[k] > 0.0)) {
            throw std::invalid_argument("simplex weights must be positive");
        }
        group_of_[i] = static_cast<int>(groups_.size());
    }
    groups_.push_back({std::move(indices), std::move(weights), total});
    return *this;
}

std::size_t Bounds::free_dimension() const {
    return static_cast<std::size_t>(std::count(fixed_.begin(), fixed_.end(), false));
}

double Bounds::group_capacity(const Group& g, const Eigen::VectorXd& x) const {
    double cap = g.total;
    for (std::size_t k = 0; k < g.indices.size(); ++k) {
        if (fixed_[g.indices[k]]) cap -= g.weights[k] * x[g.indices[k]];
    }
    return cap;
}

bool Bounds::strictly_feasible(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != dimension()) return false;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (!std::isfinite(x[i])) return false;
        if (fixed_[i]) continue;
        if (!(x[i] > lower_[i]) || !(x[i] < upper_[i])) return false;
    }
    for (const auto& g : groups_) {
        double used = 0.0;
        for (std::size_t k = 0; k < g.indices.size(); ++k) {
            const double v = x[g.indices[k]];
            if (fixed_[g.indices[k]] ? v < 0.0 : !(v > 0.0)) return false;
            used += g.weights[k] * v;
        }
        if (!(used < g.total)) return false;
    }
    return true;
}

Eigen::VectorXd Bounds::to_unconstrained(const Eigen::VectorXd& x) const {
    if (!strictly_feasible(x)) {
        throw InfeasibleParameters("point is not strictly inside the bounds");
    }
    Eigen::VectorXd z(static_cast<Eigen::Index>(free_dimension()));
    Eigen::Index j = 0;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (fixed_[i]) continue;
        const double lo = lower_[i];
        const double hi = upper_[i];
        if (group_of_[i] >= 0) {
            const Group& g = groups_[static_cast<std::size_t>(group_of_[i])];
            const double cap = group_capacity(g, x);
            double slack = 1.0;
            double yi = 0.0;
            for (std::size_t k = 0; k < g.indices.size(); ++k) {
                const std::size_t m = g.indices[k];
                if (fixed_[m]) continue;
                const double y = g.weights[k] * x[m] / cap;
                slack -= y;
                if (m == i) yi = y;
            }
            z[j] = std::log(yi) - std::log(slack);
        } else if (std::isfinite(lo) && std::isfinite(hi)) {
            z[j] = std::log(x[i] - lo) - std::log(hi - x[i]);
        } else if (std::isfinite(lo)) {
            z[j] = std::log(x[i] - lo);
        } else if (std::isfinite(hi)) {
            z[j] = std::log(hi - x[i]);
        } else {
            z[j] = x[i] / scale_[i];
        }
        ++j;
    }
    return z;
}

Eigen::VectorXd Bounds::to_constrained(const Eigen::VectorXd& z,
                                       const Eigen::VectorXd& anchor) const {
    if (static_cast<std::size_t>(z.size()) != free_dimension() ||
        static_cast<std::size_t>(anchor.size()) != dimension()) {
        throw std::invalid_argument("dimension mismatch in to_constrained");
    }
    Eigen::VectorXd x = anchor;
    std::vector<double> zfull(dimension(), 0.0);
    Eigen::Index j = 0;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (fixed_[i]) continue;
        zfull[i] = z[j++];
        if (group_of_[i] >= 0) continue;
        const double lo = lower_[i];
        const double hi = upper_[i];
        if (std::isfinite(lo) && std::isfinite(hi)) {
            x[i] = lo + (hi - lo) * logistic(zfull[i]);
        } else if (std::isfinite(lo)) {
            x[i] = lo + std::exp(zfull[i]);
        } else if (std::isfinite(hi)) {
            x[i] = hi - std::exp(zfull[i]);
        } else {
            x[i] = zfull[i] * scale_[i];
        }
        // Far tails of the transforms round onto a bound; keep the image strictly inside
        // so every returned point maps back.
        if (std::isfinite(lo)) x[i] = std::max(x[i], std::nextafter(lo, hi));
        if (std::isfinite(hi)) x[i] = std::min(x[i], std::nextafter(hi, lo));
    }
    for (const auto& g : groups_) {
        const double cap = group_capacity(g, anchor);
        double top = 0.0;
        for (std::size_t m : g.indices) {
            if (!fixed_[m]) top = std::max(top, zfull[m]);
        }
        double denom = std::exp(-top);
        for (std::size_t m : g.indices) {
            if (!fixed_[m]) denom += std::exp(zfull[m] - top);
        }
        for (std::size_t k = 0; k < g.indices.size(); ++k) {
            const std::size_t m = g.indices[k];
            if (fixed_[m]) continue;
            x[m] = std::max(cap * std::exp(zfull[m] - top) / denom / g.weights[k],
                            std::numeric_limits<double>::min());
        }
        for (int pass = 0; pass < 4; ++pass) {
            double used = 0.0;
            for (std::size_t k = 0; k < g.indices.size(); ++k) used += g.weights[k] * x[g.indices[k]];
            if (used < g.total) break;
            for (std::size_t m : g.indices) {
                if (!fixed_[m]) x[m] *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
            }
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Maximisation
// ---------------------------------------------------------------------------

Optimum maximize(const Objective& objective, const Eigen::VectorXd& start, const Bounds& bounds,
                 const MaximizeOptions& options) {
    if (static_cast<std::size_t>(start.size()) != bounds.dimension()) {
        throw std::invalid_argument("start has the wrong dimension");
    }
    if (options.starts < 1) {
        throw std::invalid_argument("need at least one start");
    }
    const Eigen::VectorXd z0 = bounds.to_unconstrained(start);

    // Draw every perturbed start up front so results do not depend on scheduling.
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::VectorXd> starts{z0};
    for (int s = 1; s < options.starts; ++s) {
        Eigen::VectorXd z = z0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double scale =
                k < options.perturbation_scale.size() ? options.perturbation_scale[k] : 1.0;
            z[i] += options.perturbation * scale * normal(rng);
        }
        starts.push_back(std::move(z));
    }
    // Replace infeasible perturbed starts by shrinking them towards z0.
    for (std::size_t s = 1; s < starts.size(); ++s) {
        for (int k = 0; k < 20; ++k) {
            const double v = objective(bounds.to_constrained(starts[s], start));
            if (std::isfinite(v)) break;
            starts[s] = z0 + 0.5 * (starts[s] - z0);
        }
    }

    std::vector<StartResult> results(starts.size());
    if (options.parallel && starts.size() > 1) {
        std::vector<std::future<StartResult>> futures;
        for (const auto& z : starts) {
            futures.push_back(std::async(std::launch::async, run_start, std::cref(objective),
                                         std::cref(bounds), std::cref(start), z,
                                         std::cref(options)));
        }
        for (std::size_t s = 0; s < futures.size(); ++s) results[s] = futures[s].get();
    } else {
        for (std::size_t s = 0; s < starts.size(); ++s) {
            results[s] = run_start(objective, bounds, start, starts[s], options);
        }
    }

    Optimum best;
    long evaluations = 0;
    std::size_t best_index = results.size();
    for (std::size_t s = 0; s < results.size(); ++s) {
        evaluations += results[s].evaluations;
        if (std::isfinite(results[s].value) &&
            (best_index == results.size() || results[s].value < results[best_index].value)) {
            best_index = s;
        }
    }
    if (best_index == results.size()) {
        throw Error("objective is non-finite at every start");
    }
    const StartResult& r = results[best_index];
    best.point = bounds.to_constrained(r.z, start);
    best.objective = -r.value;
    best.converged = r.converged;
    best.iterations = r.iterations;
    best.evaluations = evaluations;
    best.gradient_norm = r.gradient_norm;
    best.start_index = best_index;
    best.trace = r.trace;
    return best;
}

Eigen::VectorXd transformed_gradient(const Objective& objective, const Eigen::VectorXd& x,
                                     const Bounds& bounds) {
    const Eigen::VectorXd z = bounds.to_unconstrained(x);
    Problem f(objective, bounds, x);
    return -f.gradient(z);
}

// ---------------------------------------------------------------------------
// Derivatives and inference
// ---------------------------------------------------------------------------

Eigen::MatrixXd numerical_hessian(const Objective& objective, const Eigen::VectorXd& point,
                                  const std::vector<bool>& active) {
    const auto n = static_cast<std::size_t>(point.size());
    const auto mask = all_active(n, active);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(point.size(), point.size());
    const double f0 = objective(point);
    if (!std::isfinite(f0)) {
        throw Error("objective is non-finite at the Hessian point");
    }
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = hessian_step(point[i]);

    Eigen::VectorXd x = point;
    auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
        x = point;
        x[i] += di;
        x[j] += dj;
        const double v = objective(x);
        if (!std::isfinite(v)) {
            throw Error(fmt::format("non-finite second difference at coordinate {}", i));
        }
        return v;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        const double hi = step[i];
        const double up = eval(i, hi, i, 0.0);
        const double down = eval(i, -hi, i, 0.0);
        h(i, i) = (up - 2.0 * f0 + down) / (hi * hi);
        for (std::size_t j = 0; j < i; ++j) {
            if (!mask[j]) continue;
            const double hj = step[j];
            const double pp = eval(i, hi, j, hj);
            const double pm = eval(i, hi, j, -hj);
            const double mp = eval(i, -hi, j, hj);
            const double mm = eval(i, -hi, j, -hj);
            h(i, j) = (pp - pm - mp + mm) / (4.0 * hi * hj);
            h(j, i) = h(i, j);
        }
    }
    return 0.5 * (h + h.transpose());
}

double normal_p_value(double estimate, double std_error) {
    if (!(std_error > 0.0) || !std::isfinite(std_error)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::erfc(std::abs(estimate / std_error) / std::sqrt(2.0));
}

namespace {

std::vector<std::size_t> active_indices(const std::vector<bool>& mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) idx.push_back(i);
    }
    return idx;
}

void fill_standard_errors(Inference& inf, const Eigen::VectorXd& point,
                          const std::vector<std::size_t>& idx) {
    inf.std_errors.assign(static_cast<std::size_t>(point.size()), std::nullopt);
    inf.p_values.assign(static_cast<std::size_t>(point.size()), std::nullopt);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const double var = inf.covariance(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        if (var > 0.0 && std::isfinite(var)) {
            const double se = std::sqrt(var);
            inf.std_errors[idx[k]] = se;
            inf.p_values[idx[k]] = normal_p_value(point[idx[k]], se);
        }
    }
    inf.available = true;
}

}  // namespace

Inference hessian_inference(const Objective& objective, const Eigen::VectorXd& point,
                            const std::vector<bool>& active) {
    const auto n = static_cast<std::size_t>(point.size());
    const auto mask = all_active(n, active);
    const auto idx = active_indices(mask);
    Inference inf;
    inf.covariance_type = "hessian";
    inf.std_errors.assign(n, std::nullopt);
    inf.p_values.assign(n, std::nullopt);
    Eigen::MatrixXd h;
    try {
        h = numerical_hessian(objective, point, mask);
    } catch (const Error&) {
        return inf;
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd info(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            info(a, b) = -h(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
        return inf;
    }
    inf.covariance = llt.solve(Eigen::MatrixXd::Identity(m, m));
    fill_standard_errors(inf, point, idx);
    return inf;
}

Inference sandwich_inference(const Contributions& contributions, const Eigen::VectorXd& point,
                             const std::vector<bool>& active) {
    const auto n = static_cast<std::size_t>(point.size());
    const auto mask = all_active(n, active);
    const auto idx = active_indices(mask);
    Inference inf;
    inf.covariance_type = "sandwich";
    inf.std_errors.assign(n, std::nullopt);
    inf.p_values.assign(n, std::nullopt);

    const Objective total = [&](const Eigen::VectorXd& x) {
        const Eigen::VectorXd c = contributions(x);
        return c.size() == 0 ? -kInf : c.sum();
    };
    Eigen::MatrixXd h;
    try {
        h = numerical_hessian(total, point, mask);
    } catch (const Error&) {
        return inf;
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    const Eigen::VectorXd base = contributions(point);
    Eigen::MatrixXd scores(base.size(), m);
    Eigen::VectorXd x = point;
    for (Eigen::Index k = 0; k < m; ++k) {
        const std::size_t i = idx[static_cast<std::size_t>(k)];
        const double step = hessian_step(point[static_cast<Eigen::Index>(i)]);
        x = point;
        x[static_cast<Eigen::Index>(i)] += step;
        const Eigen::VectorXd up = contributions(x);
        x[static_cast<Eigen::Index>(i)] -= 2.0 * step;
        const Eigen::VectorXd down = contributions(x);
        if (up.size() != base.size() || down.size() != base.size() || !up.allFinite() ||
            !down.allFinite()) {
            return inf;
        }
        scores.col(k) = (up - down) / (2.0 * step);
    }
    Eigen::MatrixXd info(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            info(a, b) = -h(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) {
        return inf;
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m, m));
    const Eigen::MatrixXd meat = scores.transpose() * scores;
    inf.covariance = inv * meat * inv;
    fill_standard_errors(inf, point, idx);
    return inf;
}

}  // namespace midasvol::opt
