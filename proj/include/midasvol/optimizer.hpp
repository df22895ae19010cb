#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace midasvol::opt {

/// Objective to be maximised, evaluated in the natural (constrained) parameter space.
/// Infeasible points should return -infinity (NaN is treated the same way).
using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Per-observation objective contributions; their sum is the objective.
using Contributions = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/**
 * @brief Feasible region of a parameter vector.
 *
 * Each parameter is either free (optionally box-bounded), fixed at its start
 * value, or a member of a weighted simplex group: x_i >= 0 for every member
 * and sum_i w_i x_i <= total. Groups express linear stationarity constraints
 * such as alpha + beta + gamma/2 < 1. The region is mapped to R^d by
 * logistic / log / softmax transforms, so every unconstrained point is
 * strictly feasible.
 */
class Bounds {
public:
    explicit Bounds(std::size_t dimension);

    Bounds& set(std::size_t index, double lower, double upper);
    Bounds& lower(std::size_t index, double lower);
    Bounds& fix(std::size_t index);
    /// Unbounded coordinate mapped as z = x / s, so that unit steps in z are meaningful.
    Bounds& scale(std::size_t index, double s);
    Bounds& add_simplex(std::vector<std::size_t> indices, std::vector<double> weights,
                        double total);

    [[nodiscard]] std::size_t dimension() const noexcept { return lower_.size(); }
    [[nodiscard]] std::size_t free_dimension() const;
    [[nodiscard]] bool is_fixed(std::size_t index) const { return fixed_.at(index); }
    [[nodiscard]] bool strictly_feasible(const Eigen::VectorXd& x) const;

    /// Maps the free coordinates of x to unconstrained space.
    [[nodiscard]] Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& x) const;
    /// Inverse of to_unconstrained; fixed coordinates are taken from `anchor`.
    [[nodiscard]] Eigen::VectorXd to_constrained(const Eigen::VectorXd& z,
                                                 const Eigen::VectorXd& anchor) const;

private:
    struct Group {
        std::vector<std::size_t> indices;
        std::vector<double> weights;
        double total;
    };
    [[nodiscard]] double group_capacity(const Group& g, const Eigen::VectorXd& x) const;

    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> scale_;
    std::vector<bool> fixed_;
    std::vector<int> group_of_;
    std::vector<Group> groups_;
};

struct Inference {
    std::string covariance_type;  ///< "hessian" or "sandwich"
    Eigen::MatrixXd covariance;   ///< over the active parameters only
    std::vector<std::optional<double>> std_errors;
    std::vector<std::optional<double>> p_values;
    bool available = false;
};

struct Optimum {
    Eigen::VectorXd point;  ///< natural parameter space
    double objective = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    long evaluations = 0;
    double gradient_norm = std::numeric_limits<double>::infinity();  ///< max-norm, transformed space
    std::size_t start_index = 0;
    std::vector<double> trace;  ///< objective after every accepted iteration of the winning start
    std::optional<Inference> inference;
};

struct MaximizeOptions {
    int starts = 5;               ///< total starts including the unperturbed one
    double perturbation = 0.5;    ///< sd of start perturbations in transformed space
    /// Optional per-coordinate multiplier of `perturbation`, indexed over free coordinates.
    std::vector<double> perturbation_scale;
    std::uint64_t seed = 20221014;
    int max_iterations = 2000;
    double objective_tolerance = 1e-8;
    double gradient_tolerance = 1e-5;
    bool parallel = false;        ///< evaluate starts on separate threads; result unchanged
};

/**
 * @brief Maximises `objective` over `bounds` by multi-start BFGS.
 *
 * Gradients are central differences in the transformed space. Start 0 is the
 * given point; the others perturb it with seeded Gaussian noise. The best
 * optimum over all starts is returned (ties keep the lowest start index).
 * A start converges when the last accepted step changed the objective by
 * less than `objective_tolerance` and the gradient max-norm is below
 * `gradient_tolerance`; a stalled search is polished with Newton steps from
 * a numerical Hessian before giving up.
 *
 * @throws Error if the objective is non-finite at every start.
 */
[[nodiscard]] Optimum maximize(const Objective& objective, const Eigen::VectorXd& start,
                               const Bounds& bounds, const MaximizeOptions& options = {});

/// Central-difference gradient of `objective` composed with the bounds transform, at natural point x.
[[nodiscard]] Eigen::VectorXd transformed_gradient(const Objective& objective,
                                                   const Eigen::VectorXd& x,
                                                   const Bounds& bounds);

/// Default Hessian step for a coordinate value.
[[nodiscard]] inline double hessian_step(double value) {
    return std::max(1e-5, 1e-5 * std::abs(value));
}

/**
 * Central-difference Hessian, symmetrised. Coordinates with `active[i] == false`
 * are skipped (their rows/columns are zero).
 * @throws Error when any second difference is non-finite.
 */
[[nodiscard]] Eigen::MatrixXd numerical_hessian(const Objective& objective,
                                                const Eigen::VectorXd& point,
                                                const std::vector<bool>& active = {});

/// Two-sided normal p-value of estimate / std_error.
[[nodiscard]] double normal_p_value(double estimate, double std_error);

/**
 * Standard errors from the inverse negative Hessian over the active coordinates.
 * A Hessian that is not negative definite yields `available == false` and no
 * standard errors rather than fabricated ones.
 */
[[nodiscard]] Inference hessian_inference(const Objective& objective,
                                          const Eigen::VectorXd& point,
                                          const std::vector<bool>& active = {});

/// Robust (sandwich) covariance H^-1 (sum s s') H^-1 from per-observation contributions.
[[nodiscard]] Inference sandwich_inference(const Contributions& contributions,
                                           const Eigen::VectorXd& point,
                                           const std::vector<bool>& active = {});

}  // namespace midasvol::opt
