#include "midasvol/errors.hpp"
#include "midasvol/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace midasvol;
using namespace midasvol::opt;

TEST(Maximize, Quadratic) {
    const Objective f = [](const Eigen::VectorXd& x) { return -(x[0] - 2.0) * (x[0] - 2.0); };
    const Optimum o = maximize(f, Eigen::VectorXd::Constant(1, -3.0), Bounds(1));
    EXPECT_TRUE(o.converged);
    EXPECT_NEAR(o.point[0], 2.0, 1e-6);
    EXPECT_NEAR(o.objective, 0.0, 1e-6);
    EXPECT_LT(o.gradient_norm, 1e-5);
}

// Grid search over [0.9, 1.1]^2 at 1e-4 spacing confirms (1, 1) is the maximiser.
TEST(Maximize, RosenbrockFromMinusOneOne) {
    const Objective f = [](const Eigen::VectorXd& x) {
        return -(100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2));
    };
    double best = -INFINITY;
    Eigen::Vector2d arg;
    for (int i = 0; i <= 2000; ++i) {
        for (int j = 0; j <= 2000; j += 1) {
            const Eigen::Vector2d p(0.9 + 1e-4 * i, 0.9 + 1e-4 * j);
            const double v = f(p);
            if (v > best) {
                best = v;
                arg = p;
            }
        }
    }
    ASSERT_NEAR(arg[0], 1.0, 1e-9);
    ASSERT_NEAR(arg[1], 1.0, 1e-9);

    const Optimum o = maximize(f, Eigen::Vector2d(-1.0, 1.0), Bounds(2));
    EXPECT_TRUE(o.converged);
    EXPECT_NEAR(o.point[0], 1.0, 1e-4);
    EXPECT_NEAR(o.point[1], 1.0, 1e-4);
}

TEST(Maximize, RespectsBoxLowerAndSimplex) {
    // Unconstrained optimum (2, 0.8, 0.8) lies outside x1 + x2 < 1 and x0 in (0, 1).
    const Objective f = [](const Eigen::VectorXd& x) {
        return -(std::pow(x[0] - 2.0, 2) + std::pow(x[1] - 0.8, 2) + std::pow(x[2] - 0.8, 2) +
                 std::pow(x[3] + 1.0, 2));
    };
    Bounds b(4);
    b.set(0, 0.0, 1.0).add_simplex({1, 2}, {1.0, 1.0}, 1.0).lower(3, 0.5);
    const Optimum o = maximize(f, Eigen::Vector4d(0.5, 0.2, 0.2, 1.0), b);
    EXPECT_TRUE(b.strictly_feasible(o.point));
    EXPECT_GT(o.point[0], 0.99);
    EXPECT_NEAR(o.point[1], 0.5, 1e-3);
    EXPECT_NEAR(o.point[2], 0.5, 1e-3);
    EXPECT_LT(o.point[1] + o.point[2], 1.0);
    EXPECT_LT(o.point[3], 0.5 + 1e-3);
}

TEST(Maximize, FixedCoordinatesStayPut) {
    const Objective f = [](const Eigen::VectorXd& x) {
        return -std::pow(x[0] - 1.0, 2) - std::pow(x[1] - x[0], 2);
    };
    Bounds b(2);
    b.fix(1);
    const Optimum o = maximize(f, Eigen::Vector2d(0.0, 3.0), b);
    EXPECT_EQ(o.point[1], 3.0);
    EXPECT_NEAR(o.point[0], 2.0, 1e-5);
}

TEST(Maximize, NonFiniteEverywhereThrows) {
    const Objective f = [](const Eigen::VectorXd&) { return -INFINITY; };
    EXPECT_THROW((void)maximize(f, Eigen::VectorXd::Zero(1), Bounds(1)), Error);
}

TEST(Maximize, IterationCapReportsNotConverged) {
    const Objective f = [](const Eigen::VectorXd& x) {
        return -(100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2));
    };
    MaximizeOptions opts;
    opts.max_iterations = 3;
    opts.starts = 1;
    const Optimum o = maximize(f, Eigen::Vector2d(-1.0, 1.0), Bounds(2), opts);
    EXPECT_FALSE(o.converged);
    EXPECT_TRUE(std::isfinite(o.objective));
}

TEST(Maximize, DeterministicGivenSeedAndParallelInvariant) {
    const Objective f = [](const Eigen::VectorXd& x) {
        return -(std::pow(x[0] - 0.3, 2) + 3.0 * std::pow(x[1] + 0.1, 4) + std::cos(3.0 * x[0]));
    };
    MaximizeOptions opts;
    opts.starts = 8;
    const Optimum a = maximize(f, Eigen::Vector2d(1.0, 1.0), Bounds(2), opts);
    const Optimum b = maximize(f, Eigen::Vector2d(1.0, 1.0), Bounds(2), opts);
    opts.parallel = true;
    const Optimum c = maximize(f, Eigen::Vector2d(1.0, 1.0), Bounds(2), opts);
    EXPECT_EQ(a.point, b.point);
    EXPECT_EQ(a.point, c.point);
    EXPECT_EQ(a.objective, c.objective);
    EXPECT_EQ(a.start_index, c.start_index);
}

TEST(Maximize, TraceNeverDecreases) {
    const Objective f = [](const Eigen::VectorXd& x) {
        return -(100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2));
    };
    const Optimum o = maximize(f, Eigen::Vector2d(-1.2, 1.0), Bounds(2));
    ASSERT_FALSE(o.trace.empty());
    for (std::size_t i = 1; i < o.trace.size(); ++i) EXPECT_GE(o.trace[i], o.trace[i - 1]);
}

TEST(Bounds, TransformRoundTrip) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.01, 0.3);
    Bounds b(6);
    b.add_simplex({0, 1, 2}, {0.5, 0.5, 1.0}, 1.0 - 1e-6).set(3, -2.0, 5.0).lower(4, 1.0).scale(5, 0.01);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd x(6);
        x << u(rng), u(rng), u(rng), -2.0 + 7.0 * u(rng) * 3, 1.0 + u(rng) * 10, u(rng) - 0.15;
        ASSERT_TRUE(b.strictly_feasible(x));
        const Eigen::VectorXd back = b.to_constrained(b.to_unconstrained(x), x);
        ASSERT_LT((back - x).lpNorm<Eigen::Infinity>(), 1e-12);
    }
    // Any unconstrained point maps inside the region.
    std::normal_distribution<double> z(0.0, 5.0);
    const Eigen::VectorXd anchor = Eigen::VectorXd::Constant(6, 0.1).cwiseMax(0.1);
    Eigen::VectorXd a = anchor;
    a[4] = 2.0;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd zz(6);
        for (int i = 0; i < 6; ++i) zz[i] = z(rng);
        ASSERT_TRUE(b.strictly_feasible(b.to_constrained(zz, a)));
    }
}

TEST(Bounds, InvalidDeclarationsThrow) {
    Bounds b(3);
    EXPECT_THROW(b.set(0, 1.0, 1.0), std::invalid_argument);
    b.add_simplex({0, 1}, {1.0, 1.0}, 1.0);
    EXPECT_THROW(b.set(0, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(b.scale(1, 2.0), std::invalid_argument);
    EXPECT_THROW(b.add_simplex({1, 2}, {1.0, 1.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(b.scale(2, 0.0), std::invalid_argument);
    EXPECT_THROW((void)b.to_unconstrained(Eigen::Vector3d(0.6, 0.6, 0.0)), InfeasibleParameters);
}

TEST(Hessian, QuadraticExact) {
    Eigen::Matrix3d a;
    a << 4, 1, 0.5, 1, 3, -0.2, 0.5, -0.2, 2;
    const Objective f = [&](const Eigen::VectorXd& x) { return -0.5 * x.dot(a * x); };
    const Eigen::MatrixXd h = numerical_hessian(f, Eigen::Vector3d(0.3, -1.0, 2.0));
    // Central differences are exact on a quadratic up to rounding, about eps |f| / h^2.
    EXPECT_LT(((h + a).cwiseAbs().array() / a.cwiseAbs().array().max(1e-12)).maxCoeff(), 1e-4);
    EXPECT_EQ(h, h.transpose());
}

TEST(Hessian, UnitStandardError) {
    const Objective f = [](const Eigen::VectorXd& x) { return -0.5 * x[0] * x[0]; };
    const Inference inf = hessian_inference(f, Eigen::VectorXd::Zero(1));
    ASSERT_TRUE(inf.available);
    ASSERT_TRUE(inf.std_errors[0].has_value());
    EXPECT_NEAR(*inf.std_errors[0], 1.0, 1e-6);
    ASSERT_TRUE(inf.p_values[0].has_value());
}

TEST(Hessian, SingularFlagsUnavailable) {
    const Objective f = [](const Eigen::VectorXd& x) { return -std::pow(x[0] + x[1], 2); };
    const Inference inf = hessian_inference(f, Eigen::Vector2d(0.1, 0.2));
    EXPECT_FALSE(inf.available);
    for (const auto& se : inf.std_errors) EXPECT_FALSE(se.has_value());
    for (const auto& p : inf.p_values) EXPECT_FALSE(p.has_value());
}

TEST(Hessian, NonFiniteSecondDifferenceThrows) {
    const Objective f = [](const Eigen::VectorXd& x) { return x[0] > 1.0 ? -INFINITY : -x[0] * x[0]; };
    EXPECT_THROW((void)numerical_hessian(f, Eigen::VectorXd::Constant(1, 1.0)), Error);
}

TEST(Hessian, StepRule) {
    EXPECT_EQ(hessian_step(0.0), 1e-5);
    EXPECT_EQ(hessian_step(0.5), 1e-5);
    EXPECT_DOUBLE_EQ(hessian_step(-300.0), 3e-3);
}

TEST(Inference, PValueTwoSidedNormal) {
    EXPECT_NEAR(normal_p_value(1.959963984540054, 1.0), 0.05, 1e-12);
    EXPECT_NEAR(normal_p_value(0.0, 1.0), 1.0, 1e-15);
}

// Sandwich equals the Hessian covariance for a correctly specified Gaussian mean model.
TEST(Inference, SandwichMatchesHessianForGaussianMean) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> z(0.5, 1.0);
    Eigen::VectorXd y(4000);
    for (auto& v : y) v = z(rng);
    const Contributions c = [&](const Eigen::VectorXd& p) {
        return Eigen::VectorXd((-0.5 * (y.array() - p[0]).square()).matrix());
    };
    const Objective f = [&](const Eigen::VectorXd& p) { return c(p).sum(); };
    const Eigen::VectorXd at = Eigen::VectorXd::Constant(1, y.mean());
    const Inference h = hessian_inference(f, at);
    const Inference s = sandwich_inference(c, at);
    ASSERT_TRUE(h.available && s.available);
    EXPECT_EQ(s.covariance_type, "sandwich");
    EXPECT_NEAR(*s.std_errors[0] / *h.std_errors[0], 1.0, 0.06);
}
