#include "midasvol/errors.hpp"
#include "midasvol/garch.hpp"
#include "midasvol/garch_midas.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace midasvol;
using namespace std::chrono;

namespace {

std::vector<oracle::MidasCovariate> oracle_covariates(const MixedPanel& panel,
                                                      const GarchMidasModel& model,
                                                      const GarchMidasParams& p) {
    std::vector<oracle::MidasCovariate> out;
    for (std::size_t j = 0; j < model.covariates.size(); ++j) {
        const PanelCovariate& c = panel.covariate(model.covariates[j].name);
        oracle::MidasCovariate o{c.values, c.period_of_day, model.covariates[j].lag, p.theta[j], {}};
        if (const auto* b = std::get_if<BetaWeights>(&p.weighting[j])) {
            o.phi = oracle::beta_weights(b->omega1, b->omega2, o.lag);
        } else {
            o.phi = oracle::exp_weights(std::get<ExpWeights>(p.weighting[j]).omega, o.lag);
        }
        out.push_back(std::move(o));
    }
    return out;
}

// Monthly covariate and returns on 20-day months with a fixed covariate path.
MixedPanel hand_panel(const std::vector<double>& cov, int lag, std::size_t months,
                      const std::vector<double>& returns_per_day) {
    std::vector<Date> d;
    std::vector<double> r;
    const year_month first = year{2005} / January;
    for (std::size_t t = 0; t < months; ++t) {
        for (unsigned i = 1; i <= 20; ++i) {
            d.push_back((first + std::chrono::months{static_cast<int>(t)}) / day{i});
            r.push_back(returns_per_day[(t * 20 + i - 1) % returns_per_day.size()]);
        }
    }
    std::vector<Date> cd;
    for (std::size_t t = 0; t < cov.size(); ++t) {
        cd.push_back((first + std::chrono::months{static_cast<int>(t) - lag}) / day{1});
    }
    const std::vector<CovariateInput> in{{"X", DatedSeries(cd, cov, Frequency::Monthly), lag}};
    return build_panel(DatedSeries(d, r, Frequency::Daily), in);
}

GarchMidasModel one_covariate(Link link, bool asym, int lag = 12,
                              WeightScheme scheme = BetaWeights{1.0, 3.0, true}) {
    GarchMidasModel m;
    m.link = link;
    m.include_asymmetry = asym;
    m.covariates.push_back({"X", lag, scheme});
    return m;
}

GarchMidasParams params_for(const GarchMidasModel& model, double theta, double omega2, double m) {
    GarchMidasParams p;
    p.alpha = 0.08;
    p.beta = 0.86;
    p.gamma = model.include_asymmetry ? 0.04 : 0.0;
    p.m = m;
    for (const auto& c : model.covariates) {
        p.theta.push_back(theta);
        if (std::holds_alternative<BetaWeights>(c.scheme)) {
            p.weighting.emplace_back(BetaWeights{1.0, omega2, true});
        } else {
            p.weighting.emplace_back(ExpWeights{0.6});
        }
    }
    return p;
}

}  // namespace

TEST(LongRun, ThetaZeroLogLinkIsConstant) {
    std::mt19937_64 rng(81);
    const auto rp = oracle::random_panel(rng, 24, 1, 3, false);
    const MixedPanel panel = build_panel(rp.returns, rp.covariates);
    GarchMidasModel model;
    model.covariates.push_back({"X1", 3, BetaWeights{1.0, 2.0, true}});
    GarchMidasParams p = params_for(model, 0.0, 2.0, -9.0);
    for (double tau : long_run_component(panel, model, p)) EXPECT_NEAR(tau, std::exp(-9.0), 1e-18);
}

TEST(LongRun, ConstantCovariateIdentityLink) {
    const MixedPanel panel = hand_panel(std::vector<double>(15, 2.5), 3, 12, {0.01, -0.01});
    const GarchMidasModel model = one_covariate(Link::Identity, false, 3);
    const GarchMidasParams p = params_for(model, 0.4, 5.0, 0.3);
    for (double tau : long_run_component(panel, model, p)) EXPECT_NEAR(tau, 0.3 + 0.4 * 2.5, 1e-14);
}

TEST(LongRun, HandComputedTwoLags) {
    // X = (1, 2, 3) with K = 2 and phi = (0.6, 0.4): exp weights with omega = 2/3.
    const MixedPanel panel = hand_panel({1.0, 2.0, 3.0}, 2, 1, {0.0});
    const GarchMidasModel model = one_covariate(Link::Identity, false, 2, ExpWeights{2.0 / 3.0});
    GarchMidasParams p;
    p.m = 0.0;
    p.theta = {1.0};
    p.weighting = {ExpWeights{2.0 / 3.0}};
    const auto tau = long_run_component(panel, model, p);
    ASSERT_EQ(tau.size(), 20u);
    EXPECT_NEAR(tau.front(), 0.6 * 2 + 0.4 * 1, 1e-14);
}

TEST(LongRun, IdentityLinkNonPositiveIsInfeasible) {
    const MixedPanel panel = hand_panel(std::vector<double>(15, 1.0), 3, 12, {0.01});
    const GarchMidasModel model = one_covariate(Link::Identity, false, 3);
    const GarchMidasParams p = params_for(model, -1.0, 3.0, 0.5);
    EXPECT_THROW((void)long_run_component(panel, model, p), InfeasibleParameters);
    EXPECT_EQ(log_likelihood(panel, model, p), -std::numeric_limits<double>::infinity());
}

TEST(ShortRun, NoDynamicsGivesUnitG) {
    std::mt19937_64 rng(82);
    const auto rp = oracle::random_panel(rng, 20, 1, 2, false);
    const MixedPanel panel = build_panel(rp.returns, rp.covariates);
    GarchMidasModel model;
    model.covariates.push_back({"X1", 2, BetaWeights{}});
    GarchMidasParams p = params_for(model, 0.1, 2.0, -8.0);
    p.alpha = p.beta = p.gamma = 0.0;
    const auto tau = long_run_component(panel, model, p);
    for (double g : short_run_component(panel, tau, p, first_likelihood_day(panel, model))) {
        EXPECT_EQ(g, 1.0);
    }
}

TEST(ShortRun, ZeroReturnsConvergeToFixedPoint) {
    const MixedPanel panel = hand_panel(std::vector<double>(40, 1.0), 1, 39, {0.0});
    const GarchMidasModel model = one_covariate(Link::Log, false, 1);
    GarchMidasParams p = params_for(model, 0.0, 2.0, 0.0);
    p.alpha = 0.1;
    p.beta = 0.7;
    const auto tau = long_run_component(panel, model, p);
    const auto g = short_run_component(panel, tau, p, first_likelihood_day(panel, model));
    // Iterating g' = (1 - a - b) + b g from 1.
    double it = 1.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        it = (1.0 - p.alpha - p.beta) + p.beta * it;
        ASSERT_NEAR(g[i], it, 1e-14);
    }
    EXPECT_NEAR(g.back(), (1.0 - 0.1 - 0.7) / (1.0 - 0.7), 1e-12);
}

TEST(ShortRun, OutsideStationarityThrows) {
    const MixedPanel panel = hand_panel(std::vector<double>(13, 1.0), 1, 12, {0.01});
    const GarchMidasModel model = one_covariate(Link::Log, true, 1);
    GarchMidasParams p = params_for(model, 0.0, 2.0, 0.0);
    p.alpha = 0.3;
    p.beta = 0.7;
    p.gamma = 0.2;
    const auto tau = std::vector<double>(panel.days() - first_likelihood_day(panel, model), 1.0);
    EXPECT_THROW((void)short_run_component(panel, tau, p, first_likelihood_day(panel, model)),
                 InfeasibleParameters);
}

TEST(Likelihood, ZeroResidualsUnitVariance) {
    const MixedPanel panel = hand_panel(std::vector<double>(13, 1.0), 1, 12, {0.0});
    const GarchMidasModel model = one_covariate(Link::Log, false, 1);
    GarchMidasParams p = params_for(model, 0.0, 2.0, 0.0);
    p.alpha = p.beta = 0.0;
    const double n = static_cast<double>(panel.days() - first_likelihood_day(panel, model));
    EXPECT_NEAR(log_likelihood(panel, model, p), -0.5 * n * std::log(2.0 * std::numbers::pi), 1e-9);
}

TEST(Likelihood, SingleDayUnitResidual) {
    // One month of history plus a one-day likelihood sample.
    std::vector<Date> d{year{2005} / January / 3, year{2005} / February / 1};
    const std::vector<CovariateInput> in{
        {"X", DatedSeries({year{2005} / January / 1, year{2005} / February / 1}, {0.0, 0.0},
                          Frequency::Monthly),
         1}};
    const MixedPanel panel = build_panel(DatedSeries(d, {0.0, 1.0}, Frequency::Daily), in);
    const GarchMidasModel model = one_covariate(Link::Log, false, 1);
    GarchMidasParams p = params_for(model, 0.0, 2.0, 0.0);
    ASSERT_EQ(first_likelihood_day(panel, model), 1u);
    EXPECT_NEAR(log_likelihood(panel, model, p), -0.5 * (std::log(2.0 * std::numbers::pi) + 1.0), 1e-14);
}

// Random panels, both links, one or two covariates, against the triple-loop oracle.
TEST(LikelihoodProperty, MatchesTripleLoopOracle) {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int covs = 1 + trial % 2;
        const bool log_link = trial % 4 < 2;
        const auto rp = oracle::random_panel(rng, 30, covs, 4, !log_link);
        const MixedPanel panel = build_panel(rp.returns, rp.covariates);
        GarchMidasModel model;
        model.link = log_link ? Link::Log : Link::Identity;
        model.include_asymmetry = true;
        GarchMidasParams p;
        p.mu = 0.002 * (u(rng) - 0.5);
        p.alpha = 0.15 * u(rng);
        p.gamma = 0.1 * u(rng);
        p.beta = (0.98 - p.alpha - 0.5 * p.gamma) * u(rng);
        p.m = log_link ? -9.0 + u(rng) : 5e-5;
        for (int j = 0; j < covs; ++j) {
            const bool beta_scheme = u(rng) < 0.7;
            model.covariates.push_back({"X" + std::to_string(j + 1), 4,
                                        beta_scheme ? WeightScheme{BetaWeights{1.0, 1.0, false}}
                                                    : WeightScheme{ExpWeights{0.5}}});
            p.theta.push_back(log_link ? 0.3 * (u(rng) - 0.5) : u(rng));
            if (beta_scheme) p.weighting.emplace_back(BetaWeights{1.0 + u(rng), 1.0 + 5.0 * u(rng), false});
            else p.weighting.emplace_back(ExpWeights{0.05 + 0.9 * u(rng)});
        }
        const double expected = oracle::garch_midas_llh(panel.returns, panel.month_index,
                                                        oracle_covariates(panel, model, p), log_link,
                                                        p.mu, p.alpha, p.beta, p.gamma, p.m);
        ASSERT_NEAR(log_likelihood(panel, model, p), expected, 1e-10) << "trial " << trial;
        const auto terms = log_likelihood_terms(panel, model, p);
        ASSERT_EQ(terms.size(), panel.days() - first_likelihood_day(panel, model));
    }
}

TEST(Likelihood, ThetaZeroNestsGjrGarch) {
    std::mt19937_64 rng(84);
    const auto rp = oracle::random_panel(rng, 40, 1, 6, false);
    const MixedPanel panel = build_panel(rp.returns, rp.covariates);
    GarchMidasModel model;
    model.covariates.push_back({"X1", 6, BetaWeights{}});
    GarchMidasParams p = params_for(model, 0.0, 2.0, std::log(1e-4));
    p.mu = 0.0003;
    const std::size_t first = first_likelihood_day(panel, model);
    const std::vector<double> r(panel.returns.begin() + static_cast<std::ptrdiff_t>(first), panel.returns.end());
    GarchParams g{p.mu, std::exp(p.m) * (1.0 - p.alpha - 0.5 * p.gamma - p.beta), p.alpha, p.beta, p.gamma};
    EXPECT_NEAR(log_likelihood(panel, model, p), garch_log_likelihood(r, g), 1e-6);
    EXPECT_NEAR(log_likelihood(panel, model, p), oracle::gjr_llh(r, g.mu, g.omega, g.alpha, g.beta, g.gamma), 1e-6);
}

TEST(Fit, DefaultStart) {
    std::mt19937_64 rng(85);
    const auto rp = oracle::random_panel(rng, 30, 1, 3, false);
    const MixedPanel panel = build_panel(rp.returns, rp.covariates);
    GarchMidasModel model;
    model.covariates.push_back({"X1", 3, BetaWeights{}});
    const GarchMidasParams s = default_start(panel, model);
    EXPECT_EQ(s.mu, 0.0);
    EXPECT_EQ(s.alpha, 0.05);
    EXPECT_EQ(s.beta, 0.9);
    EXPECT_EQ(s.gamma, 0.05);
    EXPECT_EQ(s.theta, std::vector<double>{0.0});
    EXPECT_EQ(std::get<BetaWeights>(s.weighting[0]).omega2, 3.0);
    const std::size_t first = first_likelihood_day(panel, model);
    double mean = 0.0, ss = 0.0;
    const double n = static_cast<double>(panel.days() - first);
    for (std::size_t d = first; d < panel.days(); ++d) mean += panel.returns[d] / n;
    for (std::size_t d = first; d < panel.days(); ++d) ss += std::pow(panel.returns[d] - mean, 2);
    EXPECT_NEAR(s.m, std::log(ss / (n - 1.0)), 1e-12);
}

TEST(Fit, ThetaFixedAtZeroMatchesGjrFit) {
    std::mt19937_64 rng(86);
    GarchMidasModel model = one_covariate(Link::Log, true, 12);
    GarchMidasParams truth = params_for(model, 0.0, 3.0, 0.0);
    SimulationSpec spec;
    spec.periods = 120;
    spec.generators = {Ar1Covariate{0.0, 0.9, 1.0}};
    const MixedPanel panel = simulate(model, truth, spec, 86);

    GarchMidasFitOptions opts;
    opts.fix_long_run = true;
    opts.start = default_start(panel, model);
    const GarchMidasFit nested = fit(panel, model, opts);
    const std::size_t first = first_likelihood_day(panel, model);
    const std::vector<double> r(panel.returns.begin() + static_cast<std::ptrdiff_t>(first), panel.returns.end());
    const GarchFit gjr = fit_garch(r, true);
    ASSERT_TRUE(nested.converged);
    ASSERT_TRUE(gjr.converged);
    EXPECT_NEAR(nested.llh, gjr.llh, 1e-6);
    EXPECT_EQ(nested.params.theta[0], 0.0);
}

TEST(Fit, RecoversTableThreeLikeParameters) {
    GarchMidasModel model = one_covariate(Link::Identity, false, 12, BetaWeights{1.0, 1.3866, true});
    GarchMidasParams truth;
    truth.alpha = 0.0790;
    truth.beta = 0.8598;
    truth.m = 0.5167;
    truth.theta = {0.0076};
    truth.weighting = {BetaWeights{1.0, 1.3866, true}};
    SimulationSpec spec;
    spec.periods = 480;
    spec.generators = {LogAr1Covariate::with_moments(20.0, 10.0, 0.9)};
    const MixedPanel panel = simulate(model, truth, spec, 87);
    const GarchMidasFit f = fit(panel, model);
    EXPECT_TRUE(f.converged);
    EXPECT_NEAR(f.params.alpha, truth.alpha, 0.03);
    EXPECT_NEAR(f.params.beta, truth.beta, 0.05);
    EXPECT_NEAR(f.params.theta[0], truth.theta[0], 0.5 * truth.theta[0]);
    EXPECT_NEAR(f.bic, static_cast<double>(f.parameter_count) * std::log(static_cast<double>(f.observations)) - 2.0 * f.llh, 1e-9);
    EXPECT_EQ(f.parameter_count, 6u);
    EXPECT_EQ(f.observations, f.tau.size());
    EXPECT_EQ(f.dates.size(), f.tau.size());
    for (double v : f.tau) ASSERT_GT(v, 0.0);
    for (double v : f.g) ASSERT_GT(v, 0.0);
    EXPECT_NEAR(f.llh, log_likelihood(panel, model, f.params), 1e-9);
    EXPECT_GE(f.variance_ratio, 0.0);
    EXPECT_LE(f.variance_ratio, 100.0);
}

TEST(Fit, CollinearCovariatesFlaggedBySeBlowUp) {
    GarchMidasModel one = one_covariate(Link::Log, false, 12);
    GarchMidasParams truth = params_for(one, 0.3, 3.0, 0.0);
    SimulationSpec spec;
    spec.periods = 120;
    spec.generators = {Ar1Covariate{0.0, 0.9, 0.5}};
    const MixedPanel base = simulate(one, truth, spec, 88);
    MixedPanel twin = base;
    PanelCovariate copy = base.covariate("X");
    copy.name = "Y";
    twin.covariates.push_back(copy);
    GarchMidasModel two = one;
    two.covariates.push_back({"Y", 12, BetaWeights{1.0, 3.0, true}});
    const GarchMidasFit single = fit(base, one);
    const GarchMidasFit both = fit(twin, two);
    const auto& se_one = single.estimate("theta_X").std_error;
    const auto& se_x = both.estimate("theta_X").std_error;
    ASSERT_TRUE(se_one.has_value());
    // Either no standard error at all, or one that dwarfs the identified model's.
    if (se_x.has_value()) {
        EXPECT_GT(*se_x, 10.0 * *se_one);
    }
    EXPECT_NEAR(both.params.theta[0] + both.params.theta[1], single.params.theta[0], 0.05);
}

TEST(FitProperty, AddingCovariateNeverLowersLikelihood) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        GarchMidasModel one = one_covariate(Link::Log, false, 6);
        GarchMidasParams truth = params_for(one, 0.2, 3.0, 0.0);
        SimulationSpec spec;
        spec.periods = 80;
        spec.generators = {Ar1Covariate{0.0, 0.8, 1.0}};
        MixedPanel panel = simulate(one, truth, spec, 100 + seed);
        std::mt19937_64 rng(seed);
        PanelCovariate extra = panel.covariate("X");
        extra.name = "Z";
        for (double& v : extra.values) v = oracle::normals(rng, 1)[0];
        panel.covariates.push_back(extra);
        GarchMidasModel two = one;
        two.covariates.push_back({"Z", 6, BetaWeights{1.0, 3.0, true}});

        const GarchMidasFit small = fit(panel, one);
        GarchMidasFitOptions opts;
        GarchMidasParams start = small.params;
        start.theta.push_back(0.0);
        start.weighting.emplace_back(BetaWeights{1.0, 3.0, true});
        opts.start = start;
        const GarchMidasFit big = fit(panel, two, opts);
        EXPECT_GE(big.llh, small.llh - 1e-9) << "seed " << seed;
        EXPECT_EQ(big.observations, small.observations);
    }
}

TEST(FitProperty, GradientAtOptimumIsFlatAndStable) {
    GarchMidasModel model = one_covariate(Link::Log, true, 12);
    GarchMidasParams truth = params_for(model, 0.3, 3.0, 0.0);
    SimulationSpec spec;
    spec.periods = 150;
    spec.generators = {Ar1Covariate{0.0, 0.9, 0.5}};
    const MixedPanel panel = simulate(model, truth, spec, 89);
    const GarchMidasFit f = fit(panel, model);
    ASSERT_TRUE(f.converged);
    const GarchMidasProblem prob = make_problem(panel, model, f.params, false);
    const Eigen::VectorXd x = pack(model, f.params);
    const Eigen::VectorXd g = opt::transformed_gradient(prob.objective, x, prob.bounds);
    EXPECT_LT(g.lpNorm<Eigen::Infinity>(), 1e-5);
    EXPECT_NEAR(prob.objective(x), f.llh, 1e-9);
    // Halving the difference step leaves the gradient flat.
    const double h = 1e-4;
    const Eigen::VectorXd z = prob.bounds.to_unconstrained(x);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        Eigen::VectorXd up = z, down = z;
        up[i] += h;
        down[i] -= h;
        const double cd = (prob.objective(prob.bounds.to_constrained(up, x)) -
                           prob.objective(prob.bounds.to_constrained(down, x))) / (2.0 * h);
        EXPECT_LT(std::abs(cd), 1e-3) << "coordinate " << i;
    }
}

TEST(VarianceRatio, Limits) {
    const std::vector<double> flat(100, 2.0);
    std::vector<double> g(100);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 1.0 + 0.5 * std::sin(0.3 * static_cast<double>(i));
    EXPECT_EQ(variance_ratio(flat, g), 0.0);
    std::vector<double> tau(100);
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = 1.0 + 0.1 * static_cast<double>(i);
    EXPECT_NEAR(variance_ratio(tau, std::vector<double>(100, 1.0)), 100.0, 1e-10);
    EXPECT_THROW((void)variance_ratio(flat, std::vector<double>(100, 1.0)), DataError);
}

TEST(VarianceRatio, ScaleInvariantUnderRefit) {
    GarchMidasModel model = one_covariate(Link::Log, false, 12);
    GarchMidasParams truth = params_for(model, 0.4, 3.0, std::log(1e-4));
    SimulationSpec spec;
    spec.periods = 150;
    spec.generators = {Ar1Covariate{0.0, 0.9, 0.5}};
    const MixedPanel panel = simulate(model, truth, spec, 90);
    MixedPanel scaled = panel;
    for (double& r : scaled.returns) r *= 10.0;
    const GarchMidasFit a = fit(panel, model);
    const GarchMidasFit b = fit(scaled, model);
    EXPECT_NEAR(a.variance_ratio, b.variance_ratio, 0.5);
    EXPECT_NEAR(b.params.m - a.params.m, std::log(100.0), 1e-2);
}

TEST(Simulate, SameSeedSamePanel) {
    GarchMidasModel model = one_covariate(Link::Identity, false, 12);
    GarchMidasParams p = params_for(model, 0.01, 1.4, 0.5);
    SimulationSpec spec;
    spec.periods = 30;
    spec.generators = {RealizedVolatilityCovariate{}};
    EXPECT_EQ(simulate(model, p, spec, 5), simulate(model, p, spec, 5));
    EXPECT_NE(simulate(model, p, spec, 5).returns, simulate(model, p, spec, 6).returns);
}

TEST(Simulate, DegenerateDgpIsIidNormal) {
    GarchMidasModel model = one_covariate(Link::Log, false, 1);
    GarchMidasParams p = params_for(model, 0.0, 2.0, std::log(4.0));
    p.alpha = p.beta = 0.0;
    p.mu = 0.3;
    SimulationSpec spec;
    spec.periods = 2000;
    spec.generators = {ConstantCovariate{1.0}};
    const MixedPanel panel = simulate(model, p, spec, 91);
    const double n = static_cast<double>(panel.days());
    double mean = 0.0;
    for (double r : panel.returns) mean += r / n;
    double var = 0.0;
    for (double r : panel.returns) var += (r - mean) * (r - mean) / (n - 1.0);
    EXPECT_NEAR(mean, 0.3, 4.0 * 2.0 / std::sqrt(n));
    EXPECT_NEAR(var, 4.0, 4.0 * 4.0 * std::sqrt(2.0 / n));
}

TEST(Simulate, VarianceMatchesMeanTauAndFactorisation) {
    GarchMidasModel model = one_covariate(Link::Log, true, 12);
    GarchMidasParams p = params_for(model, 0.3, 3.0, 0.0);
    p.mu = 0.05;
    SimulationSpec spec;
    spec.periods = 2000;
    spec.generators = {Ar1Covariate{0.0, 0.9, 0.5}};
    const MixedPanel panel = simulate(model, p, spec, 92);
    const auto tau = long_run_component(panel, model, p);
    const std::size_t first = first_likelihood_day(panel, model);
    const auto g = short_run_component(panel, tau, p, first);
    double mean_tau = 0.0, var_r = 0.0, mean_r = 0.0, e_mean = 0.0, e_var = 0.0;
    const double n = static_cast<double>(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double r = panel.returns[first + i];
        mean_tau += tau[i] / n;
        mean_r += r / n;
        const double e = (r - p.mu) / std::sqrt(tau[i] * g[i]);
        e_mean += e / n;
        e_var += e * e / n;
    }
    for (std::size_t i = 0; i < tau.size(); ++i) var_r += std::pow(panel.returns[first + i] - mean_r, 2) / n;
    EXPECT_NEAR(var_r / mean_tau, 1.0, 0.05);
    EXPECT_NEAR(e_mean, 0.0, 0.02);
    EXPECT_NEAR(e_var - e_mean * e_mean, 1.0, 0.02);
}

TEST(Model, Validation) {
    GarchMidasModel m;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m.covariates = {{"A", 12, BetaWeights{}}, {"B", 12, BetaWeights{}}, {"C", 12, BetaWeights{}}};
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m.covariates = {{"A", 0, BetaWeights{}}};
    EXPECT_THROW(m.validate(), std::invalid_argument);
}
