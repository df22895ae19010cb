#include "cli/commands.hpp"

#include "midasvol/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <future>
#include <map>
#include <numeric>

namespace midasvol::cli {

namespace {

namespace fs = std::filesystem;

DatedSeries load_transformed(const SeriesConfig& s, std::ostream& log) {
    LoadedSeries loaded = load_csv(s.path, s.date_column, s.value_column, s.frequency);
    if (loaded.dropped_rows > 0) {
        log << fmt::format("{}: dropped {} rows with missing values\n", s.name, loaded.dropped_rows);
    }
    switch (s.transform) {
        case Transform::None: return loaded.series;
        case Transform::LogDiff: return log_diff(loaded.series);
        case Transform::FirstDiff: return first_diff(loaded.series);
    }
    return loaded.series;
}

// Loads each configured series at most once per command.
class SeriesCache {
public:
    SeriesCache(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log) {}

    const DatedSeries& get(const std::string& name) {
        auto it = cache_.find(name);
        if (it == cache_.end()) {
            it = cache_.emplace(name, load_transformed(cfg_.find_series(name), log_)).first;
        }
        return it->second;
    }

private:
    const RunConfig& cfg_;
    std::ostream& log_;
    std::map<std::string, DatedSeries> cache_;
};

std::uint64_t seed_of(const RunConfig& cfg) {
    return cfg.seed.value_or(kDefaultSeed);
}

opt::MaximizeOptions optimizer_options(const RunConfig& cfg) {
    opt::MaximizeOptions o;
    o.seed = seed_of(cfg);
    o.starts = cfg.starts;
    return o;
}

std::string estimate_cell(const Estimate& e) {
    return e.p_value ? fmt::format("{} ({})", fixed4(e.value), fixed4(*e.p_value)) : fixed4(e.value);
}

// ---------------------------------------------------------------------------
// describe
// ---------------------------------------------------------------------------

struct Battery {
    SummaryStats stats;
    std::optional<TestResult> ks, jb, lb, arch, adf;
    std::vector<std::string> warnings;
};

template <class F>
std::optional<TestResult> guarded(F&& f, std::string_view what, std::vector<std::string>& warnings) {
    try {
        return f();
    } catch (const DataError& e) {
        warnings.push_back(fmt::format("{}: {}", what, e.what()));
        return std::nullopt;
    }
}

Battery run_battery(const DatedSeries& s, const DescribeConfig& d) {
    Battery b;
    const std::span<const double> x = s.values();
    b.stats = describe(x);
    if (!(b.stats.sd > 0.0)) b.warnings.emplace_back("degenerate variance: the series is constant");
    b.ks = guarded([&] { return ks_normal(x); }, "K-S", b.warnings);
    b.jb = guarded([&] { return jarque_bera(x); }, "J-B", b.warnings);
    b.lb = guarded([&] { return ljung_box(x, d.ljung_box_lags); }, "L-B", b.warnings);
    b.arch = guarded([&] { return arch_lm(x, d.arch_lags); }, "ARCH-LM", b.warnings);
    b.adf = guarded([&] { return adf_test(x, d.adf); }, "ADF", b.warnings);
    return b;
}

Json optional_json(const std::optional<TestResult>& t) {
    return t ? to_json(*t) : Json(nullptr);
}

std::string p_cell(const std::optional<TestResult>& t) {
    return t ? fixed4(t->p_value) : "NA";
}

}  // namespace

int cmd_describe(const RunConfig& cfg, std::ostream& log) {
    std::vector<std::string> names = cfg.describe.series;
    if (names.empty()) {
        for (const auto& s : cfg.series) names.push_back(s.name);
    }
    if (names.empty()) throw ConfigError("describe: no series configured");
    SeriesCache cache(cfg, log);

    Json report;
    report["command"] = "describe";
    report["adf_regression"] = std::string(to_string(cfg.describe.adf));
    Json series = Json::array();
    std::vector<std::vector<std::string>> rows;
    std::vector<std::vector<std::string>> adf_rows;
    for (const auto& name : names) {
        const SeriesConfig& sc = cfg.find_series(name);
        const DatedSeries& s = cache.get(name);
        const Battery b = run_battery(s, cfg.describe);
        for (const auto& w : b.warnings) log << fmt::format("warning: {}: {}\n", name, w);
        Json j;
        j["name"] = name;
        j["transform"] = std::string(to_string(sc.transform));
        j["frequency"] = std::string(to_string(s.frequency()));
        j["summary"] = to_json(b.stats);
        j["ks"] = optional_json(b.ks);
        j["jb"] = optional_json(b.jb);
        j["ljung_box"] = optional_json(b.lb);
        j["arch_lm"] = optional_json(b.arch);
        j["adf"] = optional_json(b.adf);
        j["warnings"] = b.warnings;
        series.push_back(j);
        rows.push_back({name, std::to_string(b.stats.n), fixed4(b.stats.min), fixed4(b.stats.max),
                        fixed4(b.stats.mean), fixed4(b.stats.sd), fixed4(b.stats.skewness),
                        fixed4(b.stats.excess_kurtosis), p_cell(b.ks), p_cell(b.jb), p_cell(b.lb)});
        if (b.adf) {
            adf_rows.push_back({name, std::string(to_string(sc.transform)), fixed4(b.adf->statistic),
                                fixed4(b.adf->critical_values.at("1%")), fixed4(b.adf->p_value),
                                std::to_string(*b.adf->lags)});
        }
    }
    report["series"] = series;

    std::string text = format_table(
        {"Series", "Obs.", "Min", "Max", "Mean", "SD", "Skew.", "Kurt.", "K-S", "J-B",
         fmt::format("L-B({})", cfg.describe.ljung_box_lags)},
        rows);
    text += "\n";
    text += format_table({"Series", "Transform", "ADF", "1% crit.", "p-value", "Lags"}, adf_rows);

    // Pairwise rank correlations over common dates.
    Json pairs = Json::array();
    std::vector<std::vector<std::string>> pair_rows;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t k = i + 1; k < names.size(); ++k) {
            const DatedSeries& a = cache.get(names[i]);
            const DatedSeries& b = cache.get(names[k]);
            if (a.frequency() != b.frequency()) continue;
            Json p;
            p["a"] = names[i];
            p["b"] = names[k];
            try {
                const auto [ca, cb] = a.frequency() == Frequency::Daily
                                          ? intersect_calendars(a, b)
                                          : std::pair<DatedSeries, DatedSeries>{a, b};
                const double rho = spearman(ca, cb);
                p["common_obs"] = ca.size();
                p["spearman"] = rho;
                pair_rows.push_back({names[i] + " / " + names[k], std::to_string(ca.size()), fixed4(rho)});
            } catch (const DataError& e) {
                p["spearman"] = nullptr;
                p["warning"] = e.what();
                log << fmt::format("warning: spearman {} / {}: {}\n", names[i], names[k], e.what());
            }
            pairs.push_back(p);
        }
    }
    if (!pairs.empty()) {
        report["spearman"] = pairs;
        text += "\n";
        text += format_table({"Pair", "Obs.", "Spearman"}, pair_rows);
    }

    write_json(cfg.output / "report.json", report);
    write_text(cfg.output / "comparison.txt", text);
    log << fmt::format("wrote {}\n", (cfg.output / "report.json").string());
    return kOk;
}

// ---------------------------------------------------------------------------
// fit-garch-midas
// ---------------------------------------------------------------------------

namespace {

struct PreparedModel {
    MixedPanel panel;
    GarchMidasModel model;
};

PreparedModel prepare(const ModelConfig& mc, const DatedSeries& returns, SeriesCache& cache) {
    std::vector<CovariateInput> inputs;
    GarchMidasModel model;
    model.link = mc.effective_link();
    model.include_asymmetry = mc.asymmetry;
    std::optional<DatedSeries> rv;
    for (const auto& c : mc.covariates) {
        CovariateInput in;
        in.name = c.label();
        in.lag = c.lag;
        if (c.series == kRealizedVolatility) {
            if (!rv) {
                const MixedPanel base = build_panel(returns, {});
                rv = realized_volatility(base);
            }
            in.series = *rv;
        } else if (c.form == CovariateForm::Level) {
            in.series = cache.get(c.series);
        } else {
            in.series = ar_residual_volatility(cache.get(c.series), c.ar_order);
        }
        if (std::any_of(inputs.begin(), inputs.end(), [&](const CovariateInput& x) { return x.name == in.name; })) {
            throw ConfigError(fmt::format("model '{}': covariate '{}' appears twice", mc.name, in.name));
        }
        model.covariates.push_back({in.name, c.lag, c.scheme});
        inputs.push_back(std::move(in));
    }
    return {build_panel(returns, inputs), std::move(model)};
}

GarchMidasFit fit_block(const ModelConfig& mc, const PreparedModel& pm, const RunConfig& cfg) {
    GarchMidasFitOptions options;
    options.optimizer = optimizer_options(cfg);
    options.robust = mc.robust;
    return fit(pm.panel, pm.model, options);
}

std::string file_stem(std::string name) {
    for (char& ch : name) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '+')) ch = '_';
    }
    return name;
}

}  // namespace

int cmd_fit_garch_midas(const RunConfig& cfg, int jobs, std::ostream& log) {
    if (cfg.models.empty()) throw ConfigError("fit-garch-midas: no models configured (models or grid)");
    if (cfg.returns.empty()) throw ConfigError("returns: required by fit-garch-midas");
    SeriesCache cache(cfg, log);
    const DatedSeries returns = cache.get(cfg.returns);

    // Panels are built sequentially (they share the series cache); fits may run concurrently.
    std::vector<PreparedModel> prepared;
    prepared.reserve(cfg.models.size());
    for (const auto& mc : cfg.models) {
        prepared.push_back(prepare(mc, returns, cache));
        if (prepared.back().panel.dropped_days > 0) {
            log << fmt::format("{}: dropped {} return days without daily covariate values\n", mc.name,
                               prepared.back().panel.dropped_days);
        }
    }
    std::vector<GarchMidasFit> fits(cfg.models.size());
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t begin = 0; begin < cfg.models.size(); begin += width) {
        const std::size_t end = std::min(cfg.models.size(), begin + width);
        std::vector<std::future<GarchMidasFit>> running;
        for (std::size_t i = begin; i < end; ++i) {
            running.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                         [&, i] { return fit_block(cfg.models[i], prepared[i], cfg); }));
        }
        for (std::size_t i = begin; i < end; ++i) {
            fits[i] = running[i - begin].get();
            log << fmt::format("{}: llh {:.4f}{}\n", cfg.models[i].name, fits[i].llh,
                               fits[i].converged ? "" : " (not converged)");
        }
    }

    Json report;
    report["command"] = "fit-garch-midas";
    report["returns"] = cfg.returns;
    report["seed"] = seed_of(cfg);
    Json models = Json::array();
    bool all_converged = true;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        Json m;
        m["name"] = cfg.models[i].name;
        m["fit"] = to_json(fits[i]);
        const std::string csv = "components/" + file_stem(cfg.models[i].name) + ".csv";
        m["components"] = csv;
        models.push_back(m);
        write_components_csv(cfg.output / csv, fits[i]);
        all_converged = all_converged && fits[i].converged;
    }
    report["models"] = models;
    write_json(cfg.output / "report.json", report);

    std::vector<std::size_t> order(fits.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ba = std::isfinite(fits[a].bic) ? fits[a].bic : INFINITY;
        const double bb = std::isfinite(fits[b].bic) ? fits[b].bic : INFINITY;
        return ba < bb;
    });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i : order) {
        const GarchMidasFit& f = fits[i];
        std::vector<std::string> row{cfg.models[i].name, std::string(to_string(f.model.link)),
                                     estimate_cell(f.estimate("alpha")), estimate_cell(f.estimate("beta"))};
        for (std::size_t k = 0; k < 2; ++k) {
            if (k < f.model.covariates.size()) {
                const auto& c = f.model.covariates[k];
                row.push_back(c.name);
                row.push_back(estimate_cell(f.estimate("theta_" + c.name)));
                const std::string w = std::holds_alternative<BetaWeights>(c.scheme) ? "omega2_" : "omega_";
                row.push_back(estimate_cell(f.estimate(w + c.name)));
            } else {
                row.insert(row.end(), {"", "", ""});
            }
        }
        row.push_back(fixed4(f.bic));
        row.push_back(fixed4(f.llh));
        row.push_back(fixed4(f.variance_ratio));
        row.push_back(f.converged ? "yes" : "no");
        rows.push_back(std::move(row));
    }
    std::string text = format_table({"Model", "Link", "alpha", "beta", "X1", "theta1", "omega1", "X2",
                                     "theta2", "omega2", "BIC", "LLH", "VR(%)", "Conv."},
                                    rows);
    text += "\nValues are estimates with two-sided p-values in parentheses; omega is the "
            "decay parameter of each covariate's weights (omega2 for beta, omega for exp).\n";
    write_text(cfg.output / "comparison.txt", text);
    return all_converged ? kOk : kConvergenceError;
}

// ---------------------------------------------------------------------------
// fit-dcc
// ---------------------------------------------------------------------------

namespace {

UnivariateVolFit first_step(const FirstStepConfig& fs, const DatedSeries& returns, SeriesCache& cache,
                            const RunConfig& cfg) {
    if (!fs.garch_midas) return standardize(returns, optimizer_options(cfg));
    const PreparedModel pm = prepare(*fs.garch_midas, returns, cache);
    GarchMidasFitOptions options;
    options.optimizer = optimizer_options(cfg);
    options.robust = fs.garch_midas->robust;
    return standardize(pm.panel, pm.model, options);
}

Json first_step_json(const UnivariateVolFit& f) {
    Json j;
    j["model"] = f.model;
    Json est = Json::array();
    for (const auto& e : f.estimates) est.push_back(to_json(e));
    j["estimates"] = est;
    j["llh"] = f.llh;
    j["observations"] = f.residuals.size();
    j["converged"] = f.converged;
    return j;
}

std::vector<std::string> dcc_row(const std::string& label, const DccFit& f) {
    std::string omega;
    for (const auto& e : f.estimates) {
        if (e.name.rfind("omega", 0) == 0) omega = estimate_cell(e);
    }
    std::string a = fixed4(f.a), b = fixed4(f.b);
    for (const auto& e : f.estimates) {
        if (e.name == "a") a = estimate_cell(e);
        if (e.name == "b") b = estimate_cell(e);
    }
    return {label, a, b, omega, fixed4(f.aic), fixed4(f.bic), fixed4(f.llh), std::to_string(f.observations),
            f.degenerate ? "degenerate" : (f.converged ? "yes" : "no")};
}

}  // namespace

int cmd_fit_dcc(const RunConfig& cfg, std::ostream& log) {
    if (!cfg.dcc) throw ConfigError("dcc: block required by fit-dcc");
    const DccConfig& d = *cfg.dcc;
    SeriesCache cache(cfg, log);
    DatedSeries ra = cache.get(d.first);
    DatedSeries rb = cache.get(d.second);
    if (ra.frequency() != Frequency::Daily || rb.frequency() != Frequency::Daily) {
        throw DataError("fit-dcc needs two daily return series");
    }
    const std::size_t na = ra.size();
    const std::size_t nb = rb.size();
    std::tie(ra, rb) = intersect_calendars(ra, rb);
    if (ra.size() != na || rb.size() != nb) {
        log << fmt::format("calendar intersection kept {} days ({} dropped from {}, {} from {})\n",
                           ra.size(), na - ra.size(), d.first, nb - rb.size(), d.second);
    }

    const UnivariateVolFit fa = first_step(d.first_step_a, ra, cache, cfg);
    const UnivariateVolFit fb = first_step(d.first_step_b, rb, cache, cfg);
    // GARCH-MIDAS burn-in shortens a residual series; align again.
    auto [xa, xb] = intersect_calendars(fa.residuals, fb.residuals);

    const opt::MaximizeOptions options = optimizer_options(cfg);
    const DccFit garch = dcc_garch_fit(xa, xb, options);
    const DccFit midas = dcc_midas_fit(xa, xb, d.midas, options);

    Json report;
    report["command"] = "fit-dcc";
    report["pair"] = {d.first, d.second};
    report["seed"] = seed_of(cfg);
    report["aligned_days"] = ra.size();
    report["dropped_days"] = {{d.first, na - ra.size()}, {d.second, nb - rb.size()}};
    report["first_step"] = {{d.first, first_step_json(fa)}, {d.second, first_step_json(fb)}};
    report["fits"] = {to_json(garch), to_json(midas)};
    report["correlations"] = "correlations.csv";
    write_json(cfg.output / "report.json", report);
    write_correlations_csv(cfg.output / "correlations.csv", correlation_report(midas));
    write_correlations_csv(cfg.output / "components" / "dcc-garch-correlations.csv",
                           correlation_report(garch));

    std::string text = format_table({"Model", "a", "b", "omega", "AIC", "BIC", "LLH", "Obs.", "Conv."},
                                    {dcc_row("DCC-GARCH", garch), dcc_row("DCC-MIDAS", midas)});
    const CorrelationReport cr = correlation_report(midas);
    text += fmt::format("\nDCC-MIDAS correlation range [{}, {}], mean {}\n", fixed4(cr.min), fixed4(cr.max),
                        fixed4(cr.mean));
    write_text(cfg.output / "comparison.txt", text);

    if (garch.degenerate || midas.degenerate) {
        log << "residual pair is perfectly correlated; correlation dynamics cannot be estimated\n";
        return kDataError;
    }
    const bool converged = fa.converged && fb.converged && garch.converged && midas.converged;
    return converged ? kOk : kConvergenceError;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    if (!cfg.simulate) throw ConfigError("simulate: block required by the simulate command");
    if (!cfg.seed) throw ConfigError("seed: required for simulation (config 'seed' or --seed)");
    const SimulateConfig& s = *cfg.simulate;
    const GarchMidasModel model = s.model();
    const GarchMidasParams params = s.params();
    MixedPanel panel;
    try {
        panel = simulate(model, params, s.spec, *cfg.seed);
    } catch (const InfeasibleParameters& e) {
        throw ConfigError(fmt::format("simulate: {}", e.what()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("simulate: {}", e.what()));
    }

    write_csv(cfg.output / "returns.csv", panel.returns_series(), "date", "value");
    Json fit_config;
    fit_config["series"]["returns"] = {{"path", "returns.csv"}, {"transform", "none"}, {"frequency", "daily"}};
    Json covariates = Json::array();
    Json truth_covs = Json::array();
    for (std::size_t j = 0; j < model.covariates.size(); ++j) {
        const auto& spec = model.covariates[j];
        const PanelCovariate& cov = panel.covariate(spec.name);
        Json weights = to_json(spec.scheme);
        truth_covs.push_back({{"name", spec.name}, {"lag", spec.lag}, {"theta", params.theta[j]}, {"weights", weights}});
        Json cj = {{"series", spec.name}, {"lag", spec.lag}, {"weights", weights}};
        covariates.push_back(cj);
        if (spec.name == kRealizedVolatility) continue;
        std::vector<Date> dates;
        for (std::size_t p = 0; p < cov.values.size(); ++p) {
            const auto offset = static_cast<int>(p) - static_cast<int>(cov.history);
            dates.push_back((s.spec.first_period + std::chrono::months{offset}) / std::chrono::day{1});
        }
        const std::string file = spec.name + ".csv";
        write_csv(cfg.output / file, DatedSeries(std::move(dates), cov.values, Frequency::Monthly), "date",
                  "value");
        fit_config["series"][spec.name] = {{"path", file}, {"transform", "none"}, {"frequency", "monthly"}};
    }
    fit_config["returns"] = "returns";
    fit_config["models"] = {{{"name", "simulated"},
                             {"covariates", covariates},
                             {"link", std::string(to_string(model.link))},
                             {"asymmetry", model.include_asymmetry}}};
    fit_config["output"] = "fit";
    fit_config["seed"] = *cfg.seed;

    Json truth;
    truth["seed"] = *cfg.seed;
    truth["periods"] = s.spec.periods;
    truth["days_per_period"] = s.spec.days_per_period;
    truth["link"] = std::string(to_string(model.link));
    truth["asymmetry"] = model.include_asymmetry;
    truth["params"] = {{"mu", params.mu}, {"alpha", params.alpha}, {"beta", params.beta},
                       {"gamma", params.gamma}, {"m", params.m}};
    truth["covariates"] = truth_covs;
    truth["days"] = panel.days();

    write_json(cfg.output / "truth.json", truth);
    write_json(cfg.output / "fit_config.json", fit_config);
    log << fmt::format("simulated {} days over {} periods into {}\n", panel.days(), panel.period_count(),
                       cfg.output.string());
    return kOk;
}

int run_command(std::string_view command, const RunConfig& cfg, int jobs, std::ostream& log) {
    try {
        if (command == "describe") return cmd_describe(cfg, log);
        if (command == "fit-garch-midas") return cmd_fit_garch_midas(cfg, jobs, log);
        if (command == "fit-dcc") return cmd_fit_dcc(cfg, log);
        if (command == "simulate") return cmd_simulate(cfg, log);
        log << fmt::format("error: unknown command '{}'\n", command);
        return kConfigError;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DataError& e) {
        log << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace midasvol::cli
