#include "cli/config.hpp"

#include "midasvol/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace midasvol::cli {

std::string_view to_string(Transform t) {
    switch (t) {
        case Transform::None: return "none";
        case Transform::LogDiff: return "log-diff";
        case Transform::FirstDiff: return "first-diff";
    }
    return "none";
}

std::string_view to_string(CovariateForm f) {
    return f == CovariateForm::Level ? "level" : "volatility";
}

std::string CovariateConfig::label() const {
    if (series == kRealizedVolatility) return series;
    return form == CovariateForm::Level ? series : series + "-vol";
}

Link ModelConfig::effective_link() const {
    if (link) return *link;
    if (covariates.size() == 1 && covariates.front().series == kRealizedVolatility) {
        return Link::Identity;
    }
    return Link::Log;
}

GarchMidasModel SimulateConfig::model() const {
    GarchMidasModel m;
    m.link = link;
    m.include_asymmetry = asymmetry;
    for (const auto& c : covariates) m.covariates.push_back(c.spec);
    return m;
}

GarchMidasParams SimulateConfig::params() const {
    GarchMidasParams p;
    p.mu = mu;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = asymmetry ? gamma : 0.0;
    p.m = m;
    for (const auto& c : covariates) {
        p.theta.push_back(c.theta);
        p.weighting.push_back(c.spec.scheme);
    }
    return p;
}

const SeriesConfig& RunConfig::find_series(std::string_view name) const {
    for (const auto& s : series) {
        if (s.name == name) return s;
    }
    throw ConfigError(fmt::format("unknown series '{}'", name));
}

namespace {

// Typed field access with the JSON path in every error message.
class Node {
public:
    Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] const Json& raw() const { return j_; }
    [[nodiscard]] bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    [[nodiscard]] Node at(const char* key) const {
        if (!has(key)) fail(fmt::format("{}: missing required field '{}'", path_, key));
        return {j_.at(key), join(key)};
    }
    [[nodiscard]] Node at(std::size_t i) const { return {j_.at(i), fmt::format("{}[{}]", path_, i)}; }

    [[nodiscard]] std::string str() const {
        if (!j_.is_string()) fail(fmt::format("{}: expected a string", path_));
        return j_.get<std::string>();
    }
    [[nodiscard]] double num() const {
        if (!j_.is_number()) fail(fmt::format("{}: expected a number", path_));
        return j_.get<double>();
    }
    [[nodiscard]] int integer() const {
        if (!j_.is_number_integer()) fail(fmt::format("{}: expected an integer", path_));
        return j_.get<int>();
    }
    [[nodiscard]] bool boolean() const {
        if (!j_.is_boolean()) fail(fmt::format("{}: expected true or false", path_));
        return j_.get<bool>();
    }
    [[nodiscard]] std::size_t size() const {
        if (!j_.is_array()) fail(fmt::format("{}: expected an array", path_));
        return j_.size();
    }
    void require_object() const {
        if (!j_.is_object()) fail(fmt::format("{}: expected an object", path_));
    }

    std::string str_or(const char* key, std::string fallback) const {
        return has(key) ? at(key).str() : fallback;
    }
    double num_or(const char* key, double fallback) const { return has(key) ? at(key).num() : fallback; }
    int int_or(const char* key, int fallback) const { return has(key) ? at(key).integer() : fallback; }
    bool bool_or(const char* key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }

    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(message); }

private:
    [[nodiscard]] std::string join(const char* key) const {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }
    const Json& j_;
    std::string path_;
};

Transform parse_transform(const Node& n) {
    const std::string t = n.str();
    if (t == "none") return Transform::None;
    if (t == "log-diff") return Transform::LogDiff;
    if (t == "first-diff") return Transform::FirstDiff;
    n.fail(fmt::format("{}: unknown transform '{}' (none | log-diff | first-diff)", n.path(), t));
}

Link parse_link(const Node& n) {
    const std::string t = n.str();
    if (t == "identity") return Link::Identity;
    if (t == "log") return Link::Log;
    n.fail(fmt::format("{}: unknown link '{}' (identity | log)", n.path(), t));
}

CovariateForm parse_form(const Node& n) {
    const std::string t = n.str();
    if (t == "level") return CovariateForm::Level;
    if (t == "volatility") return CovariateForm::Volatility;
    n.fail(fmt::format("{}: unknown form '{}' (level | volatility)", n.path(), t));
}

WeightScheme parse_weights(const Node& n) {
    if (n.raw().is_string()) {
        const std::string kind = n.str();
        if (kind == "beta") return BetaWeights{1.0, 3.0, true};
        if (kind == "beta-unrestricted") return BetaWeights{1.5, 3.0, false};
        if (kind == "exp") return ExpWeights{0.5};
        n.fail(fmt::format("{}: unknown weights '{}' (beta | beta-unrestricted | exp)", n.path(), kind));
    }
    n.require_object();
    const std::string kind = n.str_or("kind", "beta");
    WeightScheme w;
    if (kind == "beta") {
        const bool restricted = n.bool_or("restricted", true);
        w = BetaWeights{restricted ? 1.0 : n.num_or("omega1", 1.5), n.num_or("omega2", 3.0), restricted};
    } else if (kind == "exp") {
        w = ExpWeights{n.num_or("omega", 0.5)};
    } else {
        n.fail(fmt::format("{}.kind: unknown weights '{}' (beta | exp)", n.path(), kind));
    }
    try {
        validate(w);
    } catch (const std::invalid_argument& e) {
        n.fail(fmt::format("{}: {}", n.path(), e.what()));
    }
    return w;
}

int parse_lag(const Node& parent, int fallback) {
    const int lag = parent.int_or("lag", fallback);
    if (lag < 1) parent.fail(fmt::format("{}.lag: must be >= 1", parent.path()));
    return lag;
}

std::optional<int> parse_ar_order(const Node& parent) {
    if (!parent.has("ar_order")) return std::nullopt;
    const int p = parent.at("ar_order").integer();
    if (p < 0) parent.fail(fmt::format("{}.ar_order: must be >= 0", parent.path()));
    return p;
}

CovariateConfig parse_covariate(const Node& n) {
    CovariateConfig c;
    if (n.raw().is_string()) {
        c.series = n.str();
        return c;
    }
    n.require_object();
    c.series = n.at("series").str();
    if (n.has("form")) c.form = parse_form(n.at("form"));
    c.lag = parse_lag(n, 12);
    if (n.has("weights")) c.scheme = parse_weights(n.at("weights"));
    c.ar_order = parse_ar_order(n);
    return c;
}

ModelConfig parse_model(const Node& n) {
    n.require_object();
    ModelConfig m;
    const Node covs = n.at("covariates");
    const std::size_t count = covs.size();
    if (count == 0 || count > 2) {
        n.fail(fmt::format("{}.covariates: a model takes one or two covariates, got {}", n.path(), count));
    }
    for (std::size_t i = 0; i < count; ++i) m.covariates.push_back(parse_covariate(covs.at(i)));
    if (n.has("link")) m.link = parse_link(n.at("link"));
    m.asymmetry = n.bool_or("asymmetry", true);
    m.robust = n.bool_or("robust", false);
    std::string fallback;
    for (const auto& c : m.covariates) fallback += (fallback.empty() ? "" : "+") + c.label();
    m.name = n.str_or("name", fallback);
    return m;
}

std::vector<ModelConfig> expand_grid(const Node& n) {
    n.require_object();
    const Node covs = n.at("covariates");
    std::vector<CovariateForm> forms{CovariateForm::Level};
    if (n.has("forms")) {
        forms.clear();
        const Node f = n.at("forms");
        for (std::size_t i = 0; i < f.size(); ++i) forms.push_back(parse_form(f.at(i)));
    }
    const int lag = parse_lag(n, 12);
    const WeightScheme scheme = n.has("weights") ? parse_weights(n.at("weights")) : WeightScheme{BetaWeights{1.0, 3.0, true}};
    const std::optional<int> ar_order = parse_ar_order(n);
    std::optional<CovariateConfig> partner;
    if (n.has("pair_with")) partner = parse_covariate(n.at("pair_with"));

    std::vector<ModelConfig> out;
    for (CovariateForm form : forms) {
        for (std::size_t i = 0; i < covs.size(); ++i) {
            CovariateConfig c;
            c.series = covs.at(i).str();
            c.form = form;
            c.lag = lag;
            c.scheme = scheme;
            c.ar_order = ar_order;
            ModelConfig m;
            if (partner) m.covariates.push_back(*partner);
            m.covariates.push_back(c);
            if (n.has("link")) m.link = parse_link(n.at("link"));
            m.asymmetry = n.bool_or("asymmetry", true);
            m.robust = n.bool_or("robust", false);
            for (const auto& cc : m.covariates) m.name += (m.name.empty() ? "" : "+") + cc.label();
            out.push_back(std::move(m));
        }
    }
    return out;
}

FirstStepConfig parse_first_step(const Node& n) {
    FirstStepConfig f;
    if (n.raw().is_string()) {
        if (n.str() != "garch11") {
            n.fail(fmt::format("{}: a string first step must be \"garch11\"; give a model object for GARCH-MIDAS",
                               n.path()));
        }
        return f;
    }
    f.garch_midas = parse_model(n);
    return f;
}

CovariateGenerator parse_generator(const Node& n) {
    n.require_object();
    const std::string kind = n.at("kind").str();
    if (kind == "rv") return RealizedVolatilityCovariate{};
    if (kind == "ar1") {
        Ar1Covariate g{n.num_or("mean", 0.0), n.num_or("phi", 0.9), n.num_or("sd", 1.0)};
        if (!(std::abs(g.phi) < 1.0) || g.sd < 0.0) {
            n.fail(fmt::format("{}: ar1 needs |phi| < 1 and sd >= 0", n.path()));
        }
        return g;
    }
    if (kind == "log_ar1") {
        // Given by the level's mean and sd rather than the log process.
        const double mean = n.num_or("mean", 20.0);
        const double sd = n.num_or("sd", 10.0);
        const double phi = n.num_or("phi", 0.9);
        if (!(mean > 0.0) || !(sd > 0.0) || !(std::abs(phi) < 1.0)) {
            n.fail(fmt::format("{}: log_ar1 needs mean > 0, sd > 0 and |phi| < 1", n.path()));
        }
        return LogAr1Covariate::with_moments(mean, sd, phi);
    }
    if (kind == "constant") return ConstantCovariate{n.num_or("value", 0.0)};
    n.fail(fmt::format("{}.kind: unknown generator '{}' (rv | ar1 | log_ar1 | constant)", n.path(),
                       kind));
}

YearMonth parse_year_month(const Node& n) {
    const std::string text = n.str();
    try {
        return year_month_of(parse_date(text.size() == 7 ? text + "-01" : text));
    } catch (const DataError&) {
        n.fail(fmt::format("{}: expected YYYY-MM, got '{}'", n.path(), text));
    }
}

SimulateConfig parse_simulate(const Node& n) {
    n.require_object();
    SimulateConfig s;
    if (n.has("link")) s.link = parse_link(n.at("link"));
    s.asymmetry = n.bool_or("asymmetry", true);
    if (n.has("params")) {
        const Node p = n.at("params");
        p.require_object();
        s.mu = p.num_or("mu", s.mu);
        s.alpha = p.num_or("alpha", s.alpha);
        s.beta = p.num_or("beta", s.beta);
        s.gamma = p.num_or("gamma", s.gamma);
        s.m = p.num_or("m", s.m);
    }
    const int periods = n.int_or("periods", 240);
    const int days = n.int_or("days_per_period", 22);
    if (periods < 1) n.fail(fmt::format("{}.periods: must be >= 1", n.path()));
    if (days < 1 || days > 28) n.fail(fmt::format("{}.days_per_period: must lie in 1..28", n.path()));
    s.spec.periods = static_cast<std::size_t>(periods);
    s.spec.days_per_period = static_cast<std::size_t>(days);
    if (n.has("first_period")) s.spec.first_period = parse_year_month(n.at("first_period"));

    const Node covs = n.at("covariates");
    if (covs.size() == 0 || covs.size() > 2) {
        n.fail(fmt::format("{}.covariates: one or two covariates required", n.path()));
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < covs.size(); ++i) {
        const Node c = covs.at(i);
        c.require_object();
        SimulateCovariate sc;
        sc.spec.name = c.at("name").str();
        sc.spec.lag = parse_lag(c, 12);
        sc.spec.scheme = c.has("weights") ? parse_weights(c.at("weights")) : WeightScheme{BetaWeights{1.0, 1.4, true}};
        sc.theta = c.num_or("theta", 0.0);
        sc.generator = parse_generator(c.at("generator"));
        const bool is_rv = std::holds_alternative<RealizedVolatilityCovariate>(sc.generator);
        if (is_rv != (sc.spec.name == kRealizedVolatility)) {
            c.fail(fmt::format("{}: the name \"RV\" is reserved for, and required by, the rv generator",
                               c.path()));
        }
        if (!names.insert(sc.spec.name).second) {
            c.fail(fmt::format("{}.name: duplicate covariate '{}'", c.path(), sc.spec.name));
        }
        s.spec.generators.push_back(sc.generator);
        s.covariates.push_back(std::move(sc));
    }
    return s;
}

}  // namespace

RunConfig parse_config(const Json& j, const std::filesystem::path& base_dir) {
    const Node root(j, "");
    root.require_object();
    RunConfig cfg;

    if (root.has("series")) {
        const Node series = root.at("series");
        series.require_object();
        for (const auto& [name, _] : series.raw().items()) {
            const Node s = series.at(name.c_str());
            s.require_object();
            if (name == kRealizedVolatility) {
                s.fail(fmt::format("{}: \"RV\" is reserved for the realized volatility of the returns", s.path()));
            }
            SeriesConfig sc;
            sc.name = name;
            sc.path = s.at("path").str();
            if (sc.path.is_relative()) sc.path = base_dir / sc.path;
            sc.date_column = s.str_or("date_column", "date");
            sc.value_column = s.str_or("value_column", "value");
            if (s.has("frequency")) {
                try {
                    sc.frequency = frequency_from_string(s.at("frequency").str());
                } catch (const std::exception&) {
                    s.fail(fmt::format("{}.frequency: expected daily or monthly", s.path()));
                }
            }
            if (s.has("transform")) sc.transform = parse_transform(s.at("transform"));
            cfg.series.push_back(std::move(sc));
        }
    }
    const auto known = [&](const std::string& name) {
        return name == kRealizedVolatility ||
               std::any_of(cfg.series.begin(), cfg.series.end(), [&](const SeriesConfig& s) { return s.name == name; });
    };

    if (root.has("returns")) {
        cfg.returns = root.at("returns").str();
        if (!known(cfg.returns) || cfg.returns == kRealizedVolatility) {
            root.fail(fmt::format("returns: unknown series '{}'", cfg.returns));
        }
    }

    if (root.has("describe")) {
        const Node d = root.at("describe");
        d.require_object();
        if (d.has("series")) {
            const Node list = d.at("series");
            for (std::size_t i = 0; i < list.size(); ++i) {
                const std::string name = list.at(i).str();
                if (!known(name) || name == kRealizedVolatility) {
                    list.at(i).fail(fmt::format("{}: unknown series '{}'", list.at(i).path(), name));
                }
                cfg.describe.series.push_back(name);
            }
        }
        cfg.describe.ljung_box_lags = d.int_or("ljung_box_lags", 20);
        cfg.describe.arch_lags = d.int_or("arch_lags", 20);
        if (d.has("adf_regression")) {
            try {
                cfg.describe.adf = adf_regression_from_string(d.at("adf_regression").str());
            } catch (const ConfigError& e) {
                d.fail(fmt::format("describe.adf_regression: {}", e.what()));
            }
        }
    }

    if (root.has("models")) {
        const Node models = root.at("models");
        for (std::size_t i = 0; i < models.size(); ++i) cfg.models.push_back(parse_model(models.at(i)));
    }
    if (root.has("grid")) {
        for (auto& m : expand_grid(root.at("grid"))) cfg.models.push_back(std::move(m));
    }
    std::set<std::string> model_names;
    for (std::size_t i = 0; i < cfg.models.size(); ++i) {
        const auto& m = cfg.models[i];
        if (!model_names.insert(m.name).second) {
            root.fail(fmt::format("models[{}].name: duplicate model name '{}'", i, m.name));
        }
        for (std::size_t k = 0; k < m.covariates.size(); ++k) {
            if (!known(m.covariates[k].series)) {
                root.fail(fmt::format("models[{}].covariates[{}].series: unknown series '{}'", i, k,
                                      m.covariates[k].series));
            }
        }
    }

    if (root.has("dcc")) {
        const Node d = root.at("dcc");
        d.require_object();
        DccConfig dc;
        const Node pair = d.at("pair");
        if (pair.size() != 2) d.fail("dcc.pair: expected two series names");
        dc.first = pair.at(std::size_t{0}).str();
        dc.second = pair.at(1).str();
        for (const auto& name : {dc.first, dc.second}) {
            if (!known(name) || name == kRealizedVolatility) {
                d.fail(fmt::format("dcc.pair: unknown series '{}'", name));
            }
        }
        if (d.has("first_step")) {
            const Node fs = d.at("first_step");
            fs.require_object();
            if (fs.has(dc.first.c_str())) dc.first_step_a = parse_first_step(fs.at(dc.first.c_str()));
            if (fs.has(dc.second.c_str())) dc.first_step_b = parse_first_step(fs.at(dc.second.c_str()));
        }
        dc.midas.window = d.int_or("window", 22);
        dc.midas.span = d.int_or("span", 24);
        dc.midas.period_length = d.int_or("period_length", 22);
        if (dc.midas.window < 2) d.fail("dcc.window: must be >= 2");
        if (dc.midas.span < 1) d.fail("dcc.span: must be >= 1");
        if (dc.midas.period_length < 1) d.fail("dcc.period_length: must be >= 1");
        if (d.has("weights")) dc.midas.scheme = parse_weights(d.at("weights"));
        cfg.dcc = std::move(dc);
    }

    if (root.has("simulate")) cfg.simulate = parse_simulate(root.at("simulate"));

    if (root.has("output")) {
        cfg.output = root.at("output").str();
        if (cfg.output.is_relative()) cfg.output = base_dir / cfg.output;
    } else {
        cfg.output = base_dir / "out";
    }
    if (root.has("seed")) {
        const Json& s = root.at("seed").raw();
        if (!s.is_number_unsigned()) root.fail("seed: expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    cfg.starts = root.int_or("starts", 5);
    if (cfg.starts < 5) root.fail("starts: at least 5 optimizer starts are required");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("{}: invalid JSON ({})", path.string(), e.what()));
    }
    return parse_config(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace midasvol::cli
