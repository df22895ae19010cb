#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "midasvol/dcc.hpp"
#include "midasvol/diagnostics.hpp"
#include "midasvol/garch_midas.hpp"
#include "midasvol/report.hpp"

namespace midasvol::cli {

/// Covariate name that always means the in-sample monthly realized volatility of the returns.
inline constexpr std::string_view kRealizedVolatility = "RV";

enum class Transform { None, LogDiff, FirstDiff };

struct SeriesConfig {
    std::string name;
    std::filesystem::path path;
    std::string date_column = "date";
    std::string value_column = "value";
    std::optional<Frequency> frequency;
    Transform transform = Transform::None;
};

/// A covariate enters as its (transformed) level or as its AR(p) squared-residual volatility.
enum class CovariateForm { Level, Volatility };

struct CovariateConfig {
    std::string series;
    CovariateForm form = CovariateForm::Level;
    int lag = 12;
    WeightScheme scheme = BetaWeights{1.0, 3.0, true};
    std::optional<int> ar_order;  ///< volatility form only; BIC choice when absent

    [[nodiscard]] std::string label() const;
};

struct ModelConfig {
    std::string name;
    std::vector<CovariateConfig> covariates;
    std::optional<Link> link;  ///< default: identity for RV alone, log otherwise
    bool asymmetry = true;
    bool robust = false;

    [[nodiscard]] Link effective_link() const;
};

struct DescribeConfig {
    std::vector<std::string> series;  ///< empty: every configured series
    int ljung_box_lags = 20;
    int arch_lags = 20;
    AdfRegression adf = AdfRegression::Constant;
};

struct FirstStepConfig {
    std::optional<ModelConfig> garch_midas;  ///< absent: GARCH(1,1)
};

struct DccConfig {
    std::string first;
    std::string second;
    FirstStepConfig first_step_a;
    FirstStepConfig first_step_b;
    DccMidasSpec midas;
};

struct SimulateCovariate {
    CovariateSpec spec;
    double theta = 0.0;
    CovariateGenerator generator;
};

struct SimulateConfig {
    Link link = Link::Identity;
    bool asymmetry = true;
    double mu = 0.0;
    double alpha = 0.08;
    double beta = 0.86;
    double gamma = 0.0;
    double m = 0.5;
    std::vector<SimulateCovariate> covariates;
    SimulationSpec spec;

    [[nodiscard]] GarchMidasModel model() const;
    [[nodiscard]] GarchMidasParams params() const;
};

struct RunConfig {
    std::vector<SeriesConfig> series;
    std::string returns;  ///< series modelled by fit-garch-midas
    DescribeConfig describe;
    std::vector<ModelConfig> models;  ///< explicit blocks followed by grid expansions
    std::optional<DccConfig> dcc;
    std::optional<SimulateConfig> simulate;
    std::filesystem::path output = "out";
    std::optional<std::uint64_t> seed;
    int starts = 5;

    [[nodiscard]] const SeriesConfig& find_series(std::string_view name) const;
};

/// Parses and validates a config; relative paths resolve against `base_dir`.
/// Throws ConfigError with the offending field path.
[[nodiscard]] RunConfig parse_config(const Json& j, const std::filesystem::path& base_dir);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

[[nodiscard]] std::string_view to_string(Transform t);
[[nodiscard]] std::string_view to_string(CovariateForm f);

}  // namespace midasvol::cli
