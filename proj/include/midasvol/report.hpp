#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "midasvol/dcc.hpp"
#include "midasvol/diagnostics.hpp"
#include "midasvol/garch_midas.hpp"

namespace midasvol {

using Json = nlohmann::ordered_json;

// JSON keeps full double precision so small daily-scale parameters survive;
// the text tables round to 4 decimals. NaN and missing values become null / "NA".

[[nodiscard]] Json to_json(const SummaryStats& s);
[[nodiscard]] Json to_json(const TestResult& t);
[[nodiscard]] Json to_json(const Estimate& e);
[[nodiscard]] Json to_json(const WeightScheme& w);
[[nodiscard]] Json to_json(const GarchMidasModel& m);
[[nodiscard]] Json to_json(const GarchMidasFit& f);
[[nodiscard]] Json to_json(const DccFit& f);

/// "%.4f", or "NA" for a non-finite value.
[[nodiscard]] std::string fixed4(double v);

/// Left-aligned first column, right-aligned others, two spaces between columns.
[[nodiscard]] std::string format_table(const std::vector<std::string>& header,
                                       const std::vector<std::vector<std::string>>& rows);

void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// date, tau, g, total (= tau * g) for every likelihood day.
void write_components_csv(const std::filesystem::path& path, const GarchMidasFit& f);
/// date, rho, rho_bar.
void write_correlations_csv(const std::filesystem::path& path, const CorrelationReport& r);

}  // namespace midasvol
