#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace midasvol {

using Date = std::chrono::year_month_day;
using YearMonth = std::chrono::year_month;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws DataError on malformed input.
[[nodiscard]] Date parse_date(std::string_view text);
[[nodiscard]] std::string format_date(Date d);
[[nodiscard]] inline YearMonth year_month_of(Date d) { return d.year() / d.month(); }

enum class Frequency { Daily, Monthly };

[[nodiscard]] std::string_view to_string(Frequency f);
[[nodiscard]] Frequency frequency_from_string(std::string_view text);

/**
 * @brief Ordered (date, value) observations at a single frequency.
 *
 * Invariants are checked on construction: dates strictly increasing, values
 * finite, and at most one observation per calendar month for monthly series.
 * Instances are immutable.
 */
class DatedSeries {
public:
    DatedSeries() = default;
    DatedSeries(std::vector<Date> dates, std::vector<double> values, Frequency frequency);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] const std::vector<Date>& dates() const noexcept { return dates_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] Frequency frequency() const noexcept { return frequency_; }
    [[nodiscard]] Date date(std::size_t i) const { return dates_.at(i); }
    [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }

    friend bool operator==(const DatedSeries&, const DatedSeries&) = default;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
    Frequency frequency_ = Frequency::Daily;
};

struct LoadedSeries {
    DatedSeries series;
    std::size_t dropped_rows = 0;  ///< rows whose value cell was empty or NA
};

/**
 * @brief Reads a two-or-more column CSV with a header row.
 *
 * Rows are sorted ascending by date. Empty, "NA" and "NaN" value cells are
 * dropped and counted. When @p frequency is not given it is inferred: monthly
 * if no two rows share a calendar month, daily otherwise.
 *
 * @throws DataError for unreadable files, malformed rows (the 1-based line
 *         number is reported), duplicate dates, or zero usable rows.
 */
[[nodiscard]] LoadedSeries load_csv(const std::filesystem::path& path,
                                    std::string_view date_column,
                                    std::string_view value_column,
                                    std::optional<Frequency> frequency = std::nullopt);

/// Writes a (date, value) CSV with the given header names.
void write_csv(const std::filesystem::path& path, const DatedSeries& series,
               std::string_view date_header = "date", std::string_view value_header = "value");

/// value_i = ln(x_{i+1}) - ln(x_i), dated at the later observation.
[[nodiscard]] DatedSeries log_diff(const DatedSeries& s);
/// value_i = x_{i+1} - x_i, dated at the later observation.
[[nodiscard]] DatedSeries first_diff(const DatedSeries& s);

/// Restricts both series to their common dates.
[[nodiscard]] std::pair<DatedSeries, DatedSeries> intersect_calendars(const DatedSeries& a,
                                                                      const DatedSeries& b);

/**
 * @brief A low-frequency (or daily) covariate attached to a daily panel.
 *
 * `values` lives on the covariate's own period axis. For monthly covariates
 * this axis is the panel's months, optionally extended backwards by up to
 * `lag` months of pre-sample history; `history` counts those extra months.
 * For daily covariates every covariate observation is its own period.
 * `period_of_day[d]` is the index into `values` of the period containing
 * panel day d, so the k-th lag of day d is `values[period_of_day[d] - k]`.
 */
struct PanelCovariate {
    std::string name;
    Frequency frequency = Frequency::Monthly;
    int lag = 1;
    std::vector<double> values;
    std::vector<std::size_t> period_of_day;
    std::size_t history = 0;

    /// Covariate value in effect on panel day d (no interpolation).
    [[nodiscard]] double value_on_day(std::size_t d) const { return values[period_of_day[d]]; }
    /// First panel day whose full lag window X_{t-1..t-K} is available.
    [[nodiscard]] std::size_t first_complete_day() const;

    friend bool operator==(const PanelCovariate&, const PanelCovariate&) = default;
};

/**
 * @brief Daily returns aligned with mixed-frequency covariates.
 *
 * Months are the (year, month) of the trading days. `month_index[d]` is the
 * ordinal period of day d and `period_lengths[t]` is N_t.
 */
struct MixedPanel {
    std::vector<Date> day_dates;
    std::vector<double> returns;
    std::vector<std::size_t> month_index;
    std::vector<std::size_t> period_lengths;
    std::vector<YearMonth> periods;
    std::vector<PanelCovariate> covariates;
    std::size_t dropped_days = 0;  ///< return days removed because a daily covariate was missing

    [[nodiscard]] std::size_t days() const noexcept { return returns.size(); }
    [[nodiscard]] std::size_t period_count() const noexcept { return period_lengths.size(); }
    /// First day index of period t.
    [[nodiscard]] std::size_t period_start(std::size_t t) const;
    [[nodiscard]] DatedSeries returns_series() const;
    [[nodiscard]] const PanelCovariate& covariate(std::string_view name) const;
    /// Throws DataError if any structural invariant is violated.
    void check_invariants() const;

    friend bool operator==(const MixedPanel&, const MixedPanel&) = default;
};

struct CovariateInput {
    std::string name;
    DatedSeries series;
    int lag = 1;
};

/**
 * @brief Builds the mixed-frequency panel from daily returns and covariates.
 *
 * Monthly covariates are held constant across every trading day of their
 * month; a month inside the return span without a value is an error.
 * Up to K months of history before the first return month are kept as lags;
 * if less history exists the uncovered leading periods simply become burn-in.
 * Daily covariates keep their own calendar; return days without a covariate
 * observation are dropped and counted in `dropped_days`.
 */
[[nodiscard]] MixedPanel build_panel(const DatedSeries& returns,
                                     std::span<const CovariateInput> covariates);

/// Sum of squared daily returns per period, dated at each period's first trading day.
[[nodiscard]] DatedSeries realized_volatility(const MixedPanel& panel);

}  // namespace midasvol
