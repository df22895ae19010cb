#include "midasvol/timeseries.hpp"

#include "midasvol/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace midasvol {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == ',' && !quoted) {
            cells.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    cells.push_back(trim(line.substr(start)));
    return cells;
}

bool is_missing(std::string_view cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null" ||
           cell == "#N/A";
}

std::string month_label(YearMonth ym) {
    return fmt::format("{:04d}-{:02d}", static_cast<int>(ym.year()),
                       static_cast<unsigned>(ym.month()));
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto parse_part = [&](std::string_view part, auto& out) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        return ec == std::errc{} && ptr == part.data() + part.size();
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_part(text.substr(0, 4), y) ||
        !parse_part(text.substr(5, 2), m) || !parse_part(text.substr(8, 2), d)) {
        throw DataError(fmt::format("malformed date '{}', expected YYYY-MM-DD", text));
    }
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw DataError(fmt::format("invalid calendar date '{}'", text));
    }
    return date;
}

std::string format_date(Date d) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()),
                       static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

std::string_view to_string(Frequency f) {
    return f == Frequency::Daily ? "daily" : "monthly";
}

Frequency frequency_from_string(std::string_view text) {
    if (text == "daily") return Frequency::Daily;
    if (text == "monthly") return Frequency::Monthly;
    throw std::invalid_argument(fmt::format("unknown frequency '{}'", text));
}

DatedSeries::DatedSeries(std::vector<Date> dates, std::vector<double> values, Frequency frequency)
    : dates_(std::move(dates)), values_(std::move(values)), frequency_(frequency) {
    if (dates_.size() != values_.size()) {
        throw std::invalid_argument("dates and values must have equal length");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError(fmt::format("non-finite value on {}", format_date(dates_[i])));
        }
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw DataError(fmt::format("dates not strictly increasing at {}",
                                        format_date(dates_[i])));
        }
        if (frequency_ == Frequency::Monthly && i > 0 &&
            year_month_of(dates_[i - 1]) == year_month_of(dates_[i])) {
            throw DataError(fmt::format("monthly series has two observations in {}",
                                        month_label(year_month_of(dates_[i]))));
        }
    }
}

LoadedSeries load_csv(const std::filesystem::path& path, std::string_view date_column,
                      std::string_view value_column, std::optional<Frequency> frequency) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(fmt::format("'{}' is empty", path.string()));
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = split_row(line);
    const auto find_column = [&](std::string_view name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DataError(fmt::format("'{}' has no column '{}'", path.string(), name));
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_idx = find_column(date_column);
    const std::size_t value_idx = find_column(value_column);

    std::vector<std::pair<Date, double>> rows;
    std::size_t dropped = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() <= std::max(date_idx, value_idx)) {
            throw DataError(fmt::format("{}:{}: expected at least {} columns", path.string(),
                                        line_no, std::max(date_idx, value_idx) + 1));
        }
        Date date;
        try {
            date = parse_date(cells[date_idx]);
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
        }
        const std::string_view cell = cells[value_idx];
        if (is_missing(cell)) {
            ++dropped;
            continue;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw DataError(
                fmt::format("{}:{}: cannot parse number '{}'", path.string(), line_no, cell));
        }
        if (!std::isfinite(value)) {
            ++dropped;
            continue;
        }
        rows.emplace_back(date, value);
    }
    if (rows.empty()) {
        throw DataError(fmt::format("'{}' has no usable rows", path.string()));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw DataError(fmt::format("'{}' has duplicate date {}", path.string(),
                                        format_date(rows[i].first)));
        }
    }

    Frequency freq = Frequency::Monthly;
    if (frequency) {
        freq = *frequency;
    } else {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (year_month_of(rows[i].first) == year_month_of(rows[i - 1].first)) {
                freq = Frequency::Daily;
                break;
            }
        }
        if (rows.size() == 1) freq = Frequency::Daily;
    }

    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(rows.size());
    values.reserve(rows.size());
    for (const auto& [d, v] : rows) {
        dates.push_back(d);
        values.push_back(v);
    }
    return {DatedSeries(std::move(dates), std::move(values), freq), dropped};
}

void write_csv(const std::filesystem::path& path, const DatedSeries& series,
               std::string_view date_header, std::string_view value_header) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError(fmt::format("cannot write '{}'", path.string()));
    }
    out << date_header << ',' << value_header << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_date(series.date(i)) << ',' << fmt::format("{:.17g}", series.value(i))
            << '\n';
    }
}

DatedSeries log_diff(const DatedSeries& s) {
    if (s.size() < 2) {
        throw DataError("log_diff needs at least two observations");
    }
    std::vector<double> out(s.size() - 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s.value(i) > 0.0)) {
            throw DataError(fmt::format("log_diff: non-positive value {} on {}", s.value(i),
                                        format_date(s.date(i))));
        }
    }
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        out[i] = std::log(s.value(i + 1)) - std::log(s.value(i));
    }
    return {std::vector<Date>(s.dates().begin() + 1, s.dates().end()), std::move(out),
            s.frequency()};
}

DatedSeries first_diff(const DatedSeries& s) {
    if (s.size() < 2) {
        throw DataError("first_diff needs at least two observations");
    }
    std::vector<double> out(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        out[i] = s.value(i + 1) - s.value(i);
    }
    return {std::vector<Date>(s.dates().begin() + 1, s.dates().end()), std::move(out),
            s.frequency()};
}

std::pair<DatedSeries, DatedSeries> intersect_calendars(const DatedSeries& a,
                                                        const DatedSeries& b) {
    if (a.frequency() != Frequency::Daily || b.frequency() != Frequency::Daily) {
        throw std::invalid_argument("intersect_calendars expects daily series");
    }
    std::vector<Date> dates;
    std::vector<double> va;
    std::vector<double> vb;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.date(i) < b.date(j)) {
            ++i;
        } else if (b.date(j) < a.date(i)) {
            ++j;
        } else {
            dates.push_back(a.date(i));
            va.push_back(a.value(i));
            vb.push_back(b.value(j));
            ++i;
            ++j;
        }
    }
    if (dates.empty()) {
        throw DataError("calendars have no common dates");
    }
    return {DatedSeries(dates, std::move(va), Frequency::Daily),
            DatedSeries(dates, std::move(vb), Frequency::Daily)};
}

std::size_t PanelCovariate::first_complete_day() const {
    const auto needed = static_cast<std::size_t>(lag);
    auto it = std::find_if(period_of_day.begin(), period_of_day.end(),
                           [&](std::size_t p) { return p >= needed; });
    return static_cast<std::size_t>(it - period_of_day.begin());
}

std::size_t MixedPanel::period_start(std::size_t t) const {
    if (t >= period_lengths.size()) {
        throw std::out_of_range("period index out of range");
    }
    return std::accumulate(period_lengths.begin(), period_lengths.begin() + t, std::size_t{0});
}

DatedSeries MixedPanel::returns_series() const {
    return {day_dates, returns, Frequency::Daily};
}

const PanelCovariate& MixedPanel::covariate(std::string_view name) const {
    for (const auto& c : covariates) {
        if (c.name == name) return c;
    }
    throw std::out_of_range(fmt::format("panel has no covariate '{}'", name));
}

void MixedPanel::check_invariants() const {
    const std::size_t n = returns.size();
    if (day_dates.size() != n || month_index.size() != n) {
        throw DataError("panel day vectors have inconsistent lengths");
    }
    if (std::accumulate(period_lengths.begin(), period_lengths.end(), std::size_t{0}) != n) {
        throw DataError("period lengths do not sum to the number of days");
    }
    if (periods.size() != period_lengths.size()) {
        throw DataError("period labels do not match period lengths");
    }
    for (std::size_t d = 0; d < n; ++d) {
        if (month_index[d] >= periods.size() || year_month_of(day_dates[d]) != periods[month_index[d]]) {
            throw DataError(fmt::format("day {} maps to the wrong period", format_date(day_dates[d])));
        }
    }
    for (const auto& c : covariates) {
        if (c.lag < 1) {
            throw DataError(fmt::format("covariate '{}' has lag < 1", c.name));
        }
        if (c.period_of_day.size() != n) {
            throw DataError(fmt::format("covariate '{}' does not cover every day", c.name));
        }
        for (std::size_t d = 0; d < n; ++d) {
            if (c.period_of_day[d] >= c.values.size()) {
                throw DataError(fmt::format("covariate '{}' has no value for {}", c.name,
                                            format_date(day_dates[d])));
            }
        }
    }
}

MixedPanel build_panel(const DatedSeries& returns, std::span<const CovariateInput> covariates) {
    if (returns.frequency() != Frequency::Daily) {
        throw std::invalid_argument("build_panel expects daily returns");
    }
    if (returns.empty()) {
        throw DataError("build_panel: empty return series");
    }
    for (const auto& c : covariates) {
        if (c.lag < 1) {
            throw std::invalid_argument(fmt::format("covariate '{}': lag must be >= 1", c.name));
        }
        if (c.series.empty()) {
            throw DataError(fmt::format("covariate '{}' is empty", c.name));
        }
    }

    // Keep only return days that every daily covariate observes.
    std::vector<std::size_t> keep;
    keep.reserve(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const Date d = returns.date(i);
        bool ok = true;
        for (const auto& c : covariates) {
            if (c.series.frequency() == Frequency::Daily &&
                !std::binary_search(c.series.dates().begin(), c.series.dates().end(), d)) {
                ok = false;
                break;
            }
        }
        if (ok) keep.push_back(i);
    }
    if (keep.empty()) {
        throw DataError("build_panel: no return day is covered by every daily covariate");
    }

    MixedPanel panel;
    panel.dropped_days = returns.size() - keep.size();
    panel.day_dates.reserve(keep.size());
    panel.returns.reserve(keep.size());
    for (std::size_t i : keep) {
        const Date d = returns.date(i);
        const YearMonth ym = year_month_of(d);
        if (panel.periods.empty() || panel.periods.back() != ym) {
            panel.periods.push_back(ym);
            panel.period_lengths.push_back(0);
        }
        ++panel.period_lengths.back();
        panel.month_index.push_back(panel.periods.size() - 1);
        panel.day_dates.push_back(d);
        panel.returns.push_back(returns.value(i));
    }

    for (const auto& input : covariates) {
        PanelCovariate cov;
        cov.name = input.name;
        cov.frequency = input.series.frequency();
        cov.lag = input.lag;
        const auto& cdates = input.series.dates();
        const auto& cvalues = input.series.values();

        if (cov.frequency == Frequency::Monthly) {
            std::map<YearMonth, double> by_month;
            for (std::size_t i = 0; i < cdates.size(); ++i) {
                by_month.emplace(year_month_of(cdates[i]), cvalues[i]);
            }
            // Consecutive pre-sample months, at most K of them.
            std::vector<double> history;
            YearMonth ym = panel.periods.front();
            for (int k = 0; k < input.lag; ++k) {
                ym -= std::chrono::months{1};
                auto it = by_month.find(ym);
                if (it == by_month.end()) break;
                history.push_back(it->second);
            }
            std::reverse(history.begin(), history.end());
            cov.history = history.size();
            cov.values = std::move(history);
            for (const YearMonth& p : panel.periods) {
                auto it = by_month.find(p);
                if (it == by_month.end()) {
                    throw DataError(fmt::format("covariate '{}' has no value for month {}",
                                                cov.name, month_label(p)));
                }
                cov.values.push_back(it->second);
            }
            cov.period_of_day.reserve(panel.days());
            for (std::size_t m : panel.month_index) {
                cov.period_of_day.push_back(cov.history + m);
            }
        } else {
            const Date last = panel.day_dates.back();
            auto end = std::upper_bound(cdates.begin(), cdates.end(), last);
            cov.values.assign(cvalues.begin(), cvalues.begin() + (end - cdates.begin()));
            auto first = std::lower_bound(cdates.begin(), cdates.end(), panel.day_dates.front());
            cov.history = static_cast<std::size_t>(first - cdates.begin());
            cov.period_of_day.reserve(panel.days());
            for (const Date& d : panel.day_dates) {
                auto it = std::lower_bound(cdates.begin(), end, d);
                cov.period_of_day.push_back(static_cast<std::size_t>(it - cdates.begin()));
            }
        }
        panel.covariates.push_back(std::move(cov));
    }
    panel.check_invariants();
    return panel;
}

DatedSeries realized_volatility(const MixedPanel& panel) {
    if (panel.period_count() == 0) {
        throw DataError("realized_volatility: panel has no periods");
    }
    std::vector<Date> dates(panel.period_count());
    std::vector<double> rv(panel.period_count(), 0.0);
    std::vector<bool> seen(panel.period_count(), false);
    for (std::size_t d = 0; d < panel.days(); ++d) {
        const std::size_t t = panel.month_index[d];
        if (!seen[t]) {
            dates[t] = panel.day_dates[d];
            seen[t] = true;
        }
        rv[t] += panel.returns[d] * panel.returns[d];
    }
    return {std::move(dates), std::move(rv), Frequency::Monthly};
}

}  // namespace midasvol
