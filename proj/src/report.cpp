#include "midasvol/report.hpp"

#include "midasvol/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace midasvol {

namespace {

Json number(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json number(const std::optional<double>& v) {
    return v ? number(*v) : Json(nullptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write {}", path.string()));
    return out;
}

// Shortest round-trip representation; stable across runs.
std::string csv_number(double v) {
    return std::isfinite(v) ? fmt::format("{}", v) : "NA";
}

}  // namespace

Json to_json(const SummaryStats& s) {
    Json j;
    j["obs"] = s.n;
    j["min"] = number(s.min);
    j["max"] = number(s.max);
    j["mean"] = number(s.mean);
    j["sd"] = number(s.sd);
    j["skewness"] = number(s.skewness);
    j["excess_kurtosis"] = number(s.excess_kurtosis);
    return j;
}

Json to_json(const TestResult& t) {
    Json j;
    j["statistic"] = number(t.statistic);
    j["p_value"] = number(t.p_value);
    if (t.lags) j["lags"] = *t.lags;
    if (!t.critical_values.empty()) {
        Json cv;
        for (const char* level : {"1%", "5%", "10%"}) {
            if (auto it = t.critical_values.find(level); it != t.critical_values.end()) {
                cv[level] = number(it->second);
            }
        }
        j["critical_values"] = cv;
    }
    return j;
}

Json to_json(const Estimate& e) {
    Json j;
    j["name"] = e.name;
    j["value"] = number(e.value);
    j["std_error"] = number(e.std_error);
    j["p_value"] = number(e.p_value);
    return j;
}

Json to_json(const WeightScheme& w) {
    Json j;
    if (const auto* b = std::get_if<BetaWeights>(&w)) {
        j["kind"] = "beta";
        j["restricted"] = b->restricted;
        j["omega1"] = b->omega1;
        j["omega2"] = b->omega2;
    } else {
        j["kind"] = "exp";
        j["omega"] = std::get<ExpWeights>(w).omega;
    }
    return j;
}

Json to_json(const GarchMidasModel& m) {
    Json j;
    j["link"] = std::string(to_string(m.link));
    j["asymmetry"] = m.include_asymmetry;
    Json covs = Json::array();
    for (const auto& c : m.covariates) {
        Json cj;
        cj["name"] = c.name;
        cj["lag"] = c.lag;
        cj["weights"] = to_json(c.scheme);
        covs.push_back(cj);
    }
    j["covariates"] = covs;
    return j;
}

Json to_json(const GarchMidasFit& f) {
    Json j;
    j["model"] = to_json(f.model);
    Json est = Json::array();
    for (const auto& e : f.estimates) est.push_back(to_json(e));
    j["estimates"] = est;
    j["covariance"] = f.covariance_type;
    j["llh"] = number(f.llh);
    j["bic"] = number(f.bic);
    j["variance_ratio"] = number(f.variance_ratio);
    j["parameters"] = f.parameter_count;
    j["observations"] = f.observations;
    j["burn_in_days"] = f.first_day;
    if (!f.dates.empty()) {
        j["sample"] = {{"first", format_date(f.dates.front())}, {"last", format_date(f.dates.back())}};
    }
    j["converged"] = f.converged;
    j["iterations"] = f.iterations;
    j["gradient_norm"] = number(f.gradient_norm);
    return j;
}

Json to_json(const DccFit& f) {
    Json j;
    j["kind"] = f.kind;
    Json est = Json::array();
    for (const auto& e : f.estimates) est.push_back(to_json(e));
    j["estimates"] = est;
    j["a"] = number(f.a);
    j["b"] = number(f.b);
    if (f.weighting) j["weights"] = to_json(*f.weighting);
    if (f.midas) {
        j["window"] = f.midas->window;
        j["span"] = f.midas->span;
        j["period_length"] = f.midas->period_length;
    }
    j["unconditional_correlation"] = number(f.unconditional);
    j["llh"] = number(f.llh);
    j["aic"] = number(f.aic);
    j["bic"] = number(f.bic);
    j["parameters"] = f.parameter_count;
    j["observations"] = f.observations;
    j["converged"] = f.converged;
    j["degenerate"] = f.degenerate;
    const CorrelationReport r = correlation_report(f);
    j["rho_range"] = {{"min", number(r.min)}, {"max", number(r.max)}, {"mean", number(r.mean)}};
    return j;
}

std::string fixed4(double v) {
    if (!std::isfinite(v)) return "NA";
    std::string s = fmt::format("{:.4f}", v);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::string out;
    const auto emit = [&](const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string cell = c < row.size() ? row[c] : "";
            if (c > 0) line += "  ";
            line += c == 0 ? fmt::format("{:<{}}", cell, width[c]) : fmt::format("{:>{}}", cell, width[c]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    };
    emit(header);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    for (const auto& row : rows) emit(row);
    return out;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_for_write(path);
    out << text;
}

void write_components_csv(const std::filesystem::path& path, const GarchMidasFit& f) {
    auto out = open_for_write(path);
    out << "date,tau,g,total\n";
    for (std::size_t i = 0; i < f.tau.size(); ++i) {
        out << format_date(f.dates[i]) << ',' << csv_number(f.tau[i]) << ',' << csv_number(f.g[i])
            << ',' << csv_number(f.tau[i] * f.g[i]) << '\n';
    }
}

void write_correlations_csv(const std::filesystem::path& path, const CorrelationReport& r) {
    auto out = open_for_write(path);
    out << "date,rho,rho_bar\n";
    for (const auto& row : r.rows) {
        out << format_date(row.date) << ',' << csv_number(row.rho) << ',' << csv_number(row.rho_bar)
            << '\n';
    }
}

}  // namespace midasvol
