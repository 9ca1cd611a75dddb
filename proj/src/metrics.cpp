#include "slicesim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace slicesim {

std::vector<double> MetricsLog::sum_rates() const {
    std::vector<double> v;
    v.reserve(records_.size());
    for (const auto& r : records_) v.push_back(r.sum_rate_mbps);
    return v;
}

std::vector<int> MetricsLog::outages() const {
    std::vector<int> v;
    v.reserve(records_.size());
    for (const auto& r : records_) v.push_back(r.outage ? 1 : 0);
    return v;
}

std::vector<double> MetricsLog::mean_user_rates() const {
    if (records_.empty()) return {};
    std::vector<double> mean(records_.front().embb_rate_mbps.size(), 0.0);
    for (const auto& r : records_)
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += r.embb_rate_mbps[k];
    for (double& m : mean) m /= static_cast<double>(records_.size());
    return mean;
}

double jain_index(std::span<const double> rates) {
    if (rates.empty()) throw std::invalid_argument("jain_index: empty rate vector");
    double sum = 0.0, sq = 0.0;
    for (double r : rates) {
        sum += r;
        sq += r * r;
    }
    if (sq == 0.0) return 1.0;
    return sum * sum / (static_cast<double>(rates.size()) * sq);
}

double embb_reliability(const MetricsLog& log, double r_min_mbps) {
    std::size_t hit = 0, total = 0;
    for (const auto& r : log.records()) {
        for (double v : r.embb_rate_mbps) {
            hit += v >= r_min_mbps;
            ++total;
        }
    }
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

std::vector<double> outage_series(std::span<const int> indicators, int window) {
    if (window < 1) throw std::invalid_argument("outage_series: window must be >= 1");
    std::vector<double> out;
    out.reserve(indicators.size());
    int count = 0;
    for (std::size_t t = 0; t < indicators.size(); ++t) {
        count += indicators[t];
        if (t >= static_cast<std::size_t>(window)) count -= indicators[t - window];
        out.push_back(static_cast<double>(count) / window);
    }
    return out;
}

std::vector<std::pair<double, double>> ccdf(std::span<const double> samples) {
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    std::vector<std::pair<double, double>> out;
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && s[i] == s[i - 1]) continue;
        out.emplace_back(s[i], static_cast<double>(s.size() - i) / n);
    }
    return out;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Histogram fd_histogram(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("fd_histogram: no samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double lo = s.front(), hi = s.back();
    const double iqr = quantile(s, 0.75) - quantile(s, 0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    if (!(width > 0.0)) width = hi > lo ? (hi - lo) : 1.0;
    const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / width)));
    Histogram h{lo, width, std::vector<double>(bins, 0.0)};
    for (double v : s) {
        auto i = static_cast<std::size_t>((v - lo) / width);
        h.density[std::min(i, bins - 1)] += 1.0;
    }
    for (double& d : h.density) d /= static_cast<double>(s.size()) * width;
    return h;
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, end);
}

void write_slots_csv(const MetricsLog& log, std::ostream& out) {
    const std::size_t K = log.size() ? log.records().front().embb_rate_mbps.size() : 0;
    out << "t,arrivals,urllc_rate_bits,outage,punctured,sum_rate_mbps,embb_utility,reward,phi";
    for (std::size_t k = 0; k < K; ++k) out << ",rate_" << k;
    out << '\n';
    for (const auto& r : log.records()) {
        out << r.t << ',' << r.arrivals << ',' << format_number(r.urllc_rate_bits) << ',' << (r.outage ? 1 : 0) << ','
            << r.punctured << ',' << format_number(r.sum_rate_mbps) << ',' << format_number(r.embb_utility) << ','
            << format_number(r.reward) << ',' << format_number(r.phi);
        for (double v : r.embb_rate_mbps) out << ',' << format_number(v);
        out << '\n';
    }
}

void write_slots_csv(const MetricsLog& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_slots_csv(log, out);
}

std::vector<SummaryRow> summarize(const MetricsLog& log, double outage_target, int window,
                                  const std::vector<double>& r_min_mbps) {
    std::vector<SummaryRow> rows;
    const auto n = static_cast<double>(log.size());
    rows.push_back({"slots", n});
    if (log.size() == 0) return rows;

    const auto sums = log.sum_rates();
    const double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / n;
    double var = 0.0;
    for (double s : sums) var += (s - mean) * (s - mean);
    rows.push_back({"mean_sum_rate_mbps", mean});
    rows.push_back({"std_sum_rate_mbps", std::sqrt(var / n)});

    const auto users = log.mean_user_rates();
    rows.push_back({"jain_mean_rates", jain_index(users)});

    const auto outages = log.outages();
    const double outage_rate = std::accumulate(outages.begin(), outages.end(), 0.0) / n;
    rows.push_back({"outage_rate", outage_rate});
    const auto theta = outage_series(outages, window);
    const std::size_t q3 = theta.size() * 3 / 4;
    const double tail_max = *std::max_element(theta.begin() + static_cast<std::ptrdiff_t>(q3), theta.end());
    rows.push_back({"final_quartile_max_outage", tail_max});
    rows.push_back({"final_quartile_within_target", tail_max <= outage_target ? 1.0 : 0.0});

    double punctured = 0.0, reward = 0.0, utility = 0.0;
    for (const auto& r : log.records()) {
        punctured += r.punctured;
        reward += r.reward;
        utility += r.embb_utility;
    }
    rows.push_back({"mean_punctured", punctured / n});
    rows.push_back({"mean_embb_utility", utility / n});
    rows.push_back({"mean_reward", reward / n});
    rows.push_back({"final_phi", log.records().back().phi});
    for (double r : r_min_mbps) rows.push_back({"reliability_at_" + format_number(r) + "_mbps", embb_reliability(log, r)});
    return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "metric,value\n";
    for (const auto& r : rows) out << r.key << ',' << format_number(r.value) << '\n';
}

}  // namespace slicesim
