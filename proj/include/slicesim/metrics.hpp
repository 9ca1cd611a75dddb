#pragma once

// Per-slot records and the aggregate statistics reported for a run.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace slicesim {

struct SlotRecord {
    std::int64_t t = 0;
    std::vector<double> embb_rate_mbps;  // per eMBB user, as experienced
    double sum_rate_mbps = 0.0;
    double urllc_rate_bits = 0.0;
    int arrivals = 0;
    bool outage = false;
    int punctured = 0;                   // total punctured mini-slots
    double embb_utility = 0.0;
    double reward = 0.0;
    double phi = 0.0;
};

/// Append-only log of one run.
class MetricsLog {
public:
    void append(SlotRecord r) { records_.push_back(std::move(r)); }
    const std::vector<SlotRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    std::vector<double> sum_rates() const;
    std::vector<int> outages() const;
    /// Mean experienced rate of every user over the run (Mbit/s).
    std::vector<double> mean_user_rates() const;

private:
    std::vector<SlotRecord> records_;
};

/// (sum r)^2 / (K sum r^2); 1 for an all-zero vector. Throws on empty input.
double jain_index(std::span<const double> rates);

/// Fraction of (user, slot) pairs whose rate is at least r_min.
double embb_reliability(const MetricsLog& log, double r_min_mbps);

/// Theta(t): outage indicators of the last `window` slots divided by `window`.
std::vector<double> outage_series(std::span<const int> indicators, int window);

/// Sorted distinct values v with P[X >= v].
std::vector<std::pair<double, double>> ccdf(std::span<const double> samples);

struct Histogram {
    double start = 0.0;
    double width = 0.0;
    std::vector<double> density;  // integrates to 1
};

/// Histogram with the Freedman-Diaconis bin width 2 IQR n^(-1/3).
Histogram fd_histogram(std::span<const double> samples);

/// One row per slot, columns:
/// t,arrivals,urllc_rate_bits,outage,punctured,sum_rate_mbps,embb_utility,reward,phi,rate_0..rate_{K-1}
void write_slots_csv(const MetricsLog& log, std::ostream& out);
void write_slots_csv(const MetricsLog& log, const std::filesystem::path& path);

struct SummaryRow {
    std::string key;
    double value;
};

std::vector<SummaryRow> summarize(const MetricsLog& log, double outage_target, int window,
                                  const std::vector<double>& r_min_mbps);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// Locale-independent shortest round-trip formatting used by every CSV writer.
std::string format_number(double v);

}  // namespace slicesim
