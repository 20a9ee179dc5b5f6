#ifndef DEVSTONE_METRIC_HPP
#define DEVSTONE_METRIC_HPP

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "devstone/devstone.hpp"
#include "devstone/pdevs/engine.hpp"

namespace devstone {

/// The fixed 12-model benchmark set, in order: LI balanced/deep/wide,
/// HI likewise, HO likewise, then HMOD (20,20), (20,4), (4,20). All with
/// zero transition delays.
std::array<Config, 12> benchmark_set();

/// Timing record for one benchmark-set entry.
struct ModelTiming {
    Config config;
    std::vector<double> times_s;  // per-replication simulation seconds
    double mean_s = 0.0;
    double ci95_s = 0.0;  // half-width; 0 when fewer than 2 samples
    pdevs::SimulationStats stats;  // from replication 1; identical across reps

    bool operator==(const ModelTiming&) const = default;
};

/// Student-t 0.975 quantile, from an embedded table for df 1..120 and the
/// normal limit 1.96 beyond.
double t_quantile_975(int df);

/// 95% confidence half-width: t * s / sqrt(n), sample standard deviation
/// with the n-1 denominator. Throws std::invalid_argument when n < 2.
double ci95(std::span<const double> samples);

/// The headline metric: 60 / total mean seconds. Throws std::invalid_argument
/// on a non-positive or non-finite total.
double devstones_per_minute(double total_mean_s);

/// Builds a fresh model and engine per replication, queues payload 0 on all
/// root input ports, and times run_to_completion only (monotonic clock).
/// Stats must be identical across replications; a mismatch throws.
/// `warmup` extra untimed replications run first (default none).
ModelTiming run_replications(const Config& config, int replications, int warmup = 0);

struct MachineInfo {
    std::string hostname;
    std::string os;
    std::string cpu;
    std::string timestamp;  // ISO 8601 UTC

    static MachineInfo detect();

    bool operator==(const MachineInfo&) const = default;
};

struct MetricReport {
    MachineInfo machine;
    std::string engine_name;
    std::string engine_version;
    int replications = 0;
    std::vector<ModelTiming> models;
    double total_mean_s = 0.0;
    double devstones_per_minute = 0.0;
    /// Half-width propagated from the total-time CI: 60 * dT / T^2.
    double devstones_ci95 = 0.0;
    std::string ci_method;
    std::map<std::string, double> breakdown_pct;  // keys LI, HI, HO, HMOD

    bool operator==(const MetricReport&) const = default;
};

/// Derives totals, the metric, its CI, and the per-type breakdown from
/// per-model timings. Exposed separately so reports can be assembled from
/// precomputed timings.
MetricReport compile_report(std::vector<ModelTiming> models, int replications);

/// Runs the full benchmark set with `replications` timed runs per model.
MetricReport run_metric(int replications, int warmup = 0);

/// Percentage of total time per model type; values sum to 100.
std::map<std::string, double> breakdown(const MetricReport& report);

}  // namespace devstone

#endif
