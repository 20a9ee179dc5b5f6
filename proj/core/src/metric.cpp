#include "devstone/metric.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace devstone {

namespace {

using Clock = std::chrono::steady_clock;

// Student-t 0.975 quantiles for df = 1..120.
constexpr std::array<double, 120> kT975 = {
    12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912,
    2.364624, 2.306004, 2.262157, 2.228139, 2.200985, 2.178813,
    2.160369, 2.144787, 2.131450, 2.119905, 2.109816, 2.100922,
    2.093024, 2.085963, 2.079614, 2.073873, 2.068658, 2.063899,
    2.059539, 2.055529, 2.051831, 2.048407, 2.045230, 2.042272,
    2.039513, 2.036933, 2.034515, 2.032245, 2.030108, 2.028094,
    2.026192, 2.024394, 2.022691, 2.021075, 2.019541, 2.018082,
    2.016692, 2.015368, 2.014103, 2.012896, 2.011741, 2.010635,
    2.009575, 2.008559, 2.007584, 2.006647, 2.005746, 2.004879,
    2.004045, 2.003241, 2.002465, 2.001717, 2.000995, 2.000298,
    1.999624, 1.998972, 1.998341, 1.997730, 1.997138, 1.996564,
    1.996008, 1.995469, 1.994945, 1.994437, 1.993943, 1.993464,
    1.992997, 1.992543, 1.992102, 1.991673, 1.991254, 1.990847,
    1.990450, 1.990063, 1.989686, 1.989319, 1.988960, 1.988610,
    1.988268, 1.987934, 1.987608, 1.987290, 1.986979, 1.986675,
    1.986377, 1.986086, 1.985802, 1.985523, 1.985251, 1.984984,
    1.984723, 1.984467, 1.984217, 1.983972, 1.983731, 1.983495,
    1.983264, 1.983038, 1.982815, 1.982597, 1.982383, 1.982173,
    1.981967, 1.981765, 1.981567, 1.981372, 1.981180, 1.980992,
    1.980808, 1.980626, 1.980448, 1.980272, 1.980100, 1.979930,
};

std::string cpu_label() {
    std::ifstream info("/proc/cpuinfo");
    std::string line;
    while (std::getline(info, line)) {
        if (line.rfind("model name", 0) == 0) {
            const std::size_t colon = line.find(':');
            if (colon != std::string::npos) {
                std::size_t start = line.find_first_not_of(" \t", colon + 1);
                if (start != std::string::npos) return line.substr(start);
            }
        }
    }
    return "unknown";
}

}  // namespace

std::array<Config, 12> benchmark_set() {
    return {{
        {Type::LI, 200, 200, 0.0, 0.0},
        {Type::LI, 200, 40, 0.0, 0.0},
        {Type::LI, 40, 200, 0.0, 0.0},
        {Type::HI, 200, 200, 0.0, 0.0},
        {Type::HI, 200, 40, 0.0, 0.0},
        {Type::HI, 40, 200, 0.0, 0.0},
        {Type::HO, 200, 200, 0.0, 0.0},
        {Type::HO, 200, 40, 0.0, 0.0},
        {Type::HO, 40, 200, 0.0, 0.0},
        {Type::HMOD, 20, 20, 0.0, 0.0},
        {Type::HMOD, 20, 4, 0.0, 0.0},
        {Type::HMOD, 4, 20, 0.0, 0.0},
    }};
}

double t_quantile_975(int df) {
    if (df < 1) throw std::invalid_argument("t_quantile_975: df must be >= 1");
    if (df > 120) return 1.96;
    return kT975[static_cast<std::size_t>(df - 1)];
}

double ci95(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("ci95: need at least 2 samples");
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                        static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return t_quantile_975(static_cast<int>(n) - 1) * sd / std::sqrt(static_cast<double>(n));
}

double devstones_per_minute(double total_mean_s) {
    if (!std::isfinite(total_mean_s) || total_mean_s <= 0.0) {
        throw std::invalid_argument("devstones_per_minute: total must be positive and finite");
    }
    return 60.0 / total_mean_s;
}

ModelTiming run_replications(const Config& config, int replications, int warmup) {
    validate(config);
    if (replications < 1) throw std::invalid_argument("run_replications: need >= 1 replication");
    if (warmup < 0) throw std::invalid_argument("run_replications: warmup must be >= 0");

    ModelTiming timing;
    timing.config = config;
    timing.times_s.reserve(static_cast<std::size_t>(replications));

    for (int rep = -warmup; rep < replications; ++rep) {
        // Model construction, engine compilation, and injection queuing are
        // all untimed; only run_to_completion is measured.
        const std::unique_ptr<pdevs::CoupledModel> model = build(config);
        pdevs::SimulationEngine engine(*model);
        std::vector<std::size_t> ports(model->input_count());
        for (std::size_t i = 0; i < ports.size(); ++i) ports[i] = i;
        engine.inject(ports, 0);

        const Clock::time_point t0 = Clock::now();
        const pdevs::SimulationStats stats = engine.run_to_completion();
        const Clock::time_point t1 = Clock::now();
        if (rep < 0) continue;

        const double seconds = std::chrono::duration<double>(t1 - t0).count();
        if (seconds < 0.0) throw std::runtime_error("monotonic clock went backwards");
        timing.times_s.push_back(seconds);
        if (rep == 0) {
            timing.stats = stats;
        } else if (!(stats == timing.stats)) {
            throw std::runtime_error("nondeterministic run: stats differ across replications of " +
                                     to_string(config.type) + " " + std::to_string(config.depth) +
                                     "-" + std::to_string(config.width));
        }
    }

    timing.mean_s = std::accumulate(timing.times_s.begin(), timing.times_s.end(), 0.0) /
                    static_cast<double>(timing.times_s.size());
    timing.ci95_s = timing.times_s.size() >= 2 ? ci95(timing.times_s) : 0.0;
    return timing;
}

MachineInfo MachineInfo::detect() {
    MachineInfo info;
    char host[256] = {};
    if (gethostname(host, sizeof(host) - 1) == 0) info.hostname = host;
    utsname uts{};
    if (uname(&uts) == 0) {
        info.os = std::string(uts.sysname) + " " + uts.release;
    }
    info.cpu = cpu_label();
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    info.timestamp = stamp;
    return info;
}

std::map<std::string, double> breakdown(const MetricReport& report) {
    std::map<std::string, double> by_type{{"LI", 0.0}, {"HI", 0.0}, {"HO", 0.0}, {"HMOD", 0.0}};
    for (const ModelTiming& m : report.models) by_type[to_string(m.config.type)] += m.mean_s;
    for (auto& [type, seconds] : by_type) seconds = 100.0 * seconds / report.total_mean_s;
    return by_type;
}

MetricReport compile_report(std::vector<ModelTiming> models, int replications) {
    MetricReport report;
    report.machine = MachineInfo::detect();
    report.engine_name = "devstone";
    report.engine_version = "1.0.0";
    report.replications = replications;
    report.models = std::move(models);

    report.total_mean_s = 0.0;
    for (const ModelTiming& m : report.models) report.total_mean_s += m.mean_s;
    report.devstones_per_minute = devstones_per_minute(report.total_mean_s);

    // CI on the metric: per-replication whole-set totals give the total-time
    // CI, then first-order propagation through 60/T.
    report.ci_method = "per-replication set totals; first-order propagation 60*dT/T^2";
    if (replications >= 2) {
        std::vector<double> totals(static_cast<std::size_t>(replications), 0.0);
        for (const ModelTiming& m : report.models) {
            for (std::size_t n = 0; n < totals.size(); ++n) totals[n] += m.times_s[n];
        }
        const double total_ci = ci95(totals);
        report.devstones_ci95 =
            60.0 * total_ci / (report.total_mean_s * report.total_mean_s);
    }
    report.breakdown_pct = breakdown(report);
    return report;
}

MetricReport run_metric(int replications, int warmup) {
    std::vector<ModelTiming> models;
    for (const Config& config : benchmark_set()) {
        models.push_back(run_replications(config, replications, warmup));
    }
    return compile_report(std::move(models), replications);
}

}  // namespace devstone
