// Command-line front end: run the DEVStone metric, individual models,
// generator verification against the closed-form counts, or print the
// analytical counts themselves.
//
// Exit codes: 0 success, 1 verification/simulation failure, 2 usage error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devstone/devstone.hpp"
#include "devstone/metric.hpp"
#include "devstone/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string shape(const devstone::Config& c) {
    return devstone::to_string(c.type) + " " + std::to_string(c.depth) + "-" +
           std::to_string(c.width);
}

devstone::Type require_type(const std::string& text) {
    const std::optional<devstone::Type> type = devstone::parse_type(text);
    if (!type) throw CLI::ValidationError("--type", "unknown DEVStone type: " + text);
    return *type;
}

int cmd_metric(int reps, int warmup, const std::string& out, const std::string& format) {
    if (reps < 30) {
        std::fprintf(stderr,
                     "warning: N=%d replications; official metric runs require N >= 30\n", reps);
    }
    const devstone::MetricReport report = devstone::run_metric(reps, warmup);

    std::printf("%-12s %12s %12s %12s\n", "model", "mean_s", "ci95_s", "events");
    for (const devstone::ModelTiming& m : report.models) {
        std::printf("%-12s %12.3f %12.3f %12llu\n", shape(m.config).c_str(), m.mean_s, m.ci95_s,
                    static_cast<unsigned long long>(m.stats.lambda_calls));
    }
    std::printf("Seconds / DEVStone: %.3f\n", report.total_mean_s);
    std::printf("DEVStones / minute: %.3f ± %.3f\n", report.devstones_per_minute,
                report.devstones_ci95);
    std::printf("Breakdown %%: LI %.2f  HI %.2f  HO %.2f  HMOD %.2f\n",
                report.breakdown_pct.at("LI"), report.breakdown_pct.at("HI"),
                report.breakdown_pct.at("HO"), report.breakdown_pct.at("HMOD"));

    if (!out.empty()) {
        devstone::write_report_file(report, out, format);
        std::printf("report written to %s\n", out.c_str());
    }
    return kExitOk;
}

int cmd_run(const devstone::Config& config, int reps, bool show_stats) {
    const devstone::ModelTiming timing = devstone::run_replications(config, reps);
    if (reps >= 2) {
        std::printf("%s: mean %.3f s ± %.3f (N=%d)\n", shape(config).c_str(), timing.mean_s,
                    timing.ci95_s, reps);
    } else {
        std::printf("%s: %.3f s\n", shape(config).c_str(), timing.mean_s);
    }
    if (!show_stats) return kExitOk;

    const devstone::ExpectedCounts expected = devstone::expected_counts(config);
    const pdevs::SimulationStats& s = timing.stats;
    std::printf("lambda %llu (expected events %lld)\n",
                static_cast<unsigned long long>(s.lambda_calls),
                static_cast<long long>(expected.events));
    std::printf("transitions int %llu ext %llu con %llu\n",
                static_cast<unsigned long long>(s.internal_transitions),
                static_cast<unsigned long long>(s.external_transitions),
                static_cast<unsigned long long>(s.confluent_transitions));
    std::printf("messages routed %llu discarded %llu\n",
                static_cast<unsigned long long>(s.messages_routed),
                static_cast<unsigned long long>(s.messages_discarded));
    const bool match = static_cast<std::int64_t>(s.lambda_calls) == expected.events;
    std::printf("%s\n", match ? "MATCH" : "MISMATCH");
    return match ? kExitOk : kExitFailure;
}

int cmd_verify(int max_depth, int max_width, int hmod_max_depth, int hmod_max_width) {
    const std::vector<devstone::VerifyResult> results =
        devstone::verify_grid(max_depth, max_width, hmod_max_depth, hmod_max_width);

    // Pass/fail matrix, one row per depth per type.
    std::size_t i = 0;
    auto print_block = [&](devstone::Type type, int depths, int min_w, int widths) {
        std::printf("%s (rows depth, cols width %d..%d)\n", devstone::to_string(type).c_str(),
                    min_w, min_w + widths - 1);
        for (int d = 0; d < depths; ++d) {
            std::printf("  d=%-3d ", d + 1);
            for (int w = 0; w < widths; ++w) std::printf("%c", results[i++].ok() ? '.' : 'X');
            std::printf("\n");
        }
    };
    print_block(devstone::Type::LI, max_depth, 1, max_width);
    print_block(devstone::Type::HI, max_depth, 1, max_width);
    print_block(devstone::Type::HO, max_depth, 1, max_width);
    print_block(devstone::Type::HMOD, hmod_max_depth, 2, hmod_max_width - 1);

    int failures = 0;
    for (const devstone::VerifyResult& r : results) {
        for (const devstone::Mismatch& m : r.mismatches) {
            std::printf("MISMATCH %s: %s expected %lld observed %lld\n", shape(r.config).c_str(),
                        m.field.c_str(), static_cast<long long>(m.expected),
                        static_cast<long long>(m.observed));
            ++failures;
        }
    }
    std::printf("%zu configurations checked, %d mismatches\n", results.size(), failures);
    return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_counts(const devstone::Config& config) {
    const devstone::ExpectedCounts c = devstone::expected_counts(config);
    std::printf("%lld %lld %lld %lld %lld\n", static_cast<long long>(c.atomics),
                static_cast<long long>(c.eic), static_cast<long long>(c.eoc),
                static_cast<long long>(c.ic), static_cast<long long>(c.events));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DEVStone synthetic benchmark for PDEVS simulation"};
    app.require_subcommand(1);

    // metric
    auto* metric = app.add_subcommand("metric", "run the official 12-model DEVStone metric");
    int reps = 30;
    int warmup = 0;
    std::string out;
    std::string format = "json";
    metric->add_option("--reps", reps, "replications per model (official runs: >= 30)")
        ->check(CLI::PositiveNumber);
    metric->add_option("--warmup", warmup, "untimed warm-up replications per model")
        ->check(CLI::NonNegativeNumber);
    metric->add_option("--out", out, "write the report to this file");
    metric->add_option("--format", format, "report file format")
        ->check(CLI::IsMember({"json", "csv"}));

    // shared model options for run / counts
    std::string type_text;
    int depth = 1;
    int width = 1;
    double int_delay = 0.0;
    double ext_delay = 0.0;
    int run_reps = 1;
    bool show_stats = false;

    auto* run = app.add_subcommand("run", "run a single DEVStone model");
    run->add_option("--type", type_text, "LI | HI | HO | HMOD")->required();
    run->add_option("--depth", depth)->required()->check(CLI::PositiveNumber);
    run->add_option("--width", width)->required()->check(CLI::PositiveNumber);
    run->add_option("--int-delay", int_delay, "internal transition delay, ms")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--ext-delay", ext_delay, "external transition delay, ms")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--reps", run_reps)->check(CLI::PositiveNumber);
    run->add_flag("--stats", show_stats, "print counters and check against the formulas");

    auto* verify = app.add_subcommand("verify", "sweep the verification grid");
    int max_depth = 10;
    int max_width = 10;
    int hmod_max_depth = 6;
    int hmod_max_width = 8;
    verify->add_option("--max-depth", max_depth)->check(CLI::PositiveNumber);
    verify->add_option("--max-width", max_width)->check(CLI::PositiveNumber);
    verify->add_option("--hmod-max-depth", hmod_max_depth)->check(CLI::PositiveNumber);
    verify->add_option("--hmod-max-width", hmod_max_width)->check(CLI::PositiveNumber);

    auto* counts = app.add_subcommand("counts", "print analytical counts, no simulation");
    counts->add_option("--type", type_text, "LI | HI | HO | HMOD")->required();
    counts->add_option("--depth", depth)->required()->check(CLI::PositiveNumber);
    counts->add_option("--width", width)->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);

        if (metric->parsed()) return cmd_metric(reps, warmup, out, format);
        if (run->parsed()) {
            const devstone::Config config{require_type(type_text), depth, width, int_delay,
                                          ext_delay};
            return cmd_run(config, run_reps, show_stats);
        }
        if (verify->parsed()) {
            return cmd_verify(max_depth, max_width, hmod_max_depth, hmod_max_width);
        }
        if (counts->parsed()) {
            return cmd_counts(devstone::Config{require_type(type_text), depth, width, 0.0, 0.0});
        }
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}
