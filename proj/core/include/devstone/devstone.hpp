#ifndef DEVSTONE_DEVSTONE_HPP
#define DEVSTONE_DEVSTONE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devstone/pdevs/engine.hpp"
#include "devstone/pdevs/model.hpp"

namespace devstone {

enum class Type { LI, HI, HO, HMOD };

/// Case-insensitive; accepts the HMod/HOmod spellings for Type::HMOD.
std::optional<Type> parse_type(std::string_view text);
std::string to_string(Type type);

/// The five parameters that uniquely define a DEVStone model.
struct Config {
    Type type = Type::LI;
    int depth = 1;
    int width = 1;
    double int_delay_ms = 0.0;
    double ext_delay_ms = 0.0;

    bool operator==(const Config&) const = default;
};

/// Throws std::invalid_argument when depth/width < 1 or a delay is negative.
void validate(const Config& config);

/// Closed-form structural and event counts for a configuration.
struct ExpectedCounts {
    std::int64_t atomics = 0;
    std::int64_t eic = 0;
    std::int64_t eoc = 0;
    std::int64_t ic = 0;
    std::int64_t events = 0;

    bool operator==(const ExpectedCounts&) const = default;
};

/// Pure function of (type, depth, width); delays are irrelevant.
ExpectedCounts expected_counts(const Config& config);

/// Builds the root coupled model of the d-level recursive structure.
/// Level 1 is the root; level d is the leaf coupled model with one atomic.
std::unique_ptr<pdevs::CoupledModel> build(const Config& config);

/// Counts observed by walking a built model tree.
struct StructuralCounts {
    std::int64_t atomics = 0;
    std::int64_t eic = 0;
    std::int64_t eoc = 0;
    std::int64_t ic = 0;
};
StructuralCounts structural_counts(const pdevs::CoupledModel& model);

/// Builds the model, injects payload 0 into every root input port, and runs
/// to completion. Build and injection are outside any timing done by callers.
pdevs::SimulationStats simulate(const Config& config);

/// One expected-vs-observed discrepancy found during verification.
struct Mismatch {
    std::string field;
    std::int64_t expected = 0;
    std::int64_t observed = 0;
};

struct VerifyResult {
    Config config;
    std::vector<Mismatch> mismatches;

    bool ok() const { return mismatches.empty(); }
};

/// Checks one configuration: structural counts from the built tree and the
/// instrumented event count from a zero-delay run, both against the
/// closed-form values.
VerifyResult verify_config(const Config& config);

/// Checks structural counts only (no run).
VerifyResult verify_structure(const Config& config);

/// The standard verification grid: {LI, HI, HO} x depth 1..max_depth x
/// width 1..max_width, plus HMOD x depth 1..hmod_max_depth x width
/// 2..hmod_max_width. Results in grid order.
std::vector<VerifyResult> verify_grid(int max_depth = 10, int max_width = 10,
                                      int hmod_max_depth = 6, int hmod_max_width = 8);

/// DEVStone atomic: passive/active two-phase behavior with configurable
/// wall-clock transition delays. One input port, one output port.
class DevstoneAtomic : public pdevs::AtomicModel {
public:
    enum class Phase { passive, active };

    DevstoneAtomic(std::string name, double int_delay_ms, double ext_delay_ms)
        : AtomicModel(std::move(name), 1, 1),
          int_delay_ms_(int_delay_ms),
          ext_delay_ms_(ext_delay_ms) {}

    pdevs::VirtualTime time_advance() const override;
    void internal_transition() override;
    void external_transition(pdevs::VirtualTime elapsed,
                             std::span<const pdevs::MessageBag> inputs) override;
    void confluent_transition(std::span<const pdevs::MessageBag> inputs) override;
    void output(std::span<pdevs::MessageBag> outputs) const override;

    Phase phase() const { return phase_; }
    /// Messages seen across the whole run; content is ignored by behavior.
    std::uint64_t messages_received() const { return messages_received_; }

private:
    Phase phase_ = Phase::passive;
    double int_delay_ms_;
    double ext_delay_ms_;
    std::uint64_t messages_received_ = 0;
};

}  // namespace devstone

#endif
