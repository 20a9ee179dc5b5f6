#ifndef DEVSTONE_PDEVS_ENGINE_HPP
#define DEVSTONE_PDEVS_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "devstone/pdevs/model.hpp"

namespace pdevs {

/// Instrumentation counters for one simulation run.
struct SimulationStats {
    std::uint64_t internal_transitions = 0;
    std::uint64_t external_transitions = 0;
    std::uint64_t confluent_transitions = 0;
    std::uint64_t lambda_calls = 0;
    /// One count per (message, coupling) routing application, including every
    /// fan-out copy at every hierarchy level.
    std::uint64_t messages_routed = 0;
    /// Messages that reached a port with no outgoing coupling and no atomic
    /// consumer (unconnected ports, root outputs).
    std::uint64_t messages_discarded = 0;
    VirtualTime final_time = 0.0;

    std::uint64_t transitions() const {
        return internal_transitions + external_transitions + confluent_transitions;
    }

    bool operator==(const SimulationStats&) const = default;
};

struct StepReport {
    VirtualTime advanced_to = 0.0;
    std::size_t imminent_count = 0;
    std::size_t transitions_applied = 0;
};

/// Sequential PDEVS abstract simulator over a coupled-model tree.
///
/// A coordinator node mirrors every coupled model and tracks the minimum
/// next-event time of its children; message routing uses per-port transitive
/// closures precomputed at construction time (construction is untimed by the
/// measurement protocol). Each microstep fires lambda for all imminent
/// atomics, routes every output, then applies delta_int / delta_ext /
/// delta_con per atomic.
///
/// The model must outlive the engine. Not thread-safe; one engine is driven
/// by one thread at a time.
class SimulationEngine {
public:
    static constexpr std::uint64_t kDefaultTransitionBudget = 10'000'000'000ULL;

    /// Compiles the model tree. Throws StructuralError on malformed
    /// couplings or routing cycles.
    explicit SimulationEngine(const CoupledModel& root);

    SimulationEngine(const SimulationEngine&) = delete;
    SimulationEngine& operator=(const SimulationEngine&) = delete;

    /// Queues one message per listed root input port for delivery at t=0,
    /// before the first microstep. Only legal before the first step.
    void inject(const std::vector<std::size_t>& root_input_ports, std::int64_t payload);

    /// Executes one microstep. Throws SimulationError when already halted.
    StepReport step();

    /// Steps until halted; returns the final counters. Throws SimulationError
    /// if the transition budget is exhausted (runaway model or kernel bug).
    SimulationStats run_to_completion();

    bool halted() const;
    VirtualTime next_event_time() const;
    VirtualTime clock() const { return clock_; }
    const SimulationStats& stats() const { return stats_; }
    std::size_t atomic_count() const { return atomics_.size(); }

    /// Overrides the runaway guard (total transitions across the run).
    /// The DEVSTONE_MICROSTEP_BUDGET environment variable, when set, replaces
    /// the default at construction.
    void set_transition_budget(std::uint64_t budget) { budget_ = budget; }

private:
    struct Node {
        std::uint32_t parent = 0;
        std::uint32_t depth = 0;
        std::int32_t atomic = -1;             // index into atomics_, -1 for coordinators
        std::uint32_t in_base = 0;            // global port id of input port 0
        std::uint32_t out_base = 0;           // global port id of output port 0
        std::vector<std::uint32_t> children;  // coordinator children, tree order
        VirtualTime tn = time_infinity;
    };

    struct AtomicSlot {
        AtomicModel* model = nullptr;
        std::uint32_t node = 0;
        std::uint32_t input_base = 0;   // global port id of input port 0
        std::uint32_t output_base = 0;  // global port id of output port 0
        VirtualTime last_transition = 0.0;
        VirtualTime tn = time_infinity;
    };

    /// Flattened routing fan-out for one source port.
    struct Closure {
        std::vector<std::uint32_t> targets;  // atomic input port ids, with multiplicity
        std::uint64_t hops = 0;              // coupling applications per message
        std::uint64_t discards = 0;          // dead-end copies per message
    };

    std::uint32_t compile(const CoupledModel& model, std::uint32_t parent, std::uint32_t depth);
    void build_closure(std::uint32_t port, Closure& out, std::vector<std::uint8_t>& on_path) const;
    void collect_imminent(std::uint32_t node, VirtualTime t);
    void deliver(std::uint32_t source_port, std::int64_t payload);
    void mark_dirty(std::uint32_t node);
    void refresh_coordinators();

    const CoupledModel& root_;
    std::vector<Node> nodes_;
    std::vector<AtomicSlot> atomics_;

    // Global port table: per-port outgoing couplings and ownership.
    std::vector<std::vector<std::uint32_t>> port_edges_;
    std::vector<std::int32_t> port_owner_;  // consuming atomic for input ports, else -1
    std::vector<Closure> closures_;         // filled for atomic outputs and root inputs
    std::uint32_t root_input_base_ = 0;

    std::vector<MessageBag> bags_;  // indexed by global port id; atomic inputs only
    std::vector<std::uint32_t> imminent_;
    std::vector<std::uint32_t> receivers_;
    std::vector<std::uint32_t> receiver_mark_;
    std::vector<std::uint32_t> imminent_mark_;
    std::uint32_t epoch_ = 0;
    std::vector<std::vector<std::uint32_t>> dirty_by_depth_;
    std::vector<std::uint32_t> dirty_mark_;
    std::vector<MessageBag> output_scratch_;

    std::vector<std::pair<std::uint32_t, std::int64_t>> injections_;
    VirtualTime clock_ = 0.0;
    bool started_ = false;
    SimulationStats stats_;
    std::uint64_t budget_ = kDefaultTransitionBudget;
};

/// Free-function spelling of the constructor.
inline SimulationEngine build_engine(const CoupledModel& root) { return SimulationEngine(root); }

}  // namespace pdevs

#endif
