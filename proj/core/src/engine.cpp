#include "devstone/pdevs/engine.hpp"

#include <algorithm>
#include <cstdlib>

namespace pdevs {

namespace {

std::uint64_t budget_from_env() {
    const char* raw = std::getenv("DEVSTONE_MICROSTEP_BUDGET");
    if (raw == nullptr || *raw == '\0') return SimulationEngine::kDefaultTransitionBudget;
    char* end = nullptr;
    unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) {
        throw SimulationError(std::string("invalid DEVSTONE_MICROSTEP_BUDGET: ") + raw);
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace

SimulationEngine::SimulationEngine(const CoupledModel& root)
    : root_(root), budget_(budget_from_env()) {
    compile(root, 0, 0);
    root_input_base_ = nodes_[0].in_base;

    // Children are always created after their parent, so a reverse sweep
    // computes coordinator next-event times bottom-up.
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        Node& n = nodes_[i];
        if (n.atomic >= 0) continue;
        VirtualTime tn = time_infinity;
        for (std::uint32_t c : n.children) tn = std::min(tn, nodes_[c].tn);
        n.tn = tn;
    }

    // Routing closures for every message source: atomic output ports and the
    // root model's input ports (injection entry points).
    closures_.resize(port_edges_.size());
    std::vector<std::uint8_t> on_path(port_edges_.size(), 0);
    for (const AtomicSlot& a : atomics_) {
        for (std::size_t p = 0; p < a.model->output_count(); ++p) {
            build_closure(a.output_base + static_cast<std::uint32_t>(p),
                          closures_[a.output_base + p], on_path);
        }
    }
    for (std::size_t p = 0; p < root.input_count(); ++p) {
        build_closure(root_input_base_ + static_cast<std::uint32_t>(p),
                      closures_[root_input_base_ + p], on_path);
    }

    std::uint32_t max_depth = 0;
    std::size_t max_outputs = 0;
    for (const Node& n : nodes_) max_depth = std::max(max_depth, n.depth);
    for (const AtomicSlot& a : atomics_) max_outputs = std::max(max_outputs, a.model->output_count());
    dirty_by_depth_.resize(max_depth + 1);
    dirty_mark_.assign(nodes_.size(), 0);
    receiver_mark_.assign(atomics_.size(), 0);
    imminent_mark_.assign(atomics_.size(), 0);
    output_scratch_.resize(max_outputs);
}

std::uint32_t SimulationEngine::compile(const CoupledModel& model, std::uint32_t parent,
                                        std::uint32_t depth) {
    auto alloc_ports = [this](std::size_t n) {
        auto base = static_cast<std::uint32_t>(port_edges_.size());
        port_edges_.resize(port_edges_.size() + n);
        port_owner_.resize(port_owner_.size() + n, -1);
        bags_.resize(bags_.size() + n);
        return base;
    };

    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[id].parent = parent;
    nodes_[id].depth = depth;
    nodes_[id].in_base = alloc_ports(model.input_count());
    nodes_[id].out_base = alloc_ports(model.output_count());

    std::vector<std::uint32_t> child_nodes;
    child_nodes.reserve(model.components().size());
    for (const CoupledModel::Component& comp : model.components()) {
        if (std::holds_alternative<std::unique_ptr<AtomicModel>>(comp)) {
            AtomicModel* atomic = std::get<std::unique_ptr<AtomicModel>>(comp).get();
            const auto aid = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
            nodes_[aid].parent = id;
            nodes_[aid].depth = depth + 1;
            nodes_[aid].atomic = static_cast<std::int32_t>(atomics_.size());
            nodes_[aid].in_base = alloc_ports(atomic->input_count());
            nodes_[aid].out_base = alloc_ports(atomic->output_count());

            AtomicSlot slot;
            slot.model = atomic;
            slot.node = aid;
            slot.input_base = nodes_[aid].in_base;
            slot.output_base = nodes_[aid].out_base;
            const VirtualTime ta = atomic->time_advance();
            slot.tn = is_passive_time(ta) ? time_infinity : ta;
            nodes_[aid].tn = slot.tn;
            for (std::size_t p = 0; p < atomic->input_count(); ++p) {
                port_owner_[slot.input_base + p] = static_cast<std::int32_t>(atomics_.size());
            }
            atomics_.push_back(slot);
            child_nodes.push_back(aid);
        } else {
            const CoupledModel& sub = *std::get<std::unique_ptr<CoupledModel>>(comp);
            child_nodes.push_back(compile(sub, id, depth + 1));
        }
    }
    nodes_[id].children = child_nodes;

    auto resolve = [&](const PortRef& ref) -> std::uint32_t {
        const std::uint32_t node =
            ref.component == PortRef::kSelf ? id : child_nodes[ref.component];
        const std::uint32_t base =
            ref.direction == PortDirection::input ? nodes_[node].in_base : nodes_[node].out_base;
        return base + static_cast<std::uint32_t>(ref.port);
    };
    for (const Coupling& c : model.external_input_couplings()) {
        port_edges_[resolve(c.from)].push_back(resolve(c.to));
    }
    for (const Coupling& c : model.internal_couplings()) {
        port_edges_[resolve(c.from)].push_back(resolve(c.to));
    }
    for (const Coupling& c : model.external_output_couplings()) {
        port_edges_[resolve(c.from)].push_back(resolve(c.to));
    }
    return id;
}

void SimulationEngine::build_closure(std::uint32_t port, Closure& out,
                                     std::vector<std::uint8_t>& on_path) const {
    if (on_path[port]) {
        throw StructuralError("coupling cycle through port " + std::to_string(port));
    }
    if (port_owner_[port] >= 0) {
        out.targets.push_back(port);
        return;
    }
    if (port_edges_[port].empty()) {
        out.discards += 1;
        return;
    }
    on_path[port] = 1;
    for (std::uint32_t next : port_edges_[port]) {
        out.hops += 1;
        build_closure(next, out, on_path);
    }
    on_path[port] = 0;
}

void SimulationEngine::inject(const std::vector<std::size_t>& root_input_ports,
                              std::int64_t payload) {
    if (started_) throw SimulationError("inject: engine already started");
    for (std::size_t p : root_input_ports) {
        if (p >= root_.input_count()) {
            throw SimulationError("inject: port " + std::to_string(p) +
                                  " is not a root input port");
        }
    }
    for (std::size_t p : root_input_ports) {
        injections_.emplace_back(root_input_base_ + static_cast<std::uint32_t>(p), payload);
    }
}

bool SimulationEngine::halted() const {
    return injections_.empty() && is_passive_time(nodes_[0].tn);
}

VirtualTime SimulationEngine::next_event_time() const {
    return injections_.empty() ? nodes_[0].tn : VirtualTime{0.0};
}

void SimulationEngine::collect_imminent(std::uint32_t node, VirtualTime t) {
    const Node& n = nodes_[node];
    if (n.atomic >= 0) {
        imminent_mark_[static_cast<std::uint32_t>(n.atomic)] = epoch_;
        imminent_.push_back(static_cast<std::uint32_t>(n.atomic));
        return;
    }
    for (std::uint32_t c : n.children) {
        if (nodes_[c].tn == t) collect_imminent(c, t);
    }
}

void SimulationEngine::deliver(std::uint32_t source_port, std::int64_t payload) {
    const Closure& c = closures_[source_port];
    stats_.messages_routed += c.hops;
    stats_.messages_discarded += c.discards;
    for (std::uint32_t target : c.targets) {
        bags_[target].push_back(Message{payload});
        const auto aid = static_cast<std::uint32_t>(port_owner_[target]);
        if (receiver_mark_[aid] != epoch_) {
            receiver_mark_[aid] = epoch_;
            receivers_.push_back(aid);
        }
    }
}

void SimulationEngine::mark_dirty(std::uint32_t node) {
    if (dirty_mark_[node] == epoch_) return;
    dirty_mark_[node] = epoch_;
    dirty_by_depth_[nodes_[node].depth].push_back(node);
}

void SimulationEngine::refresh_coordinators() {
    for (std::size_t depth = dirty_by_depth_.size(); depth-- > 0;) {
        for (std::uint32_t node : dirty_by_depth_[depth]) {
            VirtualTime tn = time_infinity;
            for (std::uint32_t c : nodes_[node].children) tn = std::min(tn, nodes_[c].tn);
            if (tn != nodes_[node].tn) {
                nodes_[node].tn = tn;
                if (node != 0) mark_dirty(nodes_[node].parent);
            }
        }
        dirty_by_depth_[depth].clear();
    }
}

StepReport SimulationEngine::step() {
    if (halted()) throw SimulationError("step: engine is halted");
    started_ = true;
    ++epoch_;

    const VirtualTime t = injections_.empty() ? nodes_[0].tn : VirtualTime{0.0};
    imminent_.clear();
    receivers_.clear();
    if (nodes_[0].tn == t) collect_imminent(0, t);

    // Output phase: lambda for every imminent atomic, all routing completes
    // before any transition is applied.
    for (std::uint32_t aid : imminent_) {
        AtomicSlot& slot = atomics_[aid];
        const std::size_t n_out = slot.model->output_count();
        for (std::size_t p = 0; p < n_out; ++p) output_scratch_[p].clear();
        slot.model->output(std::span<MessageBag>(output_scratch_.data(), n_out));
        stats_.lambda_calls += 1;
        for (std::size_t p = 0; p < n_out; ++p) {
            for (const Message& m : output_scratch_[p]) {
                deliver(slot.output_base + static_cast<std::uint32_t>(p), m.payload);
            }
        }
    }
    for (const auto& [port, payload] : injections_) deliver(port, payload);
    injections_.clear();

    // Transition phase.
    std::size_t transitions = 0;
    auto finish = [&](std::uint32_t aid) {
        AtomicSlot& slot = atomics_[aid];
        slot.last_transition = t;
        const VirtualTime ta = slot.model->time_advance();
        slot.tn = is_passive_time(ta) ? time_infinity : t + ta;
        nodes_[slot.node].tn = slot.tn;
        mark_dirty(nodes_[slot.node].parent);
        ++transitions;
    };
    for (std::uint32_t aid : imminent_) {
        AtomicSlot& slot = atomics_[aid];
        const std::span<const MessageBag> inputs(bags_.data() + slot.input_base,
                                                 slot.model->input_count());
        if (receiver_mark_[aid] == epoch_) {
            slot.model->confluent_transition(inputs);
            stats_.confluent_transitions += 1;
        } else {
            slot.model->internal_transition();
            stats_.internal_transitions += 1;
        }
        finish(aid);
    }
    for (std::uint32_t aid : receivers_) {
        if (imminent_mark_[aid] == epoch_) continue;  // consumed by delta_con above
        AtomicSlot& slot = atomics_[aid];
        const std::span<const MessageBag> inputs(bags_.data() + slot.input_base,
                                                 slot.model->input_count());
        slot.model->external_transition(t - slot.last_transition, inputs);
        stats_.external_transitions += 1;
        finish(aid);
    }
    for (std::uint32_t aid : receivers_) {
        const AtomicSlot& slot = atomics_[aid];
        for (std::size_t p = 0; p < slot.model->input_count(); ++p) {
            bags_[slot.input_base + p].clear();
        }
    }

    refresh_coordinators();
    clock_ = t;
    stats_.final_time = t;

    if (stats_.transitions() > budget_) {
        throw SimulationError("runaway simulation: transition budget of " +
                              std::to_string(budget_) + " exceeded");
    }
    return StepReport{t, imminent_.size(), transitions};
}

SimulationStats SimulationEngine::run_to_completion() {
    while (!halted()) step();
    return stats_;
}

}  // namespace pdevs
