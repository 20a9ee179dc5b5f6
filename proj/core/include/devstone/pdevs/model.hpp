#ifndef DEVSTONE_PDEVS_MODEL_HPP
#define DEVSTONE_PDEVS_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pdevs {

/// Simulation time. Nonnegative, with +infinity as the passive sentinel.
using VirtualTime = double;

constexpr VirtualTime time_infinity = std::numeric_limits<VirtualTime>::infinity();

inline bool is_passive_time(VirtualTime t) { return t == time_infinity; }

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Message {
    std::int64_t payload = 0;
};

/// Multiset of messages delivered to (or emitted on) one port within a microstep.
using MessageBag = std::vector<Message>;

/// Behavioral contract of an atomic model. State lives inside the subclass;
/// the engine drives transitions and owns all timing bookkeeping.
class AtomicModel {
public:
    AtomicModel(std::string name, std::size_t inputs, std::size_t outputs)
        : name_(std::move(name)), inputs_(inputs), outputs_(outputs) {}
    virtual ~AtomicModel() = default;

    AtomicModel(const AtomicModel&) = delete;
    AtomicModel& operator=(const AtomicModel&) = delete;

    /// ta(s): time to the next internal event from the current state.
    virtual VirtualTime time_advance() const = 0;

    /// delta_int. Called when imminent with an empty input bag.
    virtual void internal_transition() = 0;

    /// delta_ext. Called with a non-empty input bag while not imminent;
    /// `elapsed` is the time since the last transition, 0 <= elapsed <= ta(s).
    virtual void external_transition(VirtualTime elapsed, std::span<const MessageBag> inputs) = 0;

    /// delta_con. Called when imminent and the input bag is non-empty.
    virtual void confluent_transition(std::span<const MessageBag> inputs) = 0;

    /// lambda. Called exactly once right before each internal or confluent
    /// transition; fills one bag per output port.
    virtual void output(std::span<MessageBag> outputs) const = 0;

    const std::string& name() const { return name_; }
    std::size_t input_count() const { return inputs_; }
    std::size_t output_count() const { return outputs_; }

private:
    std::string name_;
    std::size_t inputs_;
    std::size_t outputs_;
};

enum class PortDirection { input, output };

/// Endpoint of a coupling. `component == kSelf` refers to the coupled model's
/// own ports; any other value indexes into its component list.
struct PortRef {
    static constexpr std::size_t kSelf = static_cast<std::size_t>(-1);

    std::size_t component = kSelf;
    PortDirection direction = PortDirection::input;
    std::size_t port = 0;

    bool operator==(const PortRef&) const = default;
};

struct Coupling {
    PortRef from;
    PortRef to;
};

/// Structural composition: a component tree plus the EIC/EOC/IC relations.
/// Coupling endpoints are validated when added.
class CoupledModel {
public:
    using Component = std::variant<std::unique_ptr<AtomicModel>, std::unique_ptr<CoupledModel>>;

    CoupledModel(std::string name, std::size_t inputs, std::size_t outputs)
        : name_(std::move(name)), inputs_(inputs), outputs_(outputs) {}

    CoupledModel(const CoupledModel&) = delete;
    CoupledModel& operator=(const CoupledModel&) = delete;

    std::size_t add_component(std::unique_ptr<AtomicModel> atomic);
    std::size_t add_component(std::unique_ptr<CoupledModel> coupled);

    /// EIC: own input port -> child input port.
    void couple_input(std::size_t own_input, std::size_t child, std::size_t child_input);
    /// EOC: child output port -> own output port.
    void couple_output(std::size_t child, std::size_t child_output, std::size_t own_output);
    /// IC: child output port -> another child's input port.
    void couple(std::size_t from_child, std::size_t from_output,
                std::size_t to_child, std::size_t to_input);

    /// Removes the i-th internal coupling. Used by structural editing and
    /// fault-injection checks; counts are re-verified downstream.
    void remove_internal_coupling(std::size_t index);

    const std::string& name() const { return name_; }
    std::size_t input_count() const { return inputs_; }
    std::size_t output_count() const { return outputs_; }

    const std::vector<Component>& components() const { return components_; }
    const std::vector<Coupling>& external_input_couplings() const { return eic_; }
    const std::vector<Coupling>& external_output_couplings() const { return eoc_; }
    const std::vector<Coupling>& internal_couplings() const { return ic_; }

private:
    std::size_t component_input_count(std::size_t child) const;
    std::size_t component_output_count(std::size_t child) const;
    void require_child(std::size_t child, const char* relation) const;

    std::string name_;
    std::size_t inputs_;
    std::size_t outputs_;
    std::vector<Component> components_;
    std::vector<Coupling> eic_;
    std::vector<Coupling> eoc_;
    std::vector<Coupling> ic_;
};

}  // namespace pdevs

#endif
