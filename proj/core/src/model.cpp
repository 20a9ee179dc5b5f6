#include "devstone/pdevs/model.hpp"

namespace pdevs {

namespace {

std::string endpoint_str(const CoupledModel& owner, const PortRef& ref) {
    std::string s = owner.name() + ":";
    if (ref.component == PortRef::kSelf) {
        s += "self";
    } else {
        s += "child[" + std::to_string(ref.component) + "]";
    }
    s += (ref.direction == PortDirection::input ? ".in[" : ".out[");
    s += std::to_string(ref.port) + "]";
    return s;
}

}  // namespace

std::size_t CoupledModel::add_component(std::unique_ptr<AtomicModel> atomic) {
    if (!atomic) throw StructuralError(name_ + ": null atomic component");
    components_.emplace_back(std::move(atomic));
    return components_.size() - 1;
}

std::size_t CoupledModel::add_component(std::unique_ptr<CoupledModel> coupled) {
    if (!coupled) throw StructuralError(name_ + ": null coupled component");
    components_.emplace_back(std::move(coupled));
    return components_.size() - 1;
}

std::size_t CoupledModel::component_input_count(std::size_t child) const {
    const Component& c = components_[child];
    if (std::holds_alternative<std::unique_ptr<AtomicModel>>(c))
        return std::get<std::unique_ptr<AtomicModel>>(c)->input_count();
    return std::get<std::unique_ptr<CoupledModel>>(c)->input_count();
}

std::size_t CoupledModel::component_output_count(std::size_t child) const {
    const Component& c = components_[child];
    if (std::holds_alternative<std::unique_ptr<AtomicModel>>(c))
        return std::get<std::unique_ptr<AtomicModel>>(c)->output_count();
    return std::get<std::unique_ptr<CoupledModel>>(c)->output_count();
}

void CoupledModel::require_child(std::size_t child, const char* relation) const {
    if (child >= components_.size()) {
        throw StructuralError(name_ + ": " + relation + " references nonexistent child " +
                              std::to_string(child));
    }
}

void CoupledModel::couple_input(std::size_t own_input, std::size_t child,
                                std::size_t child_input) {
    require_child(child, "EIC");
    Coupling c{{PortRef::kSelf, PortDirection::input, own_input},
               {child, PortDirection::input, child_input}};
    if (own_input >= inputs_ || child_input >= component_input_count(child)) {
        throw StructuralError("dangling EIC " + endpoint_str(*this, c.from) + " -> " +
                              endpoint_str(*this, c.to));
    }
    eic_.push_back(c);
}

void CoupledModel::couple_output(std::size_t child, std::size_t child_output,
                                 std::size_t own_output) {
    require_child(child, "EOC");
    Coupling c{{child, PortDirection::output, child_output},
               {PortRef::kSelf, PortDirection::output, own_output}};
    if (own_output >= outputs_ || child_output >= component_output_count(child)) {
        throw StructuralError("dangling EOC " + endpoint_str(*this, c.from) + " -> " +
                              endpoint_str(*this, c.to));
    }
    eoc_.push_back(c);
}

void CoupledModel::couple(std::size_t from_child, std::size_t from_output,
                          std::size_t to_child, std::size_t to_input) {
    require_child(from_child, "IC");
    require_child(to_child, "IC");
    Coupling c{{from_child, PortDirection::output, from_output},
               {to_child, PortDirection::input, to_input}};
    if (from_child == to_child) {
        throw StructuralError("self-loop IC on " + endpoint_str(*this, c.from));
    }
    if (from_output >= component_output_count(from_child) ||
        to_input >= component_input_count(to_child)) {
        throw StructuralError("dangling IC " + endpoint_str(*this, c.from) + " -> " +
                              endpoint_str(*this, c.to));
    }
    ic_.push_back(c);
}

void CoupledModel::remove_internal_coupling(std::size_t index) {
    if (index >= ic_.size()) {
        throw StructuralError(name_ + ": no internal coupling " + std::to_string(index));
    }
    ic_.erase(ic_.begin() + static_cast<std::ptrdiff_t>(index));
}

}  // namespace pdevs
