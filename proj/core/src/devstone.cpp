#include "devstone/devstone.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <utility>

#include "devstone/burn.hpp"

namespace devstone {

namespace {

using pdevs::CoupledModel;

std::string lower(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::optional<Type> parse_type(std::string_view text) {
    const std::string t = lower(text);
    if (t == "li") return Type::LI;
    if (t == "hi") return Type::HI;
    if (t == "ho") return Type::HO;
    if (t == "hmod" || t == "homod") return Type::HMOD;
    return std::nullopt;
}

std::string to_string(Type type) {
    switch (type) {
        case Type::LI: return "LI";
        case Type::HI: return "HI";
        case Type::HO: return "HO";
        case Type::HMOD: return "HMOD";
    }
    return "?";
}

void validate(const Config& config) {
    if (config.depth < 1) throw std::invalid_argument("devstone: depth must be >= 1");
    if (config.width < 1) throw std::invalid_argument("devstone: width must be >= 1");
    if (config.int_delay_ms < 0.0 || config.ext_delay_ms < 0.0) {
        throw std::invalid_argument("devstone: transition delays must be >= 0");
    }
}

ExpectedCounts expected_counts(const Config& config) {
    validate(config);
    const auto d = static_cast<std::int64_t>(config.depth);
    const auto w = static_cast<std::int64_t>(config.width);
    ExpectedCounts c;
    switch (config.type) {
        case Type::LI:
            c.atomics = (w - 1) * (d - 1) + 1;
            c.eic = w * (d - 1) + 1;
            c.eoc = d;
            c.ic = 0;
            c.events = (w - 1) * (d - 1) + 1;
            break;
        case Type::HI:
            c.atomics = (w - 1) * (d - 1) + 1;
            c.eic = w * (d - 1) + 1;
            c.eoc = d;
            c.ic = w > 2 ? (w - 2) * (d - 1) : 0;
            c.events = 1 + (d - 1) * ((w - 1) * w / 2);
            break;
        case Type::HO:
            c.atomics = (w - 1) * (d - 1) + 1;
            c.eic = (w + 1) * (d - 1) + 1;
            c.eoc = w * (d - 1) + 1;
            c.ic = w > 2 ? (w - 2) * (d - 1) : 0;
            c.events = 1 + (d - 1) * ((w - 1) * w / 2);
            break;
        case Type::HMOD: {
            const std::int64_t tri = (w - 1) * w / 2;
            c.atomics = (w - 1 + tri) * (d - 1) + 1;
            c.eic = (2 * (w - 1) + 1) * (d - 1) + 1;
            c.eoc = d;
            c.ic = ((w - 1) * (w - 1) + tri) * (d - 1);
            c.events = 1;
            for (std::int64_t i = 1; i <= d - 1; ++i) {
                c.events += (1 + (i - 1) * (w - 1)) * tri + (w - 1) * (w + (i - 1) * (w - 1));
            }
            break;
        }
    }
    return c;
}

// --- DevstoneAtomic -------------------------------------------------------

pdevs::VirtualTime DevstoneAtomic::time_advance() const {
    return phase_ == Phase::active ? 0.0 : pdevs::time_infinity;
}

void DevstoneAtomic::internal_transition() {
    burn_ms(int_delay_ms_);
    phase_ = Phase::passive;
}

void DevstoneAtomic::external_transition(pdevs::VirtualTime /*elapsed*/,
                                         std::span<const pdevs::MessageBag> inputs) {
    for (const pdevs::MessageBag& bag : inputs) messages_received_ += bag.size();
    burn_ms(ext_delay_ms_);
    phase_ = Phase::active;
}

void DevstoneAtomic::confluent_transition(std::span<const pdevs::MessageBag> inputs) {
    // delta_con(s, ta(s), Xb) = delta_ext(delta_int(s), 0, Xb)
    internal_transition();
    external_transition(0.0, inputs);
}

void DevstoneAtomic::output(std::span<pdevs::MessageBag> outputs) const {
    outputs[0].push_back(pdevs::Message{0});
}

// --- model generation -----------------------------------------------------

namespace {

std::unique_ptr<DevstoneAtomic> make_atomic(const Config& cfg, std::string name) {
    return std::make_unique<DevstoneAtomic>(std::move(name), cfg.int_delay_ms, cfg.ext_delay_ms);
}

std::pair<std::size_t, std::size_t> port_counts(Type type) {
    switch (type) {
        case Type::HO: return {2, 2};
        case Type::HMOD: return {2, 1};
        default: return {1, 1};
    }
}

std::unique_ptr<CoupledModel> build_level(const Config& cfg, int level) {
    const auto [n_in, n_out] = port_counts(cfg.type);
    const std::string name = to_string(cfg.type) + "_L" + std::to_string(level);
    auto coupled = std::make_unique<CoupledModel>(name, n_in, n_out);

    if (level == cfg.depth) {
        // Leaf: one atomic wired to the first input and first output port.
        const std::size_t atomic = coupled->add_component(make_atomic(cfg, name + "_A"));
        coupled->couple_input(0, atomic, 0);
        coupled->couple_output(atomic, 0, 0);
        return coupled;
    }

    const std::size_t child = coupled->add_component(build_level(cfg, level + 1));
    const int w = cfg.width;

    switch (cfg.type) {
        case Type::LI:
        case Type::HI: {
            coupled->couple_input(0, child, 0);
            coupled->couple_output(child, 0, 0);
            std::vector<std::size_t> atomics;
            for (int k = 1; k <= w - 1; ++k) {
                const std::size_t a =
                    coupled->add_component(make_atomic(cfg, name + "_A" + std::to_string(k)));
                coupled->couple_input(0, a, 0);
                atomics.push_back(a);
            }
            if (cfg.type == Type::HI) {
                for (int k = 0; k + 1 < w - 1; ++k) {
                    coupled->couple(atomics[k], 0, atomics[k + 1], 0);
                }
            }
            break;
        }
        case Type::HO: {
            coupled->couple_input(0, child, 0);
            coupled->couple_input(1, child, 1);
            coupled->couple_output(child, 0, 0);
            std::vector<std::size_t> atomics;
            for (int k = 1; k <= w - 1; ++k) {
                const std::size_t a =
                    coupled->add_component(make_atomic(cfg, name + "_A" + std::to_string(k)));
                coupled->couple_input(1, a, 0);
                coupled->couple_output(a, 0, 1);  // level out2; unconnected at parent
                atomics.push_back(a);
            }
            for (int k = 0; k + 1 < w - 1; ++k) {
                coupled->couple(atomics[k], 0, atomics[k + 1], 0);
            }
            break;
        }
        case Type::HMOD: {
            coupled->couple_input(0, child, 0);
            coupled->couple_output(child, 0, 0);
            // Row 1 holds w-1 atomics; rows 2..w hold the upper-triangular
            // arrangement, row r spanning columns r-1..w-1.
            std::vector<std::size_t> row1;
            for (int c = 1; c <= w - 1; ++c) {
                const std::size_t a = coupled->add_component(
                    make_atomic(cfg, name + "_A1_" + std::to_string(c)));
                coupled->couple_input(1, a, 0);
                row1.push_back(a);
            }
            // grid[r][c] for rows 2..w, 0 marks an empty cell.
            std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(w) + 1,
                                                       std::vector<std::size_t>(
                                                           static_cast<std::size_t>(w), 0));
            for (int r = 2; r <= w; ++r) {
                for (int c = r - 1; c <= w - 1; ++c) {
                    const std::size_t a = coupled->add_component(make_atomic(
                        cfg, name + "_A" + std::to_string(r) + "_" + std::to_string(c)));
                    grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = a;
                    if (c == r - 1) coupled->couple_input(1, a, 0);  // diagonal
                }
            }
            for (std::size_t a : row1) coupled->couple(a, 0, child, 1);
            for (int c = 1; c <= w - 1; ++c) {
                const std::size_t from = grid[2][static_cast<std::size_t>(c)];
                for (std::size_t to : row1) coupled->couple(from, 0, to, 0);
            }
            for (int r = 3; r <= w; ++r) {
                for (int c = r - 1; c <= w - 1; ++c) {
                    coupled->couple(grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                    0,
                                    grid[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c)],
                                    0);
                }
            }
            break;
        }
    }
    return coupled;
}

}  // namespace

std::unique_ptr<pdevs::CoupledModel> build(const Config& config) {
    validate(config);
    return build_level(config, 1);
}

StructuralCounts structural_counts(const pdevs::CoupledModel& model) {
    StructuralCounts c;
    c.eic += static_cast<std::int64_t>(model.external_input_couplings().size());
    c.eoc += static_cast<std::int64_t>(model.external_output_couplings().size());
    c.ic += static_cast<std::int64_t>(model.internal_couplings().size());
    for (const CoupledModel::Component& comp : model.components()) {
        if (std::holds_alternative<std::unique_ptr<pdevs::AtomicModel>>(comp)) {
            c.atomics += 1;
        } else {
            const StructuralCounts sub =
                structural_counts(*std::get<std::unique_ptr<CoupledModel>>(comp));
            c.atomics += sub.atomics;
            c.eic += sub.eic;
            c.eoc += sub.eoc;
            c.ic += sub.ic;
        }
    }
    return c;
}

pdevs::SimulationStats simulate(const Config& config) {
    const std::unique_ptr<pdevs::CoupledModel> model = build(config);
    pdevs::SimulationEngine engine(*model);
    std::vector<std::size_t> ports(model->input_count());
    for (std::size_t i = 0; i < ports.size(); ++i) ports[i] = i;
    engine.inject(ports, 0);
    return engine.run_to_completion();
}

namespace {

void check(std::vector<Mismatch>& out, const char* field, std::int64_t expected,
           std::int64_t observed) {
    if (expected != observed) out.push_back(Mismatch{field, expected, observed});
}

}  // namespace

VerifyResult verify_structure(const Config& config) {
    VerifyResult r{config, {}};
    const ExpectedCounts expected = expected_counts(config);
    const std::unique_ptr<pdevs::CoupledModel> model = build(config);
    const StructuralCounts observed = structural_counts(*model);
    check(r.mismatches, "atomics", expected.atomics, observed.atomics);
    check(r.mismatches, "eic", expected.eic, observed.eic);
    check(r.mismatches, "eoc", expected.eoc, observed.eoc);
    check(r.mismatches, "ic", expected.ic, observed.ic);
    return r;
}

VerifyResult verify_config(const Config& config) {
    VerifyResult r = verify_structure(config);
    Config zero_delay = config;
    zero_delay.int_delay_ms = 0.0;
    zero_delay.ext_delay_ms = 0.0;
    const pdevs::SimulationStats stats = simulate(zero_delay);
    check(r.mismatches, "events", expected_counts(config).events,
          static_cast<std::int64_t>(stats.lambda_calls));
    return r;
}

std::vector<VerifyResult> verify_grid(int max_depth, int max_width, int hmod_max_depth,
                                      int hmod_max_width) {
    std::vector<VerifyResult> results;
    for (Type type : {Type::LI, Type::HI, Type::HO}) {
        for (int d = 1; d <= max_depth; ++d) {
            for (int w = 1; w <= max_width; ++w) {
                results.push_back(verify_config(Config{type, d, w, 0.0, 0.0}));
            }
        }
    }
    for (int d = 1; d <= hmod_max_depth; ++d) {
        for (int w = 2; w <= hmod_max_width; ++w) {
            results.push_back(verify_config(Config{Type::HMOD, d, w, 0.0, 0.0}));
        }
    }
    return results;
}

}  // namespace devstone
