#include "ghzt/protocol.hpp"

#include <algorithm>
#include <set>

namespace ghzt {

MissingClassicalBit::MissingClassicalBit(int bit_id)
    : std::runtime_error("classical bit c" + std::to_string(bit_id) + " was never delivered"),
      bit_id_(bit_id) {}

ResourceLayout ProtocolConfig::layout() const {
    return ResourceLayout::make(m, n, mode, receiver, holders);
}

void ProtocolConfig::validate() const {
    ResourceLayout lay = layout();
    MeasurementSchedule schedule = build_schedule(lay);
    std::vector<int> measured = schedule.measured_bits();
    for (int bit : withheld_bits) {
        if (std::find(measured.begin(), measured.end(), bit) == measured.end()) {
            throw std::invalid_argument("withheld bit c" + std::to_string(bit) +
                                        " is not produced by this configuration");
        }
    }
}

std::vector<int> MeasurementSchedule::measured_bits() const {
    std::vector<int> bits;
    for (const BellPairStep& p : pairs) {
        bits.push_back(p.message_qubit);
        bits.push_back(p.resource_qubit);
    }
    for (const ControllerStep& c : controllers) bits.push_back(c.qubit);
    return bits;
}

MeasurementSchedule build_schedule(const ResourceLayout& layout) {
    MeasurementSchedule schedule;
    std::set<int> paired;
    for (int j = 0; j < layout.n; ++j) {
        int holder = layout.holders[j];
        int partner = layout.mode == LayoutMode::MinimalResource ? layout.qubit_of(holder, 0)
                                                                 : layout.qubit_of(holder, j);
        schedule.pairs.push_back({j, partner, holder});
        paired.insert(partner);
    }
    for (int p = 0; p < layout.m; ++p) {
        if (p == layout.receiver) continue;
        const int instances = layout.mode == LayoutMode::MinimalResource ? 1 : layout.n;
        for (int j = 0; j < instances; ++j) {
            int q = layout.qubit_of(p, j);
            if (!paired.count(q)) schedule.controllers.push_back({p, j, q});
        }
    }
    for (int j = 0; j < layout.n; ++j) {
        CorrectionSpec spec;
        spec.instance = j;
        spec.target_qubit = layout.qubit_of(layout.receiver, j);
        spec.phase_bit = schedule.pairs[j].message_qubit;
        spec.flip_bit = schedule.pairs[j].resource_qubit;
        for (const ControllerStep& c : schedule.controllers) {
            // One shared GHZ in minimal mode carries a single relative sign,
            // so every controller bit folds into the first qubit's Z.
            int target = layout.mode == LayoutMode::MinimalResource ? 0 : c.instance;
            if (target == j) spec.xor_bits.push_back(c.qubit);
        }
        schedule.corrections.push_back(spec);
    }
    return schedule;
}

std::pair<int, int> bell_measure(StateVector& state, int message_qubit, int resource_qubit,
                                 Rng& rng) {
    state.apply_cnot(message_qubit, resource_qubit);
    state.apply_single(message_qubit, Gate::h());
    int c_phase = state.measure_z(message_qubit, rng);
    int c_flip = state.measure_z(resource_qubit, rng);
    return {c_phase, c_flip};
}

int controller_measure(StateVector& state, int qubit, Rng& rng) {
    state.apply_single(qubit, Gate::h());
    return state.measure_z(qubit, rng);
}

namespace {

int require_bit(const std::map<int, int>& bits, int id) {
    auto it = bits.find(id);
    if (it == bits.end()) throw MissingClassicalBit(id);
    return it->second;
}

struct Exponents {
    int front_z;  // Z^phase, applied last
    int x;        // X^flip
    int back_z;   // Z^(xor of controller bits), applied first
};

Exponents correction_exponents(const CorrectionSpec& spec, const std::map<int, int>& bits) {
    Exponents e;
    e.front_z = require_bit(bits, spec.phase_bit);
    e.x = require_bit(bits, spec.flip_bit);
    e.back_z = 0;
    for (int id : spec.xor_bits) e.back_z ^= require_bit(bits, id);
    return e;
}

}  // namespace

std::vector<Gate> correction_ops(const CorrectionSpec& spec, const std::map<int, int>& bits) {
    Exponents e = correction_exponents(spec, bits);
    std::vector<Gate> gates;
    if (e.x == 0) {
        if (e.front_z ^ e.back_z) gates.push_back(Gate::z());
        return gates;
    }
    if (e.back_z) gates.push_back(Gate::z());
    gates.push_back(Gate::x());
    if (e.front_z) gates.push_back(Gate::z());
    return gates;
}

std::vector<Gate> correction_ops(const ProtocolConfig& config, const std::map<int, int>& bits,
                                 int instance) {
    MeasurementSchedule schedule = build_schedule(config.layout());
    if (instance < 0 || instance >= static_cast<int>(schedule.corrections.size())) {
        throw std::out_of_range("instance out of range");
    }
    return correction_ops(schedule.corrections[instance], bits);
}

std::string correction_label(const CorrectionSpec& spec, const std::map<int, int>& bits) {
    Exponents e = correction_exponents(spec, bits);
    if (e.x == 0) return (e.front_z ^ e.back_z) ? "Z" : "I";
    std::string label;
    if (e.front_z) label += "Z";
    label += "X";
    if (e.back_z) label += "Z";
    return label;
}

std::vector<Gate> correction_ops_available(const CorrectionSpec& spec,
                                           const std::map<int, int>& bits,
                                           std::vector<int>& missing, std::vector<int>& used) {
    bool have_xor = true;
    int back_z = 0;
    for (int id : spec.xor_bits) {
        if (auto it = bits.find(id); it != bits.end()) {
            back_z ^= it->second;
        } else {
            have_xor = false;
            missing.push_back(id);
        }
    }
    auto flip_it = bits.find(spec.flip_bit);
    if (flip_it == bits.end()) missing.push_back(spec.flip_bit);
    auto phase_it = bits.find(spec.phase_bit);
    if (phase_it == bits.end()) missing.push_back(spec.phase_bit);

    if (have_xor) used.insert(used.end(), spec.xor_bits.begin(), spec.xor_bits.end());
    if (flip_it != bits.end()) used.push_back(spec.flip_bit);
    if (phase_it != bits.end()) used.push_back(spec.phase_bit);
    std::sort(used.begin(), used.end());

    const int x = flip_it != bits.end() ? flip_it->second : 0;
    const int front_z = phase_it != bits.end() ? phase_it->second : 0;
    if (!have_xor) back_z = 0;

    std::vector<Gate> gates;
    if (x == 0) {
        if (front_z ^ back_z) gates.push_back(Gate::z());
        return gates;
    }
    if (back_z) gates.push_back(Gate::z());
    gates.push_back(Gate::x());
    if (front_z) gates.push_back(Gate::z());
    return gates;
}

std::map<int, int> Transcript::measured_bits() const {
    std::map<int, int> bits;
    for (const TranscriptEvent& ev : events) {
        if (const auto* bell = std::get_if<BellOutcomeEvent>(&ev.body)) {
            bits[bell->message_qubit] = bell->phase_value;
            bits[bell->resource_qubit] = bell->flip_value;
        } else if (const auto* ctrl = std::get_if<ControllerOutcomeEvent>(&ev.body)) {
            bits[ctrl->bit] = ctrl->value;
        }
    }
    return bits;
}

std::vector<ClassicalMessage> route_bits(const ProtocolConfig& config,
                                         const Transcript& transcript) {
    // sender -> that sender's (bit, value) pairs in measurement order.
    std::map<int, std::vector<std::pair<int, int>>> outbox;
    for (const TranscriptEvent& ev : transcript.events) {
        if (const auto* bell = std::get_if<BellOutcomeEvent>(&ev.body)) {
            outbox[bell->participant].push_back({bell->message_qubit, bell->phase_value});
            outbox[bell->participant].push_back({bell->resource_qubit, bell->flip_value});
        } else if (const auto* ctrl = std::get_if<ControllerOutcomeEvent>(&ev.body)) {
            outbox[ctrl->participant].push_back({ctrl->bit, ctrl->value});
        }
    }
    int receiver = config.layout().receiver;
    std::vector<ClassicalMessage> plan;
    for (const auto& [sender, entries] : outbox) {
        for (const auto& [bit, value] : entries) {
            if (config.withheld_bits.count(bit)) continue;
            plan.push_back({bit, value, sender, {receiver}, static_cast<int>(plan.size())});
        }
    }
    return plan;
}

StateVector extract_subvector(const StateVector& state, const std::vector<int>& qubits,
                              const std::map<int, int>& fixed_bits) {
    std::uint64_t base = 0;
    for (const auto& [qubit, bit] : fixed_bits) {
        if (bit) base |= std::uint64_t{1} << qubit;
    }
    if (static_cast<int>(qubits.size() + fixed_bits.size()) != state.num_qubits()) {
        throw std::invalid_argument("subvector qubits plus fixed bits must cover the register");
    }
    std::vector<cdouble> amps(std::uint64_t{1} << qubits.size());
    for (std::uint64_t sub = 0; sub < amps.size(); ++sub) {
        std::uint64_t index = base;
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            if (sub & (std::uint64_t{1} << i)) index |= std::uint64_t{1} << qubits[i];
        }
        amps[sub] = state.amplitude(index);
    }
    return StateVector::from_amplitudes(static_cast<int>(qubits.size()), std::move(amps));
}

Transcript run_protocol(const ProtocolConfig& config, const MessageState& message) {
    config.validate();
    message.validate();
    if (message.n != config.n) {
        throw std::invalid_argument("message width does not match the configuration");
    }
    ResourceLayout layout = config.layout();
    MeasurementSchedule schedule = build_schedule(layout);

    StateVector state = compose(message, make_resource(layout));
    Rng rng(config.seed);
    Transcript transcript;
    transcript.config = config;
    std::map<int, int> bits;

    for (const BellPairStep& pair : schedule.pairs) {
        auto [c_phase, c_flip] = bell_measure(state, pair.message_qubit, pair.resource_qubit, rng);
        bits[pair.message_qubit] = c_phase;
        bits[pair.resource_qubit] = c_flip;
        transcript.events.push_back(
            {1, BellOutcomeEvent{pair.holder, pair.message_qubit, pair.resource_qubit, c_phase,
                                 c_flip}});
    }
    for (const ControllerStep& ctrl : schedule.controllers) {
        int value = controller_measure(state, ctrl.qubit, rng);
        bits[ctrl.qubit] = value;
        transcript.events.push_back({2, ControllerOutcomeEvent{ctrl.participant, ctrl.qubit, value}});
    }

    std::vector<ClassicalMessage> plan = route_bits(config, transcript);
    std::map<int, int> delivered;
    for (const ClassicalMessage& msg : plan) {
        delivered[msg.bit_id] = msg.value;
        transcript.events.push_back({3, msg});
    }

    std::vector<int> out_qubits = layout.receiver_qubits();
    transcript.receiver_state_pre = extract_subvector(state, out_qubits, bits);

    for (const CorrectionSpec& spec : schedule.corrections) {
        std::vector<int> missing;
        std::vector<int> used;
        std::vector<Gate> gates = correction_ops_available(spec, delivered, missing, used);
        for (int bit : missing) {
            transcript.events.push_back({4, MissingBitEvent{spec.target_qubit, bit}});
        }
        std::vector<std::string> names;
        for (const Gate& g : gates) {
            state.apply_single(spec.target_qubit, g);
            names.push_back(g.name());
        }
        transcript.events.push_back(
            {4, CorrectionEvent{spec.instance, spec.target_qubit, names, used}});
    }

    transcript.receiver_state_post = extract_subvector(state, out_qubits, bits);
    transcript.rho_in = DensityMatrix::from_pure(message.to_state());
    transcript.rho_out = state.reduced_density(out_qubits);
    transcript.fidelity = fidelity(*transcript.rho_in, *transcript.rho_out);
    transcript.events.push_back({4, ResultEvent{transcript.fidelity}});
    return transcript;
}

}  // namespace ghzt
