#include "ghzt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ghzt {

namespace {

struct Primitive {
    enum class Kind { Cnot, Hadamard, Measure } kind;
    int a = -1;
    int b = -1;
};

// The protocol's unitaries and measurements, flattened in execution order up
// to the requested stage.
std::vector<Primitive> primitives(const MeasurementSchedule& schedule, Stage stage) {
    std::vector<Primitive> out;
    for (const BellPairStep& p : schedule.pairs) {
        out.push_back({Primitive::Kind::Cnot, p.message_qubit, p.resource_qubit});
        out.push_back({Primitive::Kind::Hadamard, p.message_qubit, -1});
        out.push_back({Primitive::Kind::Measure, p.message_qubit, -1});
        out.push_back({Primitive::Kind::Measure, p.resource_qubit, -1});
    }
    if (stage == Stage::AfterControllers) {
        for (const ControllerStep& c : schedule.controllers) {
            out.push_back({Primitive::Kind::Hadamard, c.qubit, -1});
            out.push_back({Primitive::Kind::Measure, c.qubit, -1});
        }
    }
    return out;
}

std::vector<int> unmeasured_qubits(const ResourceLayout& layout,
                                   const MeasurementSchedule& schedule, Stage stage) {
    std::vector<bool> measured(layout.total_qubits, false);
    for (const Primitive& p : primitives(schedule, stage)) {
        if (p.kind == Primitive::Kind::Measure) measured[p.a] = true;
    }
    std::vector<int> rest;
    for (int q = 0; q < layout.total_qubits; ++q) {
        if (!measured[q]) rest.push_back(q);
    }
    return rest;
}

// GHZ instance a remaining qubit belongs to, for compressing basis patterns.
int instance_of(const ResourceLayout& layout, int qubit) {
    if (layout.mode == LayoutMode::MinimalResource) {
        for (int j = 0; j < layout.n; ++j) {
            if (layout.qubit_of(layout.receiver, j) == qubit) return j;
        }
        return 0;  // the shared state has a single relative sign
    }
    return (qubit - layout.n) % layout.n;
}

void enumerate_rec(StateVector state, const std::vector<Primitive>& prims, std::size_t index,
                   std::vector<std::pair<int, int>>& bits, double probability,
                   const std::vector<int>& remaining, std::vector<OutcomeBranch>& out) {
    while (index < prims.size()) {
        const Primitive& p = prims[index];
        if (p.kind == Primitive::Kind::Cnot) {
            state.apply_cnot(p.a, p.b);
        } else if (p.kind == Primitive::Kind::Hadamard) {
            state.apply_single(p.a, Gate::h());
        } else {
            for (int bit : {0, 1}) {
                StateVector next = state;
                double branch_p;
                try {
                    branch_p = next.project_z(p.a, bit);
                } catch (const ZeroProbabilityBranch&) {
                    continue;
                }
                bits.push_back({p.a, bit});
                enumerate_rec(std::move(next), prims, index + 1, bits, probability * branch_p,
                              remaining, out);
                bits.pop_back();
            }
            return;
        }
        ++index;
    }
    std::map<int, int> fixed;
    for (const auto& [id, value] : bits) fixed[id] = value;
    out.push_back({bits, probability, extract_subvector(state, remaining, fixed), std::nullopt});
}

std::uint32_t bit_reverse(std::uint32_t value, int width) {
    std::uint32_t out = 0;
    for (int i = 0; i < width; ++i) {
        if (value & (1u << i)) out |= 1u << (width - 1 - i);
    }
    return out;
}

std::string coefficient_symbol(int n, std::uint32_t display_index) {
    static const char* kGreek[4] = {"α", "β", "γ", "δ"};
    if (n <= 2) return kGreek[display_index];
    return "a" + std::to_string(display_index);
}

}  // namespace

NonPermutation::NonPermutation(const std::string& why) : std::runtime_error(why) {}

bool SignedPermutation::is_identity() const {
    for (std::size_t j = 0; j < target.size(); ++j) {
        if (target[j] != j || phase[j] != 0) return false;
    }
    return true;
}

std::vector<OutcomeBranch> enumerate_outcomes(const ProtocolConfig& config,
                                              const MessageState& message, Stage stage) {
    config.validate();
    ResourceLayout layout = config.layout();
    if (layout.total_qubits > 18) {
        throw std::invalid_argument("exhaustive enumeration is capped at 18 qubits");
    }
    MeasurementSchedule schedule = build_schedule(layout);
    std::vector<Primitive> prims = primitives(schedule, stage);
    std::vector<int> remaining = unmeasured_qubits(layout, schedule, stage);
    std::vector<OutcomeBranch> out;
    std::vector<std::pair<int, int>> bits;
    enumerate_rec(compose(message, make_resource(layout)), prims, 0, bits, 1.0, remaining, out);
    return out;
}

SignedPermutation extract_signed_permutation(const ProtocolConfig& config,
                                             const std::vector<std::pair<int, int>>& branch_bits,
                                             Stage stage) {
    ResourceLayout layout = config.layout();
    MeasurementSchedule schedule = build_schedule(layout);
    std::vector<Primitive> prims = primitives(schedule, stage);
    std::vector<int> remaining = unmeasured_qubits(layout, schedule, stage);
    std::map<int, int> wanted;
    for (const auto& [id, value] : branch_bits) wanted[id] = value;

    SignedPermutation perm;
    perm.n = config.n;
    const std::uint64_t dim = std::uint64_t{1} << config.n;
    for (std::uint64_t j = 0; j < dim; ++j) {
        MessageState probe;
        probe.n = config.n;
        probe.amplitudes.assign(dim, cdouble(0));
        probe.amplitudes[j] = cdouble(1);
        StateVector state = compose(probe, make_resource(layout));
        std::map<int, int> fixed;
        for (const Primitive& p : prims) {
            if (p.kind == Primitive::Kind::Cnot) {
                state.apply_cnot(p.a, p.b);
            } else if (p.kind == Primitive::Kind::Hadamard) {
                state.apply_single(p.a, Gate::h());
            } else {
                auto it = wanted.find(p.a);
                if (it == wanted.end()) {
                    throw std::invalid_argument("branch does not assign bit c" +
                                                std::to_string(p.a));
                }
                try {
                    state.project_z(p.a, it->second);
                } catch (const ZeroProbabilityBranch&) {
                    throw NonPermutation("basis message " + std::to_string(j) +
                                         " cannot follow this branch: projection of qubit " +
                                         std::to_string(p.a) + " has zero probability");
                }
                fixed[p.a] = it->second;
            }
        }
        StateVector sub = extract_subvector(state, remaining, fixed);

        std::uint64_t best = 0;
        double best_mag = 0.0;
        double second = 0.0;
        for (std::uint64_t i = 0; i < sub.dim(); ++i) {
            double mag = std::abs(sub.amplitude(i));
            if (mag > best_mag) {
                second = best_mag;
                best_mag = mag;
                best = i;
            } else {
                second = std::max(second, mag);
            }
        }
        if (second > 1e-9) {
            throw NonPermutation("basis message " + std::to_string(j) +
                                 " ends in a superposition on this branch");
        }

        // Compress the surviving basis state to one bit per GHZ instance.
        std::uint32_t pattern = 0;
        std::uint32_t seen = 0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            int inst = instance_of(layout, remaining[i]);
            int bit = static_cast<int>((best >> i) & 1);
            if (seen & (1u << inst)) {
                if (static_cast<int>((pattern >> inst) & 1) != bit) {
                    throw NonPermutation("branch output is not instance-consistent");
                }
            } else {
                seen |= 1u << inst;
                if (bit) pattern |= 1u << inst;
            }
        }

        cdouble amp = sub.amplitude(best);
        const cdouble quadrants[4] = {cdouble(1, 0), cdouble(0, 1), cdouble(-1, 0), cdouble(0, -1)};
        int phase = -1;
        for (int k = 0; k < 4; ++k) {
            if (std::abs(amp - quadrants[k]) <= 1e-9) {
                phase = k;
                break;
            }
        }
        if (phase < 0) {
            throw NonPermutation("branch amplitude is not a unit phase");
        }
        perm.target.push_back(pattern);
        perm.phase.push_back(static_cast<std::int8_t>(phase));
    }

    std::vector<std::uint32_t> sorted = perm.target;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw NonPermutation("branch map is not a bijection on the message basis");
    }
    return perm;
}

VerifyReport verify_corrections(const ProtocolConfig& config) {
    VerifyReport report;
    report.message_seed = config.seed;
    MessageState message = random_message(config.n, config.seed);
    StateVector reference = message.to_state();
    MeasurementSchedule schedule = build_schedule(config.layout());

    for (const OutcomeBranch& branch : enumerate_outcomes(config, message)) {
        std::map<int, int> bits;
        for (const auto& [id, value] : branch.bits) bits[id] = value;
        StateVector corrected = branch.post_state;
        for (const CorrectionSpec& spec : schedule.corrections) {
            // post_state bit j is the receiver's instance-j qubit.
            for (const Gate& gate : correction_ops(spec, bits)) {
                corrected.apply_single(spec.instance, gate);
            }
        }
        cdouble overlap(0);
        for (std::uint64_t i = 0; i < corrected.dim(); ++i) {
            overlap += std::conj(reference.amplitude(i)) * corrected.amplitude(i);
        }
        ++report.branches_checked;
        if (1.0 - std::abs(overlap) > 1e-12) report.failures.push_back(branch.bits);
    }
    return report;
}

namespace {

std::string render_state(const SignedPermutation& perm, const ResourceLayout& layout,
                         const std::vector<int>& remaining) {
    std::string out;
    const std::uint32_t dim = 1u << perm.n;
    for (std::uint32_t display = 0; display < dim; ++display) {
        std::uint32_t j = bit_reverse(display, perm.n);
        int phase = perm.phase[j];
        bool negative = phase >= 2;
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        if (phase % 2 == 1) out += "i";
        out += coefficient_symbol(perm.n, display);
        out += "|";
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            int inst = instance_of(layout, remaining[i]);
            out += ((perm.target[j] >> inst) & 1) ? '1' : '0';
        }
        out += "⟩";
    }
    return out;
}

std::string bits_to_string(const std::vector<int>& ids, const std::map<int, int>& bits) {
    std::string s;
    for (int id : ids) s += static_cast<char>('0' + bits.at(id));
    return s;
}

}  // namespace

Table regen_table(const ProtocolConfig& config, Stage stage) {
    config.validate();
    if (config.mode != LayoutMode::Standard) {
        throw std::invalid_argument("tables are defined for the standard layout");
    }
    if (config.n > 2) {
        throw std::invalid_argument("tables render one- and two-qubit messages");
    }
    ResourceLayout layout = config.layout();
    if (layout.total_qubits > 18) {
        throw std::invalid_argument("exhaustive enumeration is capped at 18 qubits");
    }
    MeasurementSchedule schedule = build_schedule(layout);
    std::vector<int> remaining = unmeasured_qubits(layout, schedule, stage);

    // Column headers group bit ids, ascending: the 2n Bell bits, then the
    // controller bits.
    std::vector<int> bell_ids;
    for (const BellPairStep& p : schedule.pairs) {
        bell_ids.push_back(p.message_qubit);
        bell_ids.push_back(p.resource_qubit);
    }
    std::sort(bell_ids.begin(), bell_ids.end());
    std::vector<int> ctrl_ids;
    for (const ControllerStep& c : schedule.controllers) ctrl_ids.push_back(c.qubit);
    std::sort(ctrl_ids.begin(), ctrl_ids.end());

    Table table{config, stage, {}};
    const std::uint32_t bell_count = 1u << bell_ids.size();
    const std::uint32_t ctrl_count =
        stage == Stage::AfterControllers ? (1u << ctrl_ids.size()) : 1u;
    for (std::uint32_t b = 0; b < bell_count; ++b) {
        for (std::uint32_t c = 0; c < ctrl_count; ++c) {
            std::map<int, int> bits;
            // The leftmost character of a rendered bit string is the lowest
            // bit id, so it comes from the integer's most significant end.
            for (std::size_t i = 0; i < bell_ids.size(); ++i) {
                bits[bell_ids[i]] = (b >> (bell_ids.size() - 1 - i)) & 1;
            }
            if (stage == Stage::AfterControllers) {
                for (std::size_t i = 0; i < ctrl_ids.size(); ++i) {
                    bits[ctrl_ids[i]] = (c >> (ctrl_ids.size() - 1 - i)) & 1;
                }
            }
            std::vector<std::pair<int, int>> branch(bits.begin(), bits.end());
            SignedPermutation perm = extract_signed_permutation(config, branch, stage);

            TableRow row;
            row.bits = bits_to_string(bell_ids, bits);
            row.state = render_state(perm, layout, remaining);
            if (stage == Stage::AfterControllers) {
                row.controllers = bits_to_string(ctrl_ids, bits);
                std::string label;
                for (const CorrectionSpec& spec : schedule.corrections) {
                    if (!label.empty()) label += "⊗";
                    label += correction_label(spec, bits);
                }
                row.correction = label;
            }
            table.rows.push_back(row);
        }
    }
    return table;
}

std::string to_text(const Table& table) {
    const bool post = table.stage == Stage::AfterControllers;
    std::vector<std::vector<std::string>> cells;
    cells.push_back(post ? std::vector<std::string>{"bits", "controllers", "state", "correction"}
                         : std::vector<std::string>{"bits", "state"});
    for (const TableRow& row : table.rows) {
        if (post) {
            cells.push_back({row.bits, row.controllers, row.state, row.correction});
        } else {
            cells.push_back({row.bits, row.state});
        }
    }
    std::vector<std::size_t> widths(cells[0].size(), 0);
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            if (i + 1 < row.size()) out += std::string(widths[i] - row[i].size() + 2, ' ');
        }
        out += "\n";
    }
    return out;
}

std::string to_markdown(const Table& table) {
    // Ket bars would otherwise terminate the table cell.
    auto escape = [](const std::string& cell) {
        std::string out;
        for (char c : cell) {
            if (c == '|') out += '\\';
            out += c;
        }
        return out;
    };
    const bool post = table.stage == Stage::AfterControllers;
    std::string out = post ? "| bits | controllers | state | correction |\n|---|---|---|---|\n"
                           : "| bits | state |\n|---|---|\n";
    for (const TableRow& row : table.rows) {
        if (post) {
            out += "| " + row.bits + " | " + row.controllers + " | " + escape(row.state) + " | " +
                   row.correction + " |\n";
        } else {
            out += "| " + row.bits + " | " + escape(row.state) + " |\n";
        }
    }
    return out;
}

AuditReport fidelity_audit(const ProtocolConfig& config, int trials, std::uint64_t seed,
                           const std::optional<MessageState>& fixed_message) {
    if (trials < 1) throw std::invalid_argument("audit needs at least one trial");
    AuditReport report;
    report.config = config;
    report.trials = trials;
    double sum = 0.0;
    report.min_fidelity = 1.0;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t base = seed + 2 * static_cast<std::uint64_t>(t);
        MessageState message =
            fixed_message ? *fixed_message : random_message(config.n, splitmix64(base));
        ProtocolConfig trial_config = config;
        trial_config.seed = splitmix64(base + 1);
        Transcript transcript = run_protocol(trial_config, message);
        report.fidelities.push_back(transcript.fidelity);
        report.min_fidelity = std::min(report.min_fidelity, transcript.fidelity);
        sum += transcript.fidelity;
    }
    report.mean_fidelity = sum / trials;
    return report;
}

double branch_average_fidelity(const ProtocolConfig& config, const MessageState& message) {
    MeasurementSchedule schedule = build_schedule(config.layout());
    StateVector reference = message.to_state();
    double total_p = 0.0;
    double mean = 0.0;
    for (const OutcomeBranch& branch : enumerate_outcomes(config, message)) {
        std::map<int, int> delivered;
        for (const auto& [id, value] : branch.bits) {
            if (!config.withheld_bits.count(id)) delivered[id] = value;
        }
        StateVector corrected = branch.post_state;
        for (const CorrectionSpec& spec : schedule.corrections) {
            std::vector<int> missing;
            std::vector<int> used;
            for (const Gate& gate : correction_ops_available(spec, delivered, missing, used)) {
                corrected.apply_single(spec.instance, gate);
            }
        }
        mean += branch.probability * pure_fidelity(reference, corrected);
        total_p += branch.probability;
    }
    if (std::abs(total_p - 1.0) > 1e-10) {
        throw std::logic_error("branch probabilities do not sum to 1");
    }
    return mean;
}

}  // namespace ghzt
