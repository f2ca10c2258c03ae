#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ghzt/resource.hpp"

// The teleportation session itself: who measures what, in which round, and
// which classical bits feed each receiver-side correction.
//
// Rounds are fixed: (1) holders Bell-measure their message qubits against
// their paired resource qubits, ascending message qubit; (2) every remaining
// non-receiver resource qubit is measured in the X basis (H then Z),
// ascending participant then instance; (3) measured bits are routed to the
// receiver, sender-FIFO; (4) the receiver applies per-qubit corrections,
// ascending instance.  Classical bit k is the outcome of measuring qubit k.

namespace ghzt {

class MissingClassicalBit : public std::runtime_error {
  public:
    explicit MissingClassicalBit(int bit_id);
    int bit_id() const { return bit_id_; }

  private:
    int bit_id_;
};

struct ProtocolConfig {
    int m = 3;
    int n = 1;
    LayoutMode mode = LayoutMode::Standard;
    int receiver = -1;          // -1 selects m-1
    std::vector<int> holders;   // empty selects the mode's default allocation
    std::uint64_t seed = 0;
    std::set<int> withheld_bits;

    ResourceLayout layout() const;
    void validate() const;
};

// One Bell measurement: message qubit against its paired resource qubit.
struct BellPairStep {
    int message_qubit;
    int resource_qubit;
    int holder;
};

struct ControllerStep {
    int participant;
    int instance;  // GHZ instance the qubit belongs to; 0 in minimal mode
    int qubit;
};

// Everything the receiver needs for the correction of one output qubit:
// Z^phase * X^flip * Z^(xor of the controller bits), applied right to left.
struct CorrectionSpec {
    int instance;
    int target_qubit;
    int phase_bit;
    int flip_bit;
    std::vector<int> xor_bits;
};

struct MeasurementSchedule {
    std::vector<BellPairStep> pairs;
    std::vector<ControllerStep> controllers;
    std::vector<CorrectionSpec> corrections;

    // Bit ids in measurement order: pair bits (phase then flip) per pair,
    // then controller bits.
    std::vector<int> measured_bits() const;
};

MeasurementSchedule build_schedule(const ResourceLayout& layout);

// CNOT(message -> resource), H on the message qubit, then measure both.
// Returns (c_phase, c_flip) = (message-qubit outcome, resource-qubit outcome).
std::pair<int, int> bell_measure(StateVector& state, int message_qubit, int resource_qubit,
                                 Rng& rng);

// H then a Z measurement; the controller's vote on the branch sign.
int controller_measure(StateVector& state, int qubit, Rng& rng);

// Correction gates for one output qubit, in application order, XOR-folded
// (so at most 3 gates, and a lone Z*Z collapses to nothing).  Throws
// MissingClassicalBit if any required bit is absent from `bits`.
std::vector<Gate> correction_ops(const CorrectionSpec& spec, const std::map<int, int>& bits);
std::vector<Gate> correction_ops(const ProtocolConfig& config, const std::map<int, int>& bits,
                                 int instance);

// Product-notation name of the same correction: "I", "Z", "X", "XZ", "ZX"
// or "ZXZ", with Z*Z folded away exactly as the gate sequence folds it.
std::string correction_label(const CorrectionSpec& spec, const std::map<int, int>& bits);

// Same correction built from a partial bit set: factors whose bits are
// absent are dropped, their ids appended to `missing`; `used` collects the
// ids actually consumed.  Identical to correction_ops when nothing is
// missing.
std::vector<Gate> correction_ops_available(const CorrectionSpec& spec,
                                           const std::map<int, int>& bits,
                                           std::vector<int>& missing, std::vector<int>& used);

struct ClassicalMessage {
    int bit_id;
    int value;
    int sender;
    std::vector<int> recipients;
    int sequence_no;
};

struct BellOutcomeEvent {
    int participant;
    int message_qubit;
    int resource_qubit;
    int phase_value;
    int flip_value;
};

struct ControllerOutcomeEvent {
    int participant;
    int bit;
    int value;
};

struct CorrectionEvent {
    int instance;
    int qubit;
    std::vector<std::string> gates;
    std::vector<int> used_bits;
};

struct MissingBitEvent {
    int qubit;
    int bit;
};

struct ResultEvent {
    double fidelity;
};

struct TranscriptEvent {
    int round;
    std::variant<BellOutcomeEvent, ControllerOutcomeEvent, ClassicalMessage, CorrectionEvent,
                 MissingBitEvent, ResultEvent>
        body;
};

struct Transcript {
    ProtocolConfig config;
    std::vector<TranscriptEvent> events;
    double fidelity = 0.0;

    // Receiver-register states around round 4 and the density matrices the
    // final fidelity was computed from.  Kept for verification and drawing;
    // the JSON serialization embeds the density matrices in the result event.
    std::optional<StateVector> receiver_state_pre;
    std::optional<StateVector> receiver_state_post;
    std::optional<DensityMatrix> rho_in;
    std::optional<DensityMatrix> rho_out;

    // bit id -> measured value, collected from rounds 1 and 2.
    std::map<int, int> measured_bits() const;
};

// Delivery plan: every measured, non-withheld bit goes to the receiver and
// nobody else.  Senders are drained in ascending order, each FIFO.
std::vector<ClassicalMessage> route_bits(const ProtocolConfig& config,
                                         const Transcript& transcript);

// Runs the full session.  Corrections whose bits were withheld lose exactly
// the affected factors; each absent bit is recorded as a missing-bit event.
// The final fidelity compares the message density matrix against the
// receiver's reduced output.
Transcript run_protocol(const ProtocolConfig& config, const MessageState& message);

// Reads the state of `qubits` (result bit i = qubits[i]) out of a state
// whose remaining qubits are collapsed to the basis values in `fixed_bits`.
StateVector extract_subvector(const StateVector& state, const std::vector<int>& qubits,
                              const std::map<int, int>& fixed_bits);

}  // namespace ghzt
