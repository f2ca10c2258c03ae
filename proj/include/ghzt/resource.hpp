#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ghzt/qstate.hpp"

// Entanglement resources and message preparation.
//
// Global register order for a session with m participants (participant 0
// sends, higher indices relay or receive) and an n-qubit message:
//   qubits 0 .. n-1                    the message register
//   Standard / DistributedMessage:     participant p holds qubits
//                                      (p+1)*n + j for instance j, so the n
//                                      GHZ instances interleave and instance
//                                      j's qubits are congruent to j mod n
//   MinimalResource:                   one shared GHZ; each non-receiver
//                                      holds a single qubit, the receiver
//                                      holds n
// Classical bit ids reuse this numbering: bit k is the outcome of measuring
// qubit k, so ids never need a second translation table.

namespace ghzt {

enum class LayoutMode { Standard, DistributedMessage, MinimalResource };

const char* to_string(LayoutMode mode);
LayoutMode layout_mode_from_string(const std::string& name);

struct ResourceLayout {
    int m = 0;
    int n = 0;
    LayoutMode mode = LayoutMode::Standard;
    int receiver = 0;
    // holder[j] = participant holding message qubit j.
    std::vector<int> holders;
    int total_qubits = 0;

    // Validates all constraints.  receiver < 0 selects the default (m-1);
    // an empty holder list selects the mode's default allocation.
    static ResourceLayout make(int m, int n, LayoutMode mode, int receiver = -1,
                               std::vector<int> holders = {});

    // Global index of participant p's resource qubit for instance j.
    // Non-receivers in MinimalResource mode own one qubit (j must be 0).
    int qubit_of(int participant, int instance) const;

    int num_resource_qubits() const { return total_qubits - n; }
    std::vector<int> receiver_qubits() const;

    // Map view of the allocation: participant -> message qubits held.
    std::map<int, std::vector<int>> message_allocation() const;
};

// |0...0> + |1...1> over `size` qubits, normalized.  size >= 2.
StateVector make_ghz(int size);

// The full entanglement resource for a layout, as a state over qubits
// n .. total_qubits-1 (local qubit k is global qubit n + k).
StateVector make_resource(const ResourceLayout& layout);

struct MessageState {
    int n = 0;
    std::vector<cdouble> amplitudes;

    StateVector to_state() const;
    static MessageState from_state(const StateVector& state);
    // Throws std::invalid_argument on size or norm violations.
    void validate() const;
};

// Haar-random n-qubit message: 2^(n+1) standard normals assembled into
// complex amplitudes, then normalized.  Deterministic per seed.
MessageState random_message(int n, std::uint64_t seed);

// message (qubits 0..n-1) tensored with the resource (qubits n and up).
StateVector compose(const MessageState& message, const StateVector& resource);

}  // namespace ghzt
