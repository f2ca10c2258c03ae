#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghzt/protocol.hpp"

// Brute-force certification of the protocol, independent of the sampling
// engine: exhaustive branch enumeration, symbolic extraction of what each
// branch does to the message basis, and regeneration of the measurement /
// correction tables from those probes.

namespace ghzt {

class NonPermutation : public std::runtime_error {
  public:
    explicit NonPermutation(const std::string& why);
};

// Exact description of a branch's effect on the message basis: basis index
// j lands on basis pattern target[j] with phase i^phase[j] (the protocol
// itself only ever produces phases 0 and 2, i.e. +1 and -1).
struct SignedPermutation {
    int n = 0;
    std::vector<std::uint32_t> target;
    std::vector<std::int8_t> phase;

    bool operator==(const SignedPermutation&) const = default;
    bool is_identity() const;
};

// How much of the measurement schedule a branch covers.
enum class Stage { AfterBell, AfterControllers };

struct OutcomeBranch {
    // (bit id, value) in measurement order.
    std::vector<std::pair<int, int>> bits;
    double probability;
    // State of the still-unmeasured qubits, ascending global index.
    StateVector post_state;
    std::optional<SignedPermutation> symbolic;
};

// Every branch with nonzero probability, by exhaustive projection along the
// measurement schedule.  Refuses registers above 18 qubits.
std::vector<OutcomeBranch> enumerate_outcomes(const ProtocolConfig& config,
                                              const MessageState& message,
                                              Stage stage = Stage::AfterControllers);

// Pushes each basis message through the branch's projections.  Throws
// NonPermutation when a probe dies in a zero-probability projection, ends in
// a superposition, or the branch map fails to be a signed bijection.
SignedPermutation extract_signed_permutation(const ProtocolConfig& config,
                                             const std::vector<std::pair<int, int>>& bits,
                                             Stage stage = Stage::AfterControllers);

struct VerifyReport {
    int branches_checked = 0;
    std::vector<std::vector<std::pair<int, int>>> failures;
    std::uint64_t message_seed = 0;
};

// Applies the correction to every enumerated branch of a Haar-random message
// (seeded by config.seed) and checks the result equals the message up to
// global phase, |overlap| >= 1 - 1e-12.  Withheld bits are ignored here:
// this certifies the correction rule, not the routing.
VerifyReport verify_corrections(const ProtocolConfig& config);

struct TableRow {
    std::string bits;         // Bell-measurement outcomes, ascending bit id
    std::string controllers;  // controller outcomes, ascending bit id ("" pre-stage)
    std::string state;
    std::string correction;   // "" pre-stage
};

struct Table {
    ProtocolConfig config;
    Stage stage;
    std::vector<TableRow> rows;
};

// Regenerates the outcome table for a standard-mode configuration with
// n <= 2 from basis probes.  Row order: bits ascending, then controllers
// ascending, both read as binary strings.
Table regen_table(const ProtocolConfig& config, Stage stage);

std::string to_text(const Table& table);
std::string to_markdown(const Table& table);

struct AuditReport {
    ProtocolConfig config;
    int trials = 0;
    bool exact = false;  // true when branch-enumerated rather than sampled
    double min_fidelity = 0.0;
    double mean_fidelity = 0.0;
    std::vector<double> fidelities;
};

// Runs `trials` protocol executions on Haar-random messages (or on
// `fixed_message` if given) with per-trial seeds derived from `seed`, and
// reports the observed fidelities.  This is the measurement tool for the
// configurations that do not promise unit fidelity.
AuditReport fidelity_audit(const ProtocolConfig& config, int trials, std::uint64_t seed,
                           const std::optional<MessageState>& fixed_message = std::nullopt);

// Probability-weighted mean fidelity over all branches, applying whatever
// correction factors the withheld-bit set leaves available.  Exact
// counterpart of averaging run_protocol over infinitely many seeds.
double branch_average_fidelity(const ProtocolConfig& config, const MessageState& message);

}  // namespace ghzt
