#pragma once

#include <string>

#include "ghzt/protocol.hpp"
#include "ghzt/verify.hpp"
#include "ghzt/viz.hpp"

// All file formats in one place.  Serialization is deterministic: object
// keys are emitted sorted and doubles in shortest round-trip form, so equal
// values always produce equal bytes.

namespace ghzt {

// {"n": int, "amplitudes": [[re, im], ...]} in amplitude-index order.
std::string message_to_json(const MessageState& message);
MessageState message_from_json(const std::string& text);

// {"config": {...}, "events": [...], "fidelity": float}; events carry
// "type" and "round", bit ids rendered as "c<k>"; the result event embeds
// the input and output density matrices.
std::string transcript_to_json(const Transcript& transcript);

// Enough of a transcript to redraw it: config, fidelity, rho_in, rho_out.
struct TranscriptSummary {
    double fidelity = 0.0;
    DensityMatrix rho_in;
    DensityMatrix rho_out;
};
TranscriptSummary transcript_summary_from_json(const std::string& text);

std::string table_to_json(const Table& table);
std::string audit_report_to_json(const AuditReport& report);
std::string verify_report_to_json(const ProtocolConfig& config, const VerifyReport& report);
std::string hinton_to_json(const HintonDiagram& diagram);

}  // namespace ghzt
