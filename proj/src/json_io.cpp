#include "ghzt/json_io.hpp"

#include "json.hpp"

namespace ghzt {

namespace {

using nlohmann::json;

std::string bit_name(int id) { return "c" + std::to_string(id); }

json density_to_json(const DensityMatrix& rho) {
    json rows = json::array();
    for (std::uint64_t r = 0; r < rho.dim(); ++r) {
        json row = json::array();
        for (std::uint64_t c = 0; c < rho.dim(); ++c) {
            const cdouble v = rho.entry(r, c);
            row.push_back(json::array({v.real(), v.imag()}));
        }
        rows.push_back(row);
    }
    return rows;
}

DensityMatrix density_from_json(const json& rows) {
    const std::uint64_t dim = rows.size();
    int num_qubits = 0;
    while ((std::uint64_t{1} << num_qubits) < dim) ++num_qubits;
    if ((std::uint64_t{1} << num_qubits) != dim) {
        throw std::invalid_argument("density matrix dimension is not a power of two");
    }
    std::vector<cdouble> entries;
    entries.reserve(dim * dim);
    for (const json& row : rows) {
        if (row.size() != dim) throw std::invalid_argument("density matrix is not square");
        for (const json& cell : row) {
            entries.emplace_back(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return DensityMatrix::from_entries(num_qubits, std::move(entries));
}

json config_to_json(const ProtocolConfig& config) {
    ResourceLayout layout = config.layout();
    json alloc = json::object();
    for (const auto& [participant, qubits] : layout.message_allocation()) {
        alloc[std::to_string(participant)] = qubits;
    }
    json withheld = json::array();
    for (int id : config.withheld_bits) withheld.push_back(bit_name(id));
    return json{{"m", config.m},
                {"n", config.n},
                {"mode", to_string(config.mode)},
                {"receiver", layout.receiver},
                {"allocation", alloc},
                {"seed", config.seed},
                {"withheld", withheld}};
}

json event_to_json(const TranscriptEvent& event, const Transcript& transcript) {
    json out{{"round", event.round}};
    if (const auto* bell = std::get_if<BellOutcomeEvent>(&event.body)) {
        out["type"] = "bell_outcome";
        out["participant"] = bell->participant;
        out["pair"] = json::array({bell->message_qubit, bell->resource_qubit});
        out["c_phase"] = bit_name(bell->message_qubit);
        out["c_flip"] = bit_name(bell->resource_qubit);
        out["phase_value"] = bell->phase_value;
        out["flip_value"] = bell->flip_value;
    } else if (const auto* ctrl = std::get_if<ControllerOutcomeEvent>(&event.body)) {
        out["type"] = "controller_outcome";
        out["participant"] = ctrl->participant;
        out["bit"] = bit_name(ctrl->bit);
        out["value"] = ctrl->value;
    } else if (const auto* msg = std::get_if<ClassicalMessage>(&event.body)) {
        out["type"] = "message";
        out["bit"] = bit_name(msg->bit_id);
        out["value"] = msg->value;
        out["sender"] = msg->sender;
        out["recipients"] = msg->recipients;
        out["sequence_no"] = msg->sequence_no;
    } else if (const auto* corr = std::get_if<CorrectionEvent>(&event.body)) {
        out["type"] = "correction";
        out["instance"] = corr->instance;
        out["qubit"] = corr->qubit;
        out["gates"] = corr->gates;
        json used = json::array();
        for (int id : corr->used_bits) used.push_back(bit_name(id));
        out["used_bits"] = used;
    } else if (const auto* miss = std::get_if<MissingBitEvent>(&event.body)) {
        out["type"] = "missing_bit";
        out["qubit"] = miss->qubit;
        out["bit"] = bit_name(miss->bit);
    } else if (const auto* result = std::get_if<ResultEvent>(&event.body)) {
        out["type"] = "result";
        out["fidelity"] = result->fidelity;
        if (transcript.rho_in) out["rho_in"] = density_to_json(*transcript.rho_in);
        if (transcript.rho_out) out["rho_out"] = density_to_json(*transcript.rho_out);
    }
    return out;
}

}  // namespace

std::string message_to_json(const MessageState& message) {
    message.validate();
    json amps = json::array();
    for (const cdouble& a : message.amplitudes) {
        amps.push_back(json::array({a.real(), a.imag()}));
    }
    return json{{"n", message.n}, {"amplitudes", amps}}.dump(2) + "\n";
}

MessageState message_from_json(const std::string& text) {
    json parsed = json::parse(text);
    MessageState message;
    message.n = parsed.at("n").get<int>();
    for (const json& cell : parsed.at("amplitudes")) {
        message.amplitudes.emplace_back(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
    message.validate();
    return message;
}

std::string transcript_to_json(const Transcript& transcript) {
    json events = json::array();
    for (const TranscriptEvent& event : transcript.events) {
        events.push_back(event_to_json(event, transcript));
    }
    return json{{"config", config_to_json(transcript.config)},
                {"events", events},
                {"fidelity", transcript.fidelity}}
               .dump(2) +
           "\n";
}

TranscriptSummary transcript_summary_from_json(const std::string& text) {
    json parsed = json::parse(text);
    for (const json& event : parsed.at("events")) {
        if (event.at("type") == "result") {
            return TranscriptSummary{parsed.at("fidelity").get<double>(),
                                     density_from_json(event.at("rho_in")),
                                     density_from_json(event.at("rho_out"))};
        }
    }
    throw std::invalid_argument("transcript has no result event");
}

std::string table_to_json(const Table& table) {
    json rows = json::array();
    for (const TableRow& row : table.rows) {
        rows.push_back(json{{"bits", row.bits},
                            {"controllers", row.controllers},
                            {"state", row.state},
                            {"correction", row.correction}});
    }
    return json{{"m", table.config.m},
                {"n", table.config.n},
                {"stage", table.stage == Stage::AfterBell ? "pre" : "post"},
                {"rows", rows}}
               .dump(2) +
           "\n";
}

std::string audit_report_to_json(const AuditReport& report) {
    return json{{"config", config_to_json(report.config)},
                {"trials", report.trials},
                {"exact", report.exact},
                {"min", report.min_fidelity},
                {"mean", report.mean_fidelity},
                {"fidelities", report.fidelities}}
               .dump(2) +
           "\n";
}

std::string verify_report_to_json(const ProtocolConfig& config, const VerifyReport& report) {
    json failures = json::array();
    for (const auto& branch : report.failures) {
        json bits = json::object();
        for (const auto& [id, value] : branch) bits[bit_name(id)] = value;
        failures.push_back(bits);
    }
    return json{{"config", config_to_json(config)},
                {"branches_checked", report.branches_checked},
                {"failures", failures},
                {"message_seed", report.message_seed},
                {"ok", report.failures.empty()}}
               .dump(2) +
           "\n";
}

std::string hinton_to_json(const HintonDiagram& diagram) {
    const std::uint64_t dim = diagram.dim();
    json real = json::array();
    json imag = json::array();
    for (std::uint64_t r = 0; r < dim; ++r) {
        json real_row = json::array();
        json imag_row = json::array();
        for (std::uint64_t c = 0; c < dim; ++c) {
            real_row.push_back(diagram.real[r * dim + c]);
            imag_row.push_back(diagram.imag[r * dim + c]);
        }
        real.push_back(real_row);
        imag.push_back(imag_row);
    }
    return json{{"num_qubits", diagram.num_qubits},
                {"max_magnitude", diagram.max_magnitude},
                {"labels", diagram.labels},
                {"real", real},
                {"imag", imag}}
               .dump(2) +
           "\n";
}

}  // namespace ghzt
