#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ghzt/json_io.hpp"
#include "ghzt/protocol.hpp"
#include "ghzt/verify.hpp"
#include "ghzt/viz.hpp"

namespace py = pybind11;

namespace {

using namespace ghzt;

ProtocolConfig make_config(int m, int n, const std::string& mode, int receiver,
                           const std::vector<int>& holders, std::uint64_t seed,
                           const std::set<int>& withheld) {
    ProtocolConfig config;
    config.m = m;
    config.n = n;
    config.mode = layout_mode_from_string(mode);
    config.receiver = receiver;
    config.holders = holders;
    config.seed = seed;
    config.withheld_bits = withheld;
    config.validate();
    return config;
}

MessageState make_message(int n, std::uint64_t seed,
                          const std::optional<std::vector<std::complex<double>>>& amplitudes) {
    if (!amplitudes) return random_message(n, seed);
    MessageState message;
    message.n = n;
    message.amplitudes = *amplitudes;
    message.validate();
    return message;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "controlled multi-party teleportation simulator";

    mod.def(
        "random_message",
        [](int n, std::uint64_t seed) { return random_message(n, seed).amplitudes; },
        py::arg("n"), py::arg("seed"), "Haar-random message amplitudes, deterministic per seed");

    mod.def(
        "run",
        [](int m, int n, const std::string& mode, int receiver, const std::vector<int>& holders,
           std::uint64_t seed, const std::set<int>& withheld,
           const std::optional<std::vector<std::complex<double>>>& amplitudes) {
            ProtocolConfig config = make_config(m, n, mode, receiver, holders, seed, withheld);
            Transcript transcript = run_protocol(config, make_message(n, seed, amplitudes));
            py::dict out;
            out["fidelity"] = transcript.fidelity;
            out["transcript"] = transcript_to_json(transcript);
            return out;
        },
        py::arg("m"), py::arg("n"), py::arg("mode") = "standard", py::arg("receiver") = -1,
        py::arg("holders") = std::vector<int>{}, py::arg("seed") = 0,
        py::arg("withheld") = std::set<int>{}, py::arg("amplitudes") = std::nullopt,
        "Run one session; returns fidelity and the JSON transcript");

    mod.def(
        "verify",
        [](int m, int n, const std::string& mode, int receiver, const std::vector<int>& holders,
           std::uint64_t seed) {
            ProtocolConfig config = make_config(m, n, mode, receiver, holders, seed, {});
            VerifyReport report = verify_corrections(config);
            py::dict out;
            out["branches_checked"] = report.branches_checked;
            out["failures"] = report.failures;
            out["ok"] = report.failures.empty();
            return out;
        },
        py::arg("m"), py::arg("n"), py::arg("mode") = "standard", py::arg("receiver") = -1,
        py::arg("holders") = std::vector<int>{}, py::arg("seed") = 0,
        "Certify the corrections over every measurement branch");

    mod.def(
        "table",
        [](int m, int n, const std::string& stage, const std::string& format) {
            ProtocolConfig config;
            config.m = m;
            config.n = n;
            Table table =
                regen_table(config, stage == "pre" ? Stage::AfterBell : Stage::AfterControllers);
            if (format == "md") return to_markdown(table);
            if (format == "json") return table_to_json(table);
            return to_text(table);
        },
        py::arg("m"), py::arg("n"), py::arg("stage") = "post", py::arg("format") = "text",
        "Regenerate the outcome/correction table from basis probes");

    mod.def(
        "audit",
        [](int m, int n, const std::string& mode, int receiver, const std::vector<int>& holders,
           std::uint64_t seed, const std::set<int>& withheld, int trials,
           const std::optional<std::vector<std::complex<double>>>& amplitudes) {
            ProtocolConfig config = make_config(m, n, mode, receiver, holders, seed, withheld);
            std::optional<MessageState> fixed;
            if (amplitudes) fixed = make_message(n, seed, amplitudes);
            AuditReport report = fidelity_audit(config, trials, seed, fixed);
            py::dict out;
            out["trials"] = report.trials;
            out["min_fidelity"] = report.min_fidelity;
            out["mean_fidelity"] = report.mean_fidelity;
            out["fidelities"] = report.fidelities;
            return out;
        },
        py::arg("m"), py::arg("n"), py::arg("mode") = "standard", py::arg("receiver") = -1,
        py::arg("holders") = std::vector<int>{}, py::arg("seed") = 0,
        py::arg("withheld") = std::set<int>{}, py::arg("trials") = 100,
        py::arg("amplitudes") = std::nullopt, "Sampled fidelity over many sessions");

    mod.def(
        "branch_average_fidelity",
        [](int m, int n, const std::string& mode, int receiver, const std::vector<int>& holders,
           std::uint64_t seed, const std::set<int>& withheld,
           const std::optional<std::vector<std::complex<double>>>& amplitudes) {
            ProtocolConfig config = make_config(m, n, mode, receiver, holders, seed, withheld);
            return branch_average_fidelity(config, make_message(n, seed, amplitudes));
        },
        py::arg("m"), py::arg("n"), py::arg("mode") = "standard", py::arg("receiver") = -1,
        py::arg("holders") = std::vector<int>{}, py::arg("seed") = 0,
        py::arg("withheld") = std::set<int>{}, py::arg("amplitudes") = std::nullopt,
        "Exact probability-weighted fidelity over all branches");

    mod.def(
        "hinton_svg",
        [](const std::string& transcript_json) {
            TranscriptSummary summary = transcript_summary_from_json(transcript_json);
            return render_svg_pair(build_hinton(summary.rho_in), build_hinton(summary.rho_out));
        },
        py::arg("transcript_json"),
        "SVG drawing of a transcript's input/output density matrices");
}
