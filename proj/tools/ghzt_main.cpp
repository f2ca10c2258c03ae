// Command-line front end: run single sessions, certify corrections by brute
// force, regenerate outcome tables, audit fidelity over many trials, and draw
// density matrices.  Exit codes: 0 success, 1 failed assertion or failed
// verification, 2 usage or input error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ghzt/json_io.hpp"
#include "ghzt/protocol.hpp"
#include "ghzt/verify.hpp"
#include "ghzt/viz.hpp"
#include "json.hpp"

namespace {

using namespace ghzt;

constexpr double kUnitFidelityBar = 1.0 - 1e-8;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

// Options shared by every subcommand that builds a protocol configuration.
struct ConfigArgs {
    int m = 3;
    int n = 1;
    std::string mode = "standard";
    int receiver = -1;
    std::string allocation;
    std::vector<std::string> withheld;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* mode_opt = nullptr;

    void attach(CLI::App* cmd, bool with_withheld) {
        cmd->add_option("-m,--participants", m, "number of participants (>= 3)");
        cmd->add_option("-n,--message-qubits", n, "message width in qubits");
        mode_opt = cmd->add_option("--mode", mode, "resource layout")
                       ->check(CLI::IsMember({"standard", "distributed", "minimal"}));
        cmd->add_option("--receiver", receiver, "receiving participant (default m-1)");
        cmd->add_option("--allocation", allocation,
                        "message-qubit holders as p:j pairs, e.g. 1:0,2:1 "
                        "(implies --mode distributed)");
        seed_opt = cmd->add_option("--seed", seed, "RNG seed (default: GHZT_SEED env, else 0)");
        if (with_withheld) {
            cmd->add_option("--withhold", withheld, "classical bits to withhold, e.g. c2,c3")
                ->delimiter(',');
        }
    }

    ProtocolConfig build() const {
        ProtocolConfig config;
        config.m = m;
        config.n = n;
        config.mode = layout_mode_from_string(mode);
        if (!allocation.empty() && mode_opt->count() == 0) {
            config.mode = LayoutMode::DistributedMessage;
        }
        config.receiver = receiver;
        if (!allocation.empty()) {
            std::vector<int> holders(static_cast<std::size_t>(n), -1);
            std::stringstream tokens(allocation);
            std::string token;
            while (std::getline(tokens, token, ',')) {
                const auto colon = token.find(':');
                if (colon == std::string::npos) {
                    throw std::invalid_argument("allocation entries must look like p:j, got '" +
                                                token + "'");
                }
                const int participant = std::stoi(token.substr(0, colon));
                const int qubit = std::stoi(token.substr(colon + 1));
                if (qubit < 0 || qubit >= n) {
                    throw std::invalid_argument("allocation names message qubit " +
                                                std::to_string(qubit) + " outside 0.." +
                                                std::to_string(n - 1));
                }
                if (holders[static_cast<std::size_t>(qubit)] != -1) {
                    throw std::invalid_argument("allocation lists message qubit " +
                                                std::to_string(qubit) + " twice");
                }
                holders[static_cast<std::size_t>(qubit)] = participant;
            }
            for (int& h : holders) {
                if (h == -1) h = 0;
            }
            config.holders = holders;
        }
        config.seed = resolved_seed();
        for (const std::string& name : withheld) {
            std::string digits = name;
            if (!digits.empty() && digits[0] == 'c') digits = digits.substr(1);
            config.withheld_bits.insert(std::stoi(digits));
        }
        config.validate();
        return config;
    }

    std::uint64_t resolved_seed() const {
        if (seed_opt != nullptr && seed_opt->count() > 0) return seed;
        if (const char* env = std::getenv("GHZT_SEED")) {
            return std::strtoull(env, nullptr, 10);
        }
        return 0;
    }
};

MessageState load_or_sample_message(const std::string& path, int n, std::uint64_t seed) {
    if (path.empty()) return random_message(n, seed);
    MessageState message = message_from_json(read_file(path));
    if (message.n != n) {
        throw std::invalid_argument("message file carries " + std::to_string(message.n) +
                                    " qubits, configuration expects " + std::to_string(n));
    }
    return message;
}

int do_run(const ConfigArgs& args, const std::string& message_path, const std::string& out_path,
           const std::string& format, bool no_assert) {
    ProtocolConfig config = args.build();
    MessageState message = load_or_sample_message(message_path, config.n, config.seed);
    Transcript transcript = run_protocol(config, message);
    const std::string serialized = transcript_to_json(transcript);
    if (!out_path.empty()) write_file(out_path, serialized);
    if (format == "json") {
        std::cout << serialized;
    } else {
        std::printf("fidelity: %.9f\n", transcript.fidelity);
    }
    if (!no_assert && transcript.fidelity < kUnitFidelityBar) {
        std::fprintf(stderr, "fidelity %.9f below unit threshold (pass --no-assert to accept)\n",
                     transcript.fidelity);
        return 1;
    }
    return 0;
}

int do_verify(const ConfigArgs& args, bool single, const std::string& format,
              const std::string& out_path) {
    std::vector<ProtocolConfig> configs;
    if (single) {
        configs.push_back(args.build());
    } else {
        for (int m : {3, 4, 5}) {
            for (int n : {1, 2}) {
                ProtocolConfig config;
                config.m = m;
                config.n = n;
                config.seed = args.resolved_seed();
                configs.push_back(config);
            }
        }
    }
    bool all_ok = true;
    nlohmann::json reports = nlohmann::json::array();
    std::string text;
    for (const ProtocolConfig& config : configs) {
        VerifyReport report = verify_corrections(config);
        const int ok = report.branches_checked - static_cast<int>(report.failures.size());
        char line[128];
        if (report.failures.empty()) {
            std::snprintf(line, sizeof(line), "m=%d n=%d: %d/%d branches OK\n", config.m,
                          config.n, ok, report.branches_checked);
        } else {
            std::snprintf(line, sizeof(line), "m=%d n=%d: %d/%d branches OK (%d failed)\n",
                          config.m, config.n, ok, report.branches_checked,
                          static_cast<int>(report.failures.size()));
            all_ok = false;
        }
        text += line;
        if (format == "json") {
            reports.push_back(nlohmann::json::parse(verify_report_to_json(config, report)));
        }
    }
    if (format == "json") {
        emit(reports.dump(2) + "\n", out_path);
    } else {
        emit(text, out_path);
    }
    return all_ok ? 0 : 1;
}

int do_table(int m, int n, const std::string& stage_name, const std::string& format,
             const std::string& out_path) {
    ProtocolConfig config;
    config.m = m;
    config.n = n;
    const Stage stage = stage_name == "pre" ? Stage::AfterBell : Stage::AfterControllers;
    Table table = regen_table(config, stage);
    if (format == "md") {
        emit(to_markdown(table), out_path);
    } else if (format == "json") {
        emit(table_to_json(table), out_path);
    } else {
        emit(to_text(table), out_path);
    }
    return 0;
}

int do_audit(const ConfigArgs& args, int trials, const std::string& message_path, bool exact,
             const std::string& format, const std::string& out_path) {
    ProtocolConfig config = args.build();
    AuditReport report;
    if (exact) {
        MessageState message = load_or_sample_message(message_path, config.n, config.seed);
        const double fid = branch_average_fidelity(config, message);
        report.config = config;
        report.trials = 0;
        report.exact = true;
        report.min_fidelity = fid;
        report.mean_fidelity = fid;
        report.fidelities = {fid};
    } else {
        std::optional<MessageState> fixed;
        if (!message_path.empty()) {
            fixed = load_or_sample_message(message_path, config.n, config.seed);
        }
        report = fidelity_audit(config, trials, config.seed, fixed);
    }
    const std::string serialized = audit_report_to_json(report);
    if (!out_path.empty()) write_file(out_path, serialized);
    if (format == "json") {
        std::cout << serialized;
    } else if (exact) {
        std::printf("exact branch-average fidelity: %.9f\n", report.mean_fidelity);
    } else {
        std::printf("trials: %d\nmin fidelity: %.9f\nmean fidelity: %.9f\n", report.trials,
                    report.min_fidelity, report.mean_fidelity);
    }
    return 0;
}

int do_hinton(const std::string& from_path, const std::string& format,
              const std::string& out_path) {
    TranscriptSummary summary = transcript_summary_from_json(read_file(from_path));
    HintonDiagram input = build_hinton(summary.rho_in);
    HintonDiagram output = build_hinton(summary.rho_out);
    if (format == "text") {
        std::string text = "rho_in:\n" + render_text(input) + "\nrho_out:\n" + render_text(output);
        emit(text, out_path);
    } else if (format == "json") {
        nlohmann::json combined{{"rho_in", nlohmann::json::parse(hinton_to_json(input))},
                                {"rho_out", nlohmann::json::parse(hinton_to_json(output))}};
        emit(combined.dump(2) + "\n", out_path);
    } else {
        emit(render_svg_pair(input, output), out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"controlled multi-party teleportation simulator"};
    app.require_subcommand(1);

    ConfigArgs run_args;
    std::string run_message, run_out, run_format = "text";
    bool run_no_assert = false;
    CLI::App* run_cmd = app.add_subcommand("run", "execute one teleportation session");
    run_args.attach(run_cmd, true);
    run_cmd->add_option("--message", run_message, "message amplitudes (JSON file)");
    run_cmd->add_option("-o,--out", run_out, "write the session transcript here (JSON)");
    run_cmd->add_option("--format", run_format, "stdout format")
        ->check(CLI::IsMember({"text", "json"}));
    run_cmd->add_flag("--no-assert", run_no_assert, "do not fail when fidelity is below 1");

    ConfigArgs verify_args;
    std::string verify_format = "text", verify_out;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "enumerate every branch and certify the corrections");
    verify_args.attach(verify_cmd, false);
    verify_cmd->add_option("--format", verify_format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    verify_cmd->add_option("-o,--out", verify_out, "write the report here instead of stdout");

    int table_m = 3, table_n = 1;
    std::string table_stage = "post", table_format = "text", table_out;
    CLI::App* table_cmd =
        app.add_subcommand("table", "regenerate the outcome/correction table from probes");
    table_cmd->add_option("-m,--participants", table_m, "number of participants (>= 3)");
    table_cmd->add_option("-n,--message-qubits", table_n, "message width in qubits (<= 2)");
    table_cmd->add_option("--stage", table_stage,
                          "pre = after the Bell round, post = after the controllers")
        ->check(CLI::IsMember({"pre", "post"}));
    table_cmd->add_option("--format", table_format, "output format")
        ->check(CLI::IsMember({"text", "md", "json"}));
    table_cmd->add_option("-o,--out", table_out, "write the table here instead of stdout");

    ConfigArgs audit_args;
    int audit_trials = 100;
    std::string audit_message, audit_format = "text", audit_out;
    bool audit_exact = false;
    CLI::App* audit_cmd =
        app.add_subcommand("audit", "measure fidelity over many sessions or exactly");
    audit_args.attach(audit_cmd, true);
    audit_cmd->add_option("--trials", audit_trials, "number of sampled sessions");
    audit_cmd->add_option("--message", audit_message, "fixed message amplitudes (JSON file)");
    audit_cmd->add_flag("--exact", audit_exact,
                        "probability-weighted branch average instead of sampling");
    audit_cmd->add_option("--format", audit_format, "stdout format")
        ->check(CLI::IsMember({"text", "json"}));
    audit_cmd->add_option("-o,--out", audit_out, "write the report here (JSON)");

    std::string hinton_from, hinton_format = "svg", hinton_out;
    CLI::App* hinton_cmd =
        app.add_subcommand("hinton", "draw the input/output density matrices of a transcript");
    hinton_cmd->add_option("--from", hinton_from, "session transcript (JSON file)")->required();
    hinton_cmd->add_option("--format", hinton_format, "output format")
        ->check(CLI::IsMember({"svg", "text", "json"}));
    hinton_cmd->add_option("-o,--out", hinton_out, "write the drawing here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) {
            return do_run(run_args, run_message, run_out, run_format, run_no_assert);
        }
        if (verify_cmd->parsed()) {
            const bool single = verify_cmd->count("-m") > 0 || verify_cmd->count("-n") > 0 ||
                                verify_args.mode_opt->count() > 0;
            return do_verify(verify_args, single, verify_format, verify_out);
        }
        if (table_cmd->parsed()) {
            return do_table(table_m, table_n, table_stage, table_format, table_out);
        }
        if (audit_cmd->parsed()) {
            return do_audit(audit_args, audit_trials, audit_message, audit_exact, audit_format,
                            audit_out);
        }
        if (hinton_cmd->parsed()) {
            return do_hinton(hinton_from, hinton_format, hinton_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
