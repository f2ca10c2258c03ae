// Acceptance gate: each numbered criterion checks one promised behavior end
// to end and prints a single pass/fail line.  Run with a criterion number
// (1..8) to check one, or with no arguments to run the whole gate.  Exits
// nonzero when anything fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "expected_tables.hpp"
#include "ghzt/json_io.hpp"
#include "ghzt/protocol.hpp"
#include "ghzt/verify.hpp"
#include "ghzt/viz.hpp"
#include "svg_probe.hpp"

using namespace ghzt;

namespace {

struct Check {
    int failures = 0;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            std::printf("    fail: %s\n", what.c_str());
        }
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

StateVector random_state(int num_qubits, Rng& rng) {
    std::vector<cdouble> amps(std::uint64_t{1} << num_qubits);
    double norm = 0.0;
    for (auto& a : amps) {
        a = cdouble(standard_normal(rng), standard_normal(rng));
        norm += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amps) a *= scale;
    return StateVector::from_amplitudes(num_qubits, std::move(amps));
}

double max_amp_delta(const StateVector& a, const StateVector& b) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        worst = std::max(worst, std::abs(a.amplitude(i) - b.amplitude(i)));
    }
    return worst;
}

double overlap_magnitude(const StateVector& a, const StateVector& b) {
    cdouble overlap(0);
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
    }
    return std::abs(overlap);
}

// 1. Every promised-exact configuration teleports 100 Haar-random messages
//    at unit fidelity.
bool unit_fidelity_sweep(Check& check) {
    const std::pair<int, int> shapes[] = {{3, 1}, {3, 2}, {4, 1}, {4, 2},
                                          {5, 1}, {5, 2}, {3, 3}};
    for (auto [m, n] : shapes) {
        ProtocolConfig config;
        config.m = m;
        config.n = n;
        AuditReport report =
            fidelity_audit(config, 100, 1000ull * static_cast<std::uint64_t>(m) + n);
        char line[96];
        std::snprintf(line, sizeof(line), "m=%d n=%d min fidelity %.15f", m, n,
                      report.min_fidelity);
        check.expect(report.min_fidelity >= 1.0 - 1e-10, line);
    }
    return check.failures == 0;
}

// Compares a regenerated table against frozen rows, both as strings and as
// signed permutations extracted independently of the renderer.
template <typename Row>
int compare_rows(Check& check, const ProtocolConfig& config, Stage stage,
                 const std::vector<Row>& expected_rows, const std::vector<int>& instances,
                 const char* label) {
    Table table = regen_table(config, stage);
    if (table.rows.size() != expected_rows.size()) {
        check.expect(false, std::string(label) + ": row count mismatch");
        return 1;
    }
    int mismatches = 0;
    for (std::size_t i = 0; i < expected_rows.size(); ++i) {
        const TableRow& got = table.rows[i];
        const Row& want = expected_rows[i];
        bool row_ok = got.bits == want.bits && got.state == want.state;
        std::string controllers;
        if constexpr (requires { want.controllers; }) {
            controllers = want.controllers;
            row_ok = row_ok && got.controllers == want.controllers &&
                     got.correction == want.correction;
        }
        SignedPermutation from_engine = extract_signed_permutation(
            config, expected::row_bits(config.n, want.bits, controllers), stage);
        SignedPermutation from_text = expected::parse_state(config.n, instances, want.state);
        row_ok = row_ok && from_engine == from_text;
        if (!row_ok) {
            ++mismatches;
            check.expect(false, std::string(label) + " row " + std::to_string(i) + " (" +
                                    want.bits + " " + controllers + "): got '" + got.state +
                                    "' / '" + got.correction + "'");
        }
    }
    return mismatches;
}

// 2. The regenerated tables reproduce every frozen measurement/correction
//    row with zero mismatches.
bool table_regeneration(Check& check) {
    int mismatches = 0;
    {
        ProtocolConfig config;
        mismatches += compare_rows(check, config, Stage::AfterBell, expected::three_party_pre(),
                                   expected::standard_pre_instances(3, 1), "3-party pre");
        mismatches +=
            compare_rows(check, config, Stage::AfterControllers, expected::three_party_post(),
                         expected::post_instances(1), "3-party post");
    }
    {
        ProtocolConfig config;
        config.m = 4;
        mismatches += compare_rows(check, config, Stage::AfterBell, expected::four_party_pre(),
                                   expected::standard_pre_instances(4, 1), "4-party pre");
        mismatches +=
            compare_rows(check, config, Stage::AfterControllers, expected::four_party_post(),
                         expected::post_instances(1), "4-party post");
    }
    // The one-qubit pre-stage rows follow one pattern for every group size.
    for (int m = 3; m <= 6; ++m) {
        ProtocolConfig config;
        config.m = m;
        std::vector<expected::PreRow> rows;
        std::vector<std::string> states;
        for (int c0 = 0; c0 < 2; ++c0) {
            for (int c1 = 0; c1 < 2; ++c1) {
                states.push_back(expected::one_qubit_pre_pattern(m, c0, c1));
            }
        }
        const char* bit_strings[] = {"00", "01", "10", "11"};
        for (int i = 0; i < 4; ++i) rows.push_back({bit_strings[i], states[i].c_str()});
        mismatches += compare_rows(check, config, Stage::AfterBell, rows,
                                   expected::standard_pre_instances(m, 1),
                                   ("pre pattern m=" + std::to_string(m)).c_str());
    }
    {
        ProtocolConfig config;
        config.n = 2;
        mismatches += compare_rows(check, config, Stage::AfterBell,
                                   expected::three_party_two_qubit_pre(),
                                   expected::standard_pre_instances(3, 2), "two-qubit pre");
        // The two-qubit correction labels; the published states for these
        // rows are reliable only up to a global sign, so labels are the
        // frozen ground truth here and the states are certified by the
        // correction sweep instead.
        Table post = regen_table(config, Stage::AfterControllers);
        const auto& labels = expected::three_party_two_qubit_labels();
        if (post.rows.size() != labels.size()) {
            check.expect(false, "two-qubit post: row count mismatch");
            ++mismatches;
        } else {
            for (std::size_t i = 0; i < labels.size(); ++i) {
                const bool ok = post.rows[i].bits == labels[i].bits &&
                                post.rows[i].controllers == labels[i].controllers &&
                                post.rows[i].correction == labels[i].label;
                if (!ok) {
                    ++mismatches;
                    check.expect(false, std::string("two-qubit post row ") + std::to_string(i) +
                                            ": got '" + post.rows[i].correction + "', want '" +
                                            labels[i].label + "'");
                }
            }
        }
    }
    std::printf("    rows compared: 4+8+4+16+16+16+64, mismatches: %d\n", mismatches);
    return check.failures == 0;
}

// 3. Exhaustive branch verification passes on the whole table sweep, and the
//    xor-folded correction equals applying one Z per controller bit.
bool correction_certification(Check& check) {
    const std::pair<int, int> shapes[] = {{3, 1}, {4, 1}, {5, 1}, {6, 1}, {3, 2}};
    for (auto [m, n] : shapes) {
        ProtocolConfig config;
        config.m = m;
        config.n = n;
        config.seed = 77;
        VerifyReport report = verify_corrections(config);
        char line[96];
        std::snprintf(line, sizeof(line), "m=%d n=%d: %zu of %d branches failed", m, n,
                      report.failures.size(), report.branches_checked);
        check.expect(report.branches_checked == 1 << (m * n) && report.failures.empty(), line);
    }

    Rng rng(4242);
    int fold_failures = 0;
    for (int sample = 0; sample < 1000; ++sample) {
        ProtocolConfig config;
        config.m = 3 + static_cast<int>(rng() % 4);
        config.n = 1 + static_cast<int>(rng() % 2);
        MeasurementSchedule schedule = build_schedule(config.layout());
        std::map<int, int> bits;
        for (int bit : schedule.measured_bits()) bits[bit] = static_cast<int>(rng() % 2);

        StateVector folded = random_state(config.n, rng);
        StateVector unfolded = folded;
        for (const CorrectionSpec& spec : schedule.corrections) {
            for (const Gate& gate : correction_ops(spec, bits)) {
                folded.apply_single(spec.instance, gate);
            }
            for (int id : spec.xor_bits) {
                if (bits[id]) unfolded.apply_single(spec.instance, Gate::z());
            }
            if (bits[spec.flip_bit]) unfolded.apply_single(spec.instance, Gate::x());
            if (bits[spec.phase_bit]) unfolded.apply_single(spec.instance, Gate::z());
        }
        if (max_amp_delta(folded, unfolded) > 1e-12) ++fold_failures;
    }
    check.expect(fold_failures == 0,
                 "xor folding diverged on " + std::to_string(fold_failures) + " of 1000 samples");
    return check.failures == 0;
}

// 4. Flexibility: distributed allocations, every receiver choice, minimal
//    one-qubit equivalence, and a completing minimal two-qubit audit.
bool configuration_flexibility(Check& check) {
    Rng rng(31);
    for (int m : {4, 5}) {
        for (int i = 0; i < 20; ++i) {
            ProtocolConfig config;
            config.m = m;
            config.n = 2;
            config.mode = LayoutMode::DistributedMessage;
            config.holders = {static_cast<int>(rng() % (m - 1)),
                              static_cast<int>(rng() % (m - 1))};
            config.seed = rng();
            MessageState message;
            if (i == 0) {
                // A maximally entangled message, not just a Haar draw.
                message.n = 2;
                message.amplitudes = {cdouble(std::sqrt(0.5)), cdouble(0), cdouble(0),
                                      cdouble(std::sqrt(0.5))};
            } else {
                message = random_message(2, rng());
            }
            Transcript t = run_protocol(config, message);
            char line[128];
            std::snprintf(line, sizeof(line),
                          "distributed m=%d holders={%d,%d} fidelity %.15f", m,
                          config.holders[0], config.holders[1], t.fidelity);
            check.expect(t.fidelity >= 1.0 - 1e-10, line);
        }
    }

    for (int receiver = 1; receiver <= 3; ++receiver) {
        ProtocolConfig config;
        config.m = 4;
        config.receiver = receiver;
        config.seed = rng();
        Transcript t = run_protocol(config, random_message(1, rng()));
        check.expect(t.fidelity >= 1.0 - 1e-10,
                     "receiver " + std::to_string(receiver) + " fidelity below 1");
    }

    // With one message qubit the minimal layout is the standard one, so the
    // two modes must agree branch for branch.
    for (int m : {3, 4, 5}) {
        MessageState message = random_message(1, 21);
        ProtocolConfig standard;
        standard.m = m;
        ProtocolConfig minimal = standard;
        minimal.mode = LayoutMode::MinimalResource;
        auto std_branches = enumerate_outcomes(standard, message);
        auto min_branches = enumerate_outcomes(minimal, message);
        bool same = std_branches.size() == min_branches.size();
        for (std::size_t i = 0; same && i < std_branches.size(); ++i) {
            same = std_branches[i].bits == min_branches[i].bits &&
                   std::abs(std_branches[i].probability - min_branches[i].probability) < 1e-12 &&
                   max_amp_delta(std_branches[i].post_state, min_branches[i].post_state) < 1e-12;
        }
        check.expect(same, "minimal/standard branch mismatch at m=" + std::to_string(m));
    }

    // The minimal two-qubit session cannot promise unit fidelity; the audit
    // must still complete and report.
    ProtocolConfig lossy;
    lossy.m = 4;
    lossy.n = 2;
    lossy.mode = LayoutMode::MinimalResource;
    AuditReport report = fidelity_audit(lossy, 30, 5);
    check.expect(report.trials == 30 && report.fidelities.size() == 30,
                 "minimal audit did not report all trials");
    bool in_range = true;
    for (double f : report.fidelities) in_range = in_range && f >= -1e-12 && f <= 1.0 + 1e-12;
    check.expect(in_range, "minimal audit fidelity out of [0, 1]");
    check.expect(report.mean_fidelity > 0.0 && report.mean_fidelity <= 1.0 + 1e-12,
                 "minimal audit mean out of range");
    std::printf("    minimal m=4 n=2 audit: min %.6f mean %.6f over %d trials\n",
                report.min_fidelity, report.mean_fidelity, report.trials);
    return check.failures == 0;
}

// 5. Withholding the controller bit degrades the known message to the known
//    branch average.
bool withholding_average(Check& check) {
    ProtocolConfig config;
    config.withheld_bits = {2};
    MessageState message;
    message.n = 1;
    message.amplitudes = {cdouble(0.6), cdouble(0.8)};
    const double average = branch_average_fidelity(config, message);
    // Half the branches need no sign fix; the others keep the damaged
    // relative sign: (a^2 - b^2)^2.
    const double analytic = (1.0 + std::pow(0.36 - 0.64, 2)) / 2.0;
    char line[96];
    std::snprintf(line, sizeof(line), "enumerated %.9f vs analytic %.9f", average, analytic);
    check.expect(std::abs(average - analytic) <= 1e-6, line);
    check.expect(std::abs(average - 0.5392) <= 1e-6, "average is not 0.5392");
    return check.failures == 0;
}

// 6. Sampled runs land exactly on enumerated branches: same bits, same
//    receiver state up to global phase.
bool sampled_runs_match_enumeration(Check& check) {
    MessageState message = random_message(2, 42);
    ProtocolConfig base;
    base.n = 2;
    std::map<std::map<int, int>, const OutcomeBranch*> by_bits;
    auto branches = enumerate_outcomes(base, message);
    for (const OutcomeBranch& branch : branches) {
        std::map<int, int> key(branch.bits.begin(), branch.bits.end());
        by_bits[key] = &branch;
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ProtocolConfig config = base;
        config.seed = seed;
        Transcript t = run_protocol(config, message);
        auto it = by_bits.find(t.measured_bits());
        if (it == by_bits.end()) {
            check.expect(false, "seed " + std::to_string(seed) + " hit an unenumerated branch");
            continue;
        }
        const double overlap = overlap_magnitude(*t.receiver_state_pre, it->second->post_state);
        check.expect(overlap >= 1.0 - 1e-12,
                     "seed " + std::to_string(seed) + " diverges from its branch, overlap " +
                         std::to_string(overlap));
    }
    return check.failures == 0;
}

// 7. Numerical core properties, 1000 cases each.
bool numerical_properties(Check& check) {
    Rng rng(2024);
    int norm_bad = 0, involution_bad = 0, conjugation_bad = 0, symmetry_bad = 0, agree_bad = 0;
    for (int i = 0; i < 1000; ++i) {
        StateVector s = random_state(3, rng);
        const int q = static_cast<int>(rng() % 3);
        StateVector t = s;
        switch (rng() % 4) {
            case 0: t.apply_single(q, Gate::h()); break;
            case 1: t.apply_single(q, Gate::x()); break;
            case 2: t.apply_single(q, Gate::z()); break;
            default: t.apply_cnot(q, (q + 1) % 3);
        }
        if (std::abs(t.norm_sq() - 1.0) > 1e-12) ++norm_bad;

        const Gate gates[] = {Gate::h(), Gate::x(), Gate::z()};
        StateVector twice = s;
        const Gate& g = gates[rng() % 3];
        twice.apply_single(q, g);
        twice.apply_single(q, g);
        if (max_amp_delta(twice, s) > 1e-12) ++involution_bad;

        StateVector hzh = s;
        hzh.apply_single(q, Gate::h());
        hzh.apply_single(q, Gate::z());
        hzh.apply_single(q, Gate::h());
        StateVector x = s;
        x.apply_single(q, Gate::x());
        if (max_amp_delta(hzh, x) > 1e-12) ++conjugation_bad;
    }
    for (int i = 0; i < 1000; ++i) {
        StateVector a = random_state(2, rng);
        StateVector b = random_state(2, rng);
        DensityMatrix ra = DensityMatrix::from_pure(a);
        DensityMatrix rb = DensityMatrix::from_pure(b);
        const double fab = fidelity(ra, rb);
        if (std::abs(fab - fidelity(rb, ra)) > 1e-9) ++symmetry_bad;
        if (std::abs(fab - pure_fidelity(a, b)) > 1e-9) ++agree_bad;
    }
    check.expect(norm_bad == 0, std::to_string(norm_bad) + " norm violations");
    check.expect(involution_bad == 0, std::to_string(involution_bad) + " involution violations");
    check.expect(conjugation_bad == 0,
                 std::to_string(conjugation_bad) + " H Z H = X violations");
    check.expect(symmetry_bad == 0,
                 std::to_string(symmetry_bad) + " fidelity symmetry violations");
    check.expect(agree_bad == 0,
                 std::to_string(agree_bad) + " pure/mixed fidelity disagreements");
    return check.failures == 0;
}

// 8. Drawings are byte-stable against the checked-in golden files, and the
//    squares decode back to the matrix magnitudes.
bool drawing_goldens(Check& check) {
    const std::string dir = std::string(GHZT_TEST_DATA_DIR) + "/golden/";

    DensityMatrix zero = DensityMatrix::from_pure(StateVector::basis(1, 0));
    HintonDiagram zero_diagram = build_hinton(zero);
    const std::string zero_svg = render_svg(zero_diagram);
    check.expect(zero_svg == read_file(dir + "hinton_zero.svg"),
                 "hinton_zero.svg drifted from the golden bytes");

    StateVector plus_state(1);
    plus_state.apply_single(0, Gate::h());
    HintonDiagram plus_diagram = build_hinton(DensityMatrix::from_pure(plus_state));
    const std::string plus_svg = render_svg(plus_diagram);
    check.expect(plus_svg == read_file(dir + "hinton_plus.svg"),
                 "hinton_plus.svg drifted from the golden bytes");

    ProtocolConfig config;
    config.seed = 7;
    Transcript t = run_protocol(config, random_message(1, 7));
    HintonDiagram in = build_hinton(*t.rho_in);
    HintonDiagram out = build_hinton(*t.rho_out);
    const std::string pair_svg = render_svg_pair(in, out);
    check.expect(pair_svg == read_file(dir + "hinton_run_m3n1.svg"),
                 "hinton_run_m3n1.svg drifted from the golden bytes");

    check.expect(svg_probe::recovery_error(zero_svg, 0, zero_diagram, zero_diagram.real) < 1e-9,
                 "zero-state magnitudes fail to round-trip");
    check.expect(svg_probe::recovery_error(plus_svg, 0, plus_diagram, plus_diagram.real) < 1e-9,
                 "plus-state magnitudes fail to round-trip");
    check.expect(svg_probe::recovery_error(pair_svg, 0, in, in.real) < 1e-9,
                 "run input magnitudes fail to round-trip");
    check.expect(svg_probe::recovery_error(pair_svg, 2, out, out.real) < 1e-9,
                 "run output magnitudes fail to round-trip");
    return check.failures == 0;
}

struct Criterion {
    int number;
    const char* summary;
    bool (*run)(Check&);
};

const Criterion kCriteria[] = {
    {1, "unit fidelity on 7 configurations x 100 Haar messages", unit_fidelity_sweep},
    {2, "regenerated tables match the frozen rows exactly", table_regeneration},
    {3, "exhaustive correction sweep and xor-fold equivalence", correction_certification},
    {4, "distributed, receiver, and minimal-mode flexibility", configuration_flexibility},
    {5, "withheld-bit branch average hits 0.5392", withholding_average},
    {6, "sampled runs land on enumerated branches", sampled_runs_match_enumeration},
    {7, "numerical core properties, 1000 cases each", numerical_properties},
    {8, "drawings byte-stable and magnitude-recoverable", drawing_goldens},
};

int run_criterion(const Criterion& criterion) {
    Check check;
    const bool ok = criterion.run(check);
    std::printf("criterion %d: %s (%s)\n", criterion.number, ok ? "PASS" : "FAIL",
                criterion.summary);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
        return 2;
    }
    if (argc == 2) {
        const int wanted = std::atoi(argv[1]);
        for (const Criterion& criterion : kCriteria) {
            if (criterion.number == wanted) return run_criterion(criterion);
        }
        std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
        return 2;
    }
    int failed = 0;
    for (const Criterion& criterion : kCriteria) failed += run_criterion(criterion);
    return failed == 0 ? 0 : 1;
}
