#include "ghzt/qstate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>

namespace ghzt {

namespace {

using EigenMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMatrix> as_eigen(const std::vector<cdouble>& entries, std::uint64_t dim) {
    return Eigen::Map<const EigenMatrix>(entries.data(), static_cast<Eigen::Index>(dim),
                                         static_cast<Eigen::Index>(dim));
}

// Eigenvalues within the solver's backward error of zero are noise, and the
// square root inflates them (1e-16 becomes 1e-8), so clamp relative to the
// spectral radius before rooting.
double eigenvalue_floor(const Eigen::VectorXd& eigenvalues) {
    return 1e-13 * std::max(0.0, eigenvalues.maxCoeff());
}

// Hermitian principal square root with near-zero eigenvalues clamped out.
EigenMatrix psd_sqrt(const EigenMatrix& m) {
    Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(m);
    const double floor = eigenvalue_floor(solver.eigenvalues());
    Eigen::VectorXd roots = solver.eigenvalues().unaryExpr(
        [floor](double v) { return v <= floor ? 0.0 : std::sqrt(v); });
    return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

ZeroProbabilityBranch::ZeroProbabilityBranch(int qubit, int bit, double probability)
    : std::runtime_error("projection of qubit " + std::to_string(qubit) + " onto |" +
                         std::to_string(bit) + "> has probability " + std::to_string(probability)),
      qubit_(qubit),
      bit_(bit),
      probability_(probability) {}

Gate Gate::identity() { return Gate(Kind::I, {cdouble(1), cdouble(0), cdouble(0), cdouble(1)}); }
Gate Gate::x() { return Gate(Kind::X, {cdouble(0), cdouble(1), cdouble(1), cdouble(0)}); }
Gate Gate::z() { return Gate(Kind::Z, {cdouble(1), cdouble(0), cdouble(0), cdouble(-1)}); }

Gate Gate::h() {
    const double s = 0.70710678118654752440;  // 1/sqrt(2)
    return Gate(Kind::H, {cdouble(s), cdouble(s), cdouble(s), cdouble(-s)});
}

Gate Gate::unitary(const std::array<cdouble, 4>& m) {
    // U U^dag == I within 1e-12, entrywise.
    cdouble r00 = m[0] * std::conj(m[0]) + m[1] * std::conj(m[1]);
    cdouble r01 = m[0] * std::conj(m[2]) + m[1] * std::conj(m[3]);
    cdouble r11 = m[2] * std::conj(m[2]) + m[3] * std::conj(m[3]);
    double err = std::max({std::abs(r00 - cdouble(1)), std::abs(r01), std::abs(r11 - cdouble(1))});
    if (err > 1e-12) {
        throw std::invalid_argument("matrix is not unitary (deviation " + std::to_string(err) + ")");
    }
    return Gate(Kind::Unitary2, m);
}

const char* Gate::name() const {
    switch (kind_) {
        case Kind::I: return "I";
        case Kind::X: return "X";
        case Kind::Z: return "Z";
        case Kind::H: return "H";
        case Kind::Unitary2: return "U";
    }
    return "?";
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw std::invalid_argument("qubit count out of range: " + std::to_string(num_qubits));
    }
    amps_.assign(std::uint64_t{1} << num_qubits, cdouble(0));
    amps_[0] = cdouble(1);
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = cdouble(0);
    s.amps_[index] = cdouble(1);
    return s;
}

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<cdouble> amplitudes) {
    StateVector s(num_qubits);
    if (amplitudes.size() != s.dim()) {
        throw std::invalid_argument("expected " + std::to_string(s.dim()) + " amplitudes, got " +
                                    std::to_string(amplitudes.size()));
    }
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm_sq() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("amplitudes are not normalized");
    }
    return s;
}

double StateVector::norm_sq() const {
    double total = 0.0;
    for (const cdouble& a : amps_) total += std::norm(a);
    return total;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) {
        throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " +
                                std::to_string(num_qubits_) + "-qubit state");
    }
}

void StateVector::apply_single(int qubit, const Gate& gate) {
    check_qubit(qubit);
    if (gate.kind() == Gate::Kind::I) return;
    const auto& m = gate.matrix();
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i) {
        if (i & bit) continue;
        cdouble a0 = amps_[i];
        cdouble a1 = amps_[i | bit];
        amps_[i] = m[0] * a0 + m[1] * a1;
        amps_[i | bit] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw std::invalid_argument("cnot control equals target");
    const std::uint64_t cbit = std::uint64_t{1} << control;
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i) {
        if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
    }
}

int StateVector::measure_z(int qubit, Rng& rng) {
    check_qubit(qubit);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double p0 = 0.0;
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (!(i & bit)) p0 += std::norm(amps_[i]);
    }
    int outcome = uniform01(rng) < p0 ? 0 : 1;
    collapse(qubit, outcome, outcome == 0 ? p0 : norm_sq() - p0);
    return outcome;
}

double StateVector::project_z(int qubit, int bit) {
    check_qubit(qubit);
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    double p = 0.0;
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (((i & mask) != 0) == (bit != 0)) p += std::norm(amps_[i]);
    }
    if (p < kZeroBranchProbability) throw ZeroProbabilityBranch(qubit, bit, p);
    collapse(qubit, bit, p);
    return p;
}

void StateVector::collapse(int qubit, int bit, double probability) {
    // Renormalization happens only here; unitaries must have kept the norm.
    if (std::abs(norm_sq() - 1.0) > 1e-9) {
        throw std::logic_error("state norm drifted before measurement collapse");
    }
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    const double scale = 1.0 / std::sqrt(probability);
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (((i & mask) != 0) == (bit != 0)) {
            amps_[i] *= scale;
        } else {
            amps_[i] = cdouble(0);
        }
    }
}

DensityMatrix StateVector::reduced_density(const std::vector<int>& keep) const {
    if (keep.empty()) throw std::invalid_argument("keep list is empty");
    for (int q : keep) check_qubit(q);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t j = i + 1; j < keep.size(); ++j) {
            if (keep[i] == keep[j]) throw std::invalid_argument("keep list has duplicates");
        }
    }
    std::vector<int> traced;
    for (int q = 0; q < num_qubits_; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
    }
    auto scatter = [](std::uint64_t value, const std::vector<int>& positions) {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (value & (std::uint64_t{1} << i)) out |= std::uint64_t{1} << positions[i];
        }
        return out;
    };
    const std::uint64_t kd = std::uint64_t{1} << keep.size();
    const std::uint64_t td = std::uint64_t{1} << traced.size();
    std::vector<cdouble> rho(kd * kd, cdouble(0));
    for (std::uint64_t r = 0; r < kd; ++r) {
        const std::uint64_t rbase = scatter(r, keep);
        for (std::uint64_t c = 0; c < kd; ++c) {
            const std::uint64_t cbase = scatter(c, keep);
            cdouble sum(0);
            for (std::uint64_t e = 0; e < td; ++e) {
                const std::uint64_t env = scatter(e, traced);
                sum += amps_[rbase | env] * std::conj(amps_[cbase | env]);
            }
            rho[r * kd + c] = sum;
        }
    }
    return DensityMatrix::from_entries(static_cast<int>(keep.size()), std::move(rho));
}

DensityMatrix::DensityMatrix(int num_qubits, std::vector<cdouble> entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {}

DensityMatrix DensityMatrix::from_pure(const StateVector& state) {
    const std::uint64_t d = state.dim();
    std::vector<cdouble> entries(d * d);
    for (std::uint64_t r = 0; r < d; ++r) {
        for (std::uint64_t c = 0; c < d; ++c) {
            entries[r * d + c] = state.amplitude(r) * std::conj(state.amplitude(c));
        }
    }
    return DensityMatrix(state.num_qubits(), std::move(entries));
}

DensityMatrix DensityMatrix::from_entries(int num_qubits, std::vector<cdouble> entries) {
    const std::uint64_t d = std::uint64_t{1} << num_qubits;
    if (entries.size() != d * d) throw std::invalid_argument("entry count does not match qubit count");
    DensityMatrix rho(num_qubits, std::move(entries));
    if (rho.max_hermiticity_violation() > kNormTolerance) {
        throw std::invalid_argument("density matrix is not hermitian");
    }
    if (std::abs(rho.trace() - cdouble(1)) > kNormTolerance) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    return rho;
}

cdouble DensityMatrix::entry(std::uint64_t row, std::uint64_t col) const {
    if (row >= dim() || col >= dim()) throw std::out_of_range("density matrix index out of range");
    return entries_[row * dim() + col];
}

cdouble DensityMatrix::trace() const {
    cdouble t(0);
    for (std::uint64_t i = 0; i < dim(); ++i) t += entries_[i * dim() + i];
    return t;
}

double DensityMatrix::max_hermiticity_violation() const {
    double worst = 0.0;
    for (std::uint64_t r = 0; r < dim(); ++r) {
        for (std::uint64_t c = r; c < dim(); ++c) {
            worst = std::max(worst, std::abs(entries_[r * dim() + c] -
                                             std::conj(entries_[c * dim() + r])));
        }
    }
    return worst;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(as_eigen(entries_, dim()));
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (max_hermiticity_violation() > kNormTolerance) {
        throw std::invalid_argument("density matrix is not hermitian");
    }
    if (std::abs(trace() - cdouble(1)) > kNormTolerance) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    if (min_eigenvalue() < -kPsdTolerance) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("fidelity requires equal dimensions");
    }
    EigenMatrix ra = psd_sqrt(as_eigen(a.entries(), a.dim()));
    EigenMatrix inner = ra * as_eigen(b.entries(), b.dim()) * ra;
    Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(inner);
    const double floor = eigenvalue_floor(solver.eigenvalues());
    double root_sum = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double v = solver.eigenvalues()[i];
        if (v > floor) root_sum += std::sqrt(v);
    }
    return root_sum * root_sum;
}

double pure_fidelity(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("pure_fidelity requires equal qubit counts");
    }
    cdouble overlap(0);
    for (std::uint64_t i = 0; i < a.dim(); ++i) {
        overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
    }
    return std::norm(overlap);
}

}  // namespace ghzt
