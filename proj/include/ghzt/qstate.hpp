#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzt/random.hpp"

// Dense state-vector simulation core.
//
// Qubit-index convention (single source of truth for the whole library):
// qubit label k lives at bit position k of the amplitude index.  A basis ket
// is always written |b0 b1 ... b_{N-1}> with qubit 0 as the LEFTMOST symbol,
// and its amplitude index is sum_k b_k * 2^k.  Ket strings are therefore
// little-endian: character i of a rendered ket is the value of qubit i.
// Every module (resource layouts, tables, diagram labels, JSON files) uses
// this one mapping.

namespace ghzt {

using cdouble = std::complex<double>;

// Norm drift allowed on any state exposed by a public operation.
inline constexpr double kNormTolerance = 1e-12;
// A projection below this probability is a dead branch and is refused.
inline constexpr double kZeroBranchProbability = 1e-14;
// Eigenvalues of a density matrix may dip this far below zero numerically.
inline constexpr double kPsdTolerance = 1e-10;

class ZeroProbabilityBranch : public std::runtime_error {
  public:
    ZeroProbabilityBranch(int qubit, int bit, double probability);
    int qubit() const { return qubit_; }
    int bit() const { return bit_; }
    double probability() const { return probability_; }

  private:
    int qubit_;
    int bit_;
    double probability_;
};

class Gate {
  public:
    enum class Kind { I, X, Z, H, Unitary2 };

    static Gate identity();
    static Gate x();
    static Gate z();
    static Gate h();
    // Arbitrary single-qubit unitary; throws std::invalid_argument when
    // U*U^dag deviates from identity by more than 1e-12.
    static Gate unitary(const std::array<cdouble, 4>& matrix);

    Kind kind() const { return kind_; }
    // Row-major [m00 m01; m10 m11].
    const std::array<cdouble, 4>& matrix() const { return matrix_; }
    const char* name() const;

  private:
    Gate(Kind kind, const std::array<cdouble, 4>& matrix) : kind_(kind), matrix_(matrix) {}
    Kind kind_;
    std::array<cdouble, 4> matrix_;
};

class DensityMatrix;

class StateVector {
  public:
    // |0...0> on num_qubits qubits.
    explicit StateVector(int num_qubits);
    static StateVector basis(int num_qubits, std::uint64_t index);
    // Validates the amplitude count and unit norm (kNormTolerance).
    static StateVector from_amplitudes(int num_qubits, std::vector<cdouble> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }
    cdouble amplitude(std::uint64_t index) const { return amps_.at(index); }
    const std::vector<cdouble>& amplitudes() const { return amps_; }
    double norm_sq() const;

    void apply_single(int qubit, const Gate& gate);
    void apply_cnot(int control, int target);

    // Z-basis measurement.  Draws one uniform01 value; outcome 0 is taken
    // when the draw falls below P(outcome 0), so a probability-0 result is
    // never produced.  Collapses and renormalizes.
    int measure_z(int qubit, Rng& rng);

    // Forces the qubit to `bit`, renormalizes, and returns the probability
    // of that branch.  Throws ZeroProbabilityBranch below the dead-branch
    // threshold.  States are renormalized only here and in measure_z, never
    // after unitaries; norm is checked before each renormalization.
    double project_z(int qubit, int bit);

    // Partial trace down to `keep`, an ordered list of distinct qubits; bit
    // position i of the result indexes keep[i].
    DensityMatrix reduced_density(const std::vector<int>& keep) const;

  private:
    void check_qubit(int qubit) const;
    void collapse(int qubit, int bit, double probability);

    int num_qubits_;
    std::vector<cdouble> amps_;
};

class DensityMatrix {
  public:
    static DensityMatrix from_pure(const StateVector& state);
    // Validates hermiticity (1e-12) and unit trace (1e-12); positive
    // semidefiniteness down to -kPsdTolerance is checked by validate().
    static DensityMatrix from_entries(int num_qubits, std::vector<cdouble> entries);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }
    cdouble entry(std::uint64_t row, std::uint64_t col) const;
    const std::vector<cdouble>& entries() const { return entries_; }
    cdouble trace() const;
    double max_hermiticity_violation() const;
    double min_eigenvalue() const;
    // Throws std::invalid_argument on hermiticity/trace/PSD violation.
    void validate() const;

  private:
    DensityMatrix(int num_qubits, std::vector<cdouble> entries);
    int num_qubits_;
    std::vector<cdouble> entries_;  // row-major, dim x dim
};

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 via Hermitian
// eigendecomposition; eigenvalues are clamped at zero before square roots.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// |<a|b>|^2, an independent route used to cross-check fidelity() on pure
// states; deliberately not implemented in terms of fidelity().
double pure_fidelity(const StateVector& a, const StateVector& b);

}  // namespace ghzt
