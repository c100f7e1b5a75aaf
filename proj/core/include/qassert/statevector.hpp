#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qassert/errors.hpp"
#include "qassert/stats.hpp"

namespace qassert::sim {

using cplx = std::complex<double>;

/// Deterministic per-shot random stream. Shot k of a run draws from a stream
/// keyed on (master_seed, k), so serial and parallel ensemble generation
/// produce identical outcomes. SplitMix64 underneath; no libstdc++
/// distribution objects, so results are identical across platforms.
class ShotRng {
  public:
    ShotRng(std::uint64_t master_seed, std::uint64_t shot_index);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();

  private:
    std::uint64_t state_;
};

/// 2x2 or 4x4 complex matrix. Must be unitary to within 1e-10.
struct GateMatrix {
    int dim = 2;                  // 2 (one target) or 4 (two targets)
    std::array<cplx, 16> m{};     // row-major, first dim*dim entries used

    cplx at(int r, int c) const { return m[static_cast<std::size_t>(r * dim + c)]; }
    void set(int r, int c, cplx v) { m[static_cast<std::size_t>(r * dim + c)] = v; }

    GateMatrix dagger() const;
    bool is_unitary(double tol = 1e-10) const;
    bool is_diagonal() const;
};

/// A measured outcome. Bit i (qubit i) is the least significant bit of the
/// integer reading, matching the register initialization convention
/// value = sum_i bit_i * 2^i.
struct Bitstring {
    int width = 0;
    std::uint64_t value = 0;

    bool bit(int i) const { return (value >> i) & 1u; }

    /// Most significant bit printed first, e.g. width 3, value 5 -> "101".
    std::string str() const;
};

/// Dense state vector of up to max_qubits qubits. Exclusively owned during
/// mutation; independent states may live on independent threads.
class StateVector {
  public:
    static constexpr int kDefaultMaxQubits = 22;

    /// Initializes |0...0>. Throws ResourceError when num_qubits exceeds the
    /// limit, UsageError when num_qubits < 1.
    explicit StateVector(int num_qubits, int max_qubits = kDefaultMaxQubits);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    cplx amp(std::uint64_t basis) const { return amps_[basis]; }
    void set_amp(std::uint64_t basis, cplx v) { amps_[basis] = v; }

    double norm_sq() const;

    /// Applies the controlled unitary: gate acts on `targets` on the subspace
    /// where every control qubit reads 1. dim 2 takes one target, dim 4 takes
    /// two (targets[0] is the low bit of the gate's row/column index).
    /// Any number of controls, including zero.
    void apply(const GateMatrix& gate, std::span<const int> targets,
               std::span<const int> controls = {});

    /// Samples one full-width outcome with probability |amplitude|^2.
    /// Throws InternalError when the norm has drifted by more than 1e-6.
    Bitstring measure_shot(ShotRng& rng) const;

    /// Histogram of `shots` seeded measurements. Shot k uses ShotRng(seed, k),
    /// so the result is bit-identical across runs and thread counts, and
    /// identical to re-measuring a freshly rebuilt state per shot.
    stats::Histogram sample_histogram(int shots, std::uint64_t seed) const;

    /// Shot-indexed outcomes, same streams as sample_histogram.
    std::vector<std::uint64_t> sample_shots(int shots, std::uint64_t seed) const;

  private:
    std::uint64_t sample_index(double u) const;
    void check_norm() const;

    int num_qubits_;
    std::vector<cplx> amps_;
};

} // namespace qassert::sim
