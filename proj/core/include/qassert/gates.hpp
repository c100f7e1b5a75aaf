#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qassert/angle.hpp"
#include "qassert/statevector.hpp"

namespace qassert::gates {

enum class Gate { X, H, Z, Rz, Phase };

/// Standard 2x2 unitary for the named gate. Rz(t) = diag(e^{-it/2}, e^{it/2});
/// Phase(t) = diag(1, e^{it}).
sim::GateMatrix elementary(Gate g, double theta = 0.0);

/// One gate application inside a fragment. Rotations follow a fixed
/// convention: uncontrolled rotations are Rz, controlled rotations are Phase.
/// That keeps every op expressible as one line of the circuit language
/// (rz / crz / ccrz) with identical semantics.
struct Op {
    Gate g = Gate::X;
    Angle angle;
    std::vector<int> targets;
    std::vector<int> controls;
};

/// Immutable once built; safe to share across threads.
struct CircuitFragment {
    std::vector<Op> ops;

    /// Reversed op order with rotation angles negated. Exact inverse of the
    /// fragment on every state.
    CircuitFragment inverse() const;

    void apply_to(sim::StateVector& state) const;

    void append(const CircuitFragment& other);
    void add(Gate g, std::initializer_list<int> targets, std::initializer_list<int> controls = {});
    void add_rot(Angle angle, int target, std::span<const int> controls);
};

enum class CrzVariant { DropA, DropC, FlippedBuggy };

/// Controlled-rotation decomposition into CNOTs and single-qubit Rz. DropA
/// and DropC both realize the controlled phase rotation (up to global phase);
/// FlippedBuggy has the target rotation signs swapped and realizes a rotation
/// in the wrong direction.
CircuitFragment crz_decomposed(int control, int target, Angle theta, CrzVariant variant);

enum class RotStyle {
    Native,          // controlled rotations as single crz ops
    DecomposedDropA, // controlled rotations expanded per the DropA pattern
};

/// Fourier encoding of a register: qubit j ends carrying phase
/// sum_{i<=j} bit_i * pi / 2^{j-i}. qft followed by qft(inverse) is the
/// identity. qubits[0] is the least significant bit.
CircuitFragment qft(std::span<const int> qubits, bool inverse = false,
                    RotStyle style = RotStyle::Native);

/// Constant adder in Fourier space: b <- b + a (mod 2^width) once the caller
/// wraps it in qft/iqft, conditioned on every control reading 1. At most two
/// controls. inverse subtracts. Duplicated control pairs lower to a
/// single-control rotation at half angle (the V-chain decomposition with
/// self-inverse CNOT pairs elided), which is what makes the control-routing
/// fault expressible.
CircuitFragment cadd(std::span<const int> controls, std::span<const int> b, std::uint64_t a,
                     bool inverse = false);

/// Modular multiply-accumulate: b <- (b + a*x) mod N when ctrl reads 1.
/// b needs one spare high qubit (width >= bits(N)+1); ancilla is one scratch
/// qubit returned to |0>. inverse computes b <- (b - a*x) mod N (the mirrored
/// circuit). enforce_invertible rejects gcd(a, N) != 1; the program layer
/// disables that so deliberately broken multipliers can still be simulated.
CircuitFragment cmodmul(int ctrl, std::uint64_t a, std::span<const int> x,
                        std::span<const int> b, std::uint64_t N, int ancilla,
                        bool inverse = false, bool enforce_invertible = true,
                        bool ctrl_routing_bug = false);

/// Controlled register swap, one Fredkin per bit pair.
CircuitFragment cswap_registers(int ctrl, std::span<const int> x, std::span<const int> b);

/// Modular exponentiation ladder: stage k multiplies x by a^{2^k} mod N in
/// place (multiply, controlled swap, inverse multiply by inverses[k]),
/// controlled on upper[k]. Supplied inverses are used as-is even when
/// a * a^{-1} != 1 mod N; feeding a wrong pair is a classical-input fault the
/// assertion layer is meant to catch.
CircuitFragment cmodexp(std::span<const int> upper, std::span<const int> x,
                        std::span<const int> b, std::uint64_t a, std::uint64_t N, int ancilla,
                        std::span<const std::uint64_t> inverses);

/// Reflection about the uniform superposition, built from the Toffoli ladder
/// over n-1 ancilla qubits. Equal to its own inverse up to global phase.
CircuitFragment grover_diffusion(std::span<const int> q, std::span<const int> ancilla);

/// Phase flip on the marked basis state, X-conjugated Toffoli ladder.
CircuitFragment grover_oracle(std::span<const int> q, std::span<const int> ancilla,
                              std::uint64_t marked);

} // namespace qassert::gates
