#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qassert/angle.hpp"
#include "qassert/gates.hpp"

namespace qassert::lang {

struct RegisterDecl {
    std::string name;
    int width = 0;
    int offset = 0; // first global qubit index; registers are contiguous
};

/// A register operand: the whole register (bit == -1) or a one-qubit slice.
struct RegSlice {
    int reg = -1;
    int bit = -1;

    bool whole() const { return bit < 0; }
    bool operator==(const RegSlice&) const = default;
};

enum class Mn {
    Prep,
    X,
    H,
    Z,
    Rz,
    Cx,
    Ccx,
    Cz,
    Crz,
    Ccrz,
    Qft,
    Iqft,
    Cadd,
    Icadd,
    Cmodmul,
    Icmodmul,
    AssertClassical,
    AssertSuperposition,
    AssertEntangled,
    AssertProduct,
};

struct Instruction {
    Mn mn = Mn::X;
    int line = 0;
    std::vector<int> qubits;           // resolved global indices, operand order
    std::vector<RegSlice> reg_ops;     // register operands (macros, asserts)
    Angle angle;                       // rz / crz / ccrz
    std::vector<std::uint64_t> consts; // prep bit, adder/multiplier constants, expected value
    bool ctrl_routing = false;         // fault marker on cmodmul

    bool is_assert() const {
        return mn == Mn::AssertClassical || mn == Mn::AssertSuperposition ||
               mn == Mn::AssertEntangled || mn == Mn::AssertProduct;
    }
    bool equivalent(const Instruction& other) const;
};

struct SourceError {
    enum class Category { Syntax, Resolution, Arity };
    int line = 0;
    int column = 0;
    std::string message;
    Category category = Category::Syntax;
};

struct Program {
    std::vector<RegisterDecl> registers;
    std::vector<Instruction> instructions;
    std::vector<SourceError> errors;
    int num_qubits = 0;

    bool ok() const { return errors.empty(); }
    const RegisterDecl* find_register(std::string_view name) const;
};

/// Register that owns a global qubit index.
const RegisterDecl& register_of(const std::vector<RegisterDecl>& regs, int qubit);
int slice_offset(const std::vector<RegisterDecl>& regs, const RegSlice& s);
int slice_width(const std::vector<RegisterDecl>& regs, const RegSlice& s);
std::string slice_name(const std::vector<RegisterDecl>& regs, const RegSlice& s);

/// One statement per line, '#' comments, whitespace-separated tokens.
/// Parsing continues past errors; at most one error is reported per line.
Program parse(std::string_view text);

enum class AssertKind { Classical, Superposition, Entangled, Product };

struct AssertionSpec {
    AssertKind kind = AssertKind::Classical;
    int line = 0;
    RegSlice a;
    RegSlice b;                 // entangled / product only
    std::uint64_t expected = 0; // classical only
};

AssertionSpec assertion_spec(const Instruction& instr);
const char* assert_kind_name(AssertKind kind);

/// A program truncated at one assertion: everything before the directive,
/// then a full measurement. The instruction body contains no asserts.
struct BreakpointProgram {
    std::vector<RegisterDecl> registers;
    int num_qubits = 0;
    std::vector<Instruction> prefix;
    AssertionSpec assertion;
    int index = 0; // source order of the assertion
};

/// Gate/macro instruction as an applyable fragment. Assert directives expand
/// to the empty fragment. Appends a note per non-invertible multiplier when
/// warnings is non-null.
gates::CircuitFragment expand(const Instruction& instr, const std::vector<RegisterDecl>& regs,
                              std::vector<std::string>* warnings = nullptr);

/// Native dialect: round-trips through parse() bit-exactly.
std::string emit_native(const BreakpointProgram& bp);

/// One-way interop dialect: elementary gate per line, "version 1" header,
/// terminal measure_all. Not re-ingested.
std::string emit_qasm_subset(const BreakpointProgram& bp);

} // namespace qassert::lang
