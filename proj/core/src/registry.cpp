#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "qassert/driver.hpp"
#include "qassert/errors.hpp"

namespace qassert::driver {

namespace {

using lang::Instruction;
using lang::Mn;
using lang::Program;

std::string prep_lines(const std::string& reg, int width, std::uint64_t value) {
    std::string out;
    for (int i = 0; i < width; ++i) {
        out += "prep " + reg + "[" + std::to_string(i) + "] " +
               std::to_string((value >> i) & 1u) + "\n";
    }
    return out;
}

// Controlled rotation written out as the four-step decomposition (rotation,
// CNOT, counter-rotation, CNOT) plus the control correction. Keeping the
// harness in this long form is what lets the sign fault be injected as a
// plain text edit later.
std::string decomposed_crz(const std::string& ctrl, const std::string& tgt,
                           const Angle& theta) {
    const Angle half = theta.half();
    std::string out;
    out += "rz " + tgt + " " + half.str() + "\n";
    out += "cx " + ctrl + " " + tgt + "\n";
    out += "rz " + tgt + " " + half.negated().str() + "\n";
    out += "cx " + ctrl + " " + tgt + "\n";
    out += "rz " + ctrl + " " + half.str() + "\n";
    return out;
}

std::string decomposed_qft(const std::string& reg, int width, bool inverse) {
    struct Unit {
        bool is_h;
        int target;
        int control;
        Angle angle;
    };
    std::vector<Unit> units;
    for (int j = width - 1; j >= 0; --j) {
        units.push_back({true, j, 0, Angle{}});
        for (int i = j - 1; i >= 0; --i) {
            units.push_back({false, j, i, Angle::pi_over_pow2(j - i)});
        }
    }
    if (inverse) {
        std::reverse(units.begin(), units.end());
        for (Unit& u : units) {
            if (!u.is_h) u.angle = u.angle.negated();
        }
    }
    std::string out;
    for (const Unit& u : units) {
        const std::string tgt = reg + "[" + std::to_string(u.target) + "]";
        if (u.is_h) {
            out += "h " + tgt + "\n";
        } else {
            out += decomposed_crz(reg + "[" + std::to_string(u.control) + "]", tgt, u.angle);
        }
    }
    return out;
}

std::string cswap_lines(const std::string& ctrl, const std::string& a, const std::string& b,
                        int width) {
    std::string out;
    for (int i = 0; i < width; ++i) {
        const std::string ai = a + "[" + std::to_string(i) + "]";
        const std::string bi = b + "[" + std::to_string(i) + "]";
        out += "cx " + bi + " " + ai + "\n";
        out += "ccx " + ctrl + " " + ai + " " + bi + "\n";
        out += "cx " + bi + " " + ai + "\n";
    }
    return out;
}

std::string gen_bell() {
    return "# Bell pair preparation\n"
           "reg q 2\n"
           "h q[0]\n"
           "cx q[0] q[1]\n"
           "assert entangled q[0] q[1]\n";
}

std::string gen_qft_harness() {
    std::string out = "# QFT round-trip harness, register value 5\n"
                      "reg q 4\n";
    out += prep_lines("q", 4, 5);
    out += "assert classical q 5\n"
           "qft q\n"
           "assert superposition q\n"
           "iqft q\n"
           "assert classical q 5\n";
    return out;
}

std::string gen_cadd_harness() {
    std::string out = "# Fourier-space constant adder harness: b <- b + 13\n"
                      "reg ctrl 2\n"
                      "reg b 5\n";
    out += prep_lines("ctrl", 2, 0);
    out += prep_lines("b", 5, 12);
    out += "assert classical b 12\n";
    out += decomposed_qft("b", 5, false);
    out += "cadd 13 b\n";
    out += decomposed_qft("b", 5, true);
    out += "assert classical b 25\n";
    return out;
}

std::string gen_cmodmul_harness() {
    std::string out = "# Controlled modular multiplier harness: b <- 7*x + b mod 15\n"
                      "reg ctrl 1\n"
                      "reg x 5\n"
                      "reg b 5\n"
                      "reg anc 1\n"
                      "prep ctrl[0] 1\n"
                      "h ctrl[0]\n";
    out += prep_lines("x", 5, 6);
    out += "assert classical x 6\n";
    out += prep_lines("b", 5, 7);
    out += "assert classical b 7\n";
    out += "prep anc[0] 0\n";
    out += "cmodmul ctrl[0] 7 x b 15 anc[0]\n";
    out += "assert entangled ctrl b\n";
    out += "cmodmul ctrl[0] 13 x b 15 anc[0]\n";
    out += "assert product ctrl b\n";
    return out;
}

std::string gen_shor15() {
    std::string out = "# Order finding for N = 15, guess 7\n"
                      "reg up 3\n"
                      "reg x 5\n"
                      "reg b 5\n"
                      "reg anc 1\n";
    out += prep_lines("up", 3, 0);
    out += prep_lines("x", 5, 1);
    out += prep_lines("b", 5, 0);
    out += prep_lines("anc", 1, 0);
    out += "h up[0]\n"
           "h up[1]\n"
           "h up[2]\n"
           "assert superposition up\n"
           "assert classical x 1\n";
    // Stage k multiplies by 7^(2^k) mod 15, controlled on up[2-k] so the
    // final iqft reads the eigenphase in standard bit order.
    const std::uint64_t multipliers[3] = {7, 4, 1};
    const std::uint64_t inverses[3] = {13, 4, 1};
    for (int k = 0; k < 3; ++k) {
        const std::string ctl = "up[" + std::to_string(2 - k) + "]";
        out += "cmodmul " + ctl + " " + std::to_string(multipliers[k]) + " x b 15 anc[0]\n";
        out += cswap_lines(ctl, "x", "b", 5);
        out += "icmodmul " + ctl + " " + std::to_string(inverses[k]) + " x b 15 anc[0]\n";
    }
    out += "assert entangled up x\n"
           "iqft up\n"
           "assert product up b\n"
           "assert classical b 0\n"
           "assert classical anc 0\n";
    return out;
}

std::string ladder_cz_unladder(const std::string& q, const std::string& anc, int n) {
    std::string out;
    out += "ccx " + q + "[1] " + q + "[0] " + anc + "[0]\n";
    for (int j = 1; j < n - 1; ++j) {
        out += "ccx " + anc + "[" + std::to_string(j - 1) + "] " + q + "[" +
               std::to_string(j + 1) + "] " + anc + "[" + std::to_string(j) + "]\n";
    }
    out += "cz " + anc + "[" + std::to_string(n - 2) + "] " + q + "[" + std::to_string(n - 1) +
           "]\n";
    for (int j = n - 2; j > 0; --j) {
        out += "ccx " + anc + "[" + std::to_string(j - 1) + "] " + q + "[" +
               std::to_string(j + 1) + "] " + anc + "[" + std::to_string(j) + "]\n";
    }
    out += "ccx " + q + "[1] " + q + "[0] " + anc + "[0]\n";
    return out;
}

} // namespace

std::string generate_grover(std::uint64_t marked, int iterations) {
    const int n = 3;
    if (marked >= (std::uint64_t{1} << n)) {
        throw UsageError("generate_grover: marked element out of range");
    }
    std::string out = "# Grover search over 3 qubits, marked element " +
                      std::to_string(marked) + "\n"
                      "reg q 3\n"
                      "reg anc 2\n";
    out += prep_lines("q", n, 0);
    out += prep_lines("anc", n - 1, 0);
    out += "h q[0]\nh q[1]\nh q[2]\n";
    out += "assert superposition q\n";
    for (int it = 0; it < iterations; ++it) {
        // Oracle: phase flip on the marked element.
        std::string conj;
        for (int i = 0; i < n; ++i) {
            if (((marked >> i) & 1u) == 0) conj += "x q[" + std::to_string(i) + "]\n";
        }
        out += conj;
        out += ladder_cz_unladder("q", "anc", n);
        out += conj;
        // Diffusion: reflect about the uniform superposition.
        out += "h q[0]\nh q[1]\nh q[2]\n";
        out += "x q[0]\nx q[1]\nx q[2]\n";
        out += ladder_cz_unladder("q", "anc", n);
        out += "x q[0]\nx q[1]\nx q[2]\n";
        out += "h q[0]\nh q[1]\nh q[2]\n";
        out += "assert product q anc\n";
    }
    out += "assert classical anc 0\n";
    return out;
}

namespace {

std::string gen_grover_default() { return generate_grover(5); }

const std::vector<BenchmarkSpec>& registry_storage() {
    static const std::vector<BenchmarkSpec> specs = {
        {"bell",
         "two-qubit Bell pair; the smallest entanglement check",
         {{"miscoded-cx", "entangling cx miscoded as h on the target qubit", "entangled",
           lang::AssertKind::Entangled}},
         &gen_bell},
        {"qft_harness",
         "classical 5 -> qft -> iqft round trip with pre/postconditions",
         {{"wrong-init", "first nonzero prep flipped to 0 (register reads 4, not 5)",
           "classical precondition", lang::AssertKind::Classical}},
         &gen_qft_harness},
        {"cadd_harness",
         "Fourier-space adder: 12 + 13 = 25 on 5 qubits",
         {{"flipped-angles", "rotation signs swapped in every crz decomposition",
           "classical postcondition", lang::AssertKind::Classical},
          {"reversed-a", "adder constant read in reversed bit order (endian confusion)",
           "classical postcondition", lang::AssertKind::Classical}},
         &gen_cadd_harness},
        {"cmodmul_harness",
         "controlled modular multiplier b <- 7x+b mod 15 and its inversion",
         {{"ctrl-routing", "second control operand duplicated inside the multiplier",
           "entangled", lang::AssertKind::Entangled},
          {"wrong-inverse", "inverse multiplier 13 replaced by 12", "product",
           lang::AssertKind::Product}},
         &gen_cmodmul_harness},
        {"shor15",
         "order finding for N=15 with guess 7; outputs concentrate on {0,2,4,6}",
         {{"wrong-inverse", "first-iteration inverse 13 replaced by 12",
           "classical postcondition on scratch", lang::AssertKind::Classical},
          {"unmirrored-inverse", "first inverse multiplication emitted forward",
           "classical postcondition on scratch", lang::AssertKind::Classical}},
         &gen_shor15},
        {"grover",
         "3-qubit search, marked element 5, two amplification rounds",
         {{"skipped-uncompute", "Toffoli un-ladder dropped after each phase flip",
           "classical postcondition on scratch", lang::AssertKind::Classical}},
         &gen_grover_default},
    };
    return specs;
}

} // namespace

const std::vector<BenchmarkSpec>& registry() { return registry_storage(); }

const BenchmarkSpec* find_benchmark(const std::string& name) {
    for (const BenchmarkSpec& b : registry()) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

std::string generate_program_text(const std::string& name) {
    const BenchmarkSpec* spec = find_benchmark(name);
    if (!spec) {
        std::string names;
        for (const BenchmarkSpec& b : registry()) {
            names += names.empty() ? b.name : ", " + b.name;
        }
        throw UsageError("unknown benchmark '" + name + "' (have: " + names + ")");
    }
    return spec->generate();
}

namespace {

bool angle_is_negation(const Angle& a, const Angle& b) {
    if (a.exact != b.exact) return false;
    if (a.exact) return a.k == b.k && a.negative != b.negative;
    return a.value == -b.value && a.value != 0.0;
}

bool angle_equal(const Angle& a, const Angle& b) {
    if (a.exact != b.exact) return false;
    if (a.exact) return a.k == b.k && a.negative == b.negative;
    return a.value == b.value;
}

// rz t s; cx c t; rz t -s; cx c t; rz c s  ->  signs of the two target
// rotations negated (the incorrect rotation direction).
int apply_flipped_angles(Program& p) {
    int edits = 0;
    auto& ins = p.instructions;
    for (std::size_t i = 0; i + 4 < ins.size(); ++i) {
        Instruction& r0 = ins[i];
        Instruction& x0 = ins[i + 1];
        Instruction& r1 = ins[i + 2];
        Instruction& x1 = ins[i + 3];
        Instruction& rc = ins[i + 4];
        if (r0.mn != Mn::Rz || r1.mn != Mn::Rz || rc.mn != Mn::Rz) continue;
        if (x0.mn != Mn::Cx || x1.mn != Mn::Cx) continue;
        const int t = r0.qubits[0];
        const int c = rc.qubits[0];
        if (r1.qubits[0] != t) continue;
        if (x0.qubits != std::vector<int>{c, t} || x1.qubits != std::vector<int>{c, t}) continue;
        if (!angle_is_negation(r0.angle, r1.angle)) continue;
        if (!angle_equal(rc.angle, r0.angle)) continue;
        r0.angle = r0.angle.negated();
        r1.angle = r1.angle.negated();
        ++edits;
        i += 4;
    }
    return edits;
}

int apply_wrong_init(Program& p) {
    for (Instruction& in : p.instructions) {
        if (in.mn == Mn::Prep && in.consts[0] == 1) {
            in.consts[0] = 0;
            return 1;
        }
    }
    return 0;
}

int apply_miscoded_cx(Program& p) {
    for (Instruction& in : p.instructions) {
        if (in.mn == Mn::Cx) {
            in.mn = Mn::H;
            in.qubits = {in.qubits[1]};
            return 1;
        }
    }
    return 0;
}

std::uint64_t reverse_bits(std::uint64_t v, int width) {
    std::uint64_t out = 0;
    for (int i = 0; i < width; ++i) {
        if ((v >> i) & 1u) out |= std::uint64_t{1} << (width - 1 - i);
    }
    return out;
}

int apply_reversed_a(Program& p) {
    for (Instruction& in : p.instructions) {
        if (in.mn == Mn::Cadd || in.mn == Mn::Icadd) {
            const int w = p.registers[static_cast<std::size_t>(in.reg_ops[0].reg)].width;
            in.consts[0] = reverse_bits(in.consts[0], w);
            return 1;
        }
    }
    return 0;
}

int apply_ctrl_routing(Program& p) {
    int edits = 0;
    for (Instruction& in : p.instructions) {
        if (in.mn == Mn::Cmodmul) {
            in.ctrl_routing = true;
            ++edits;
        }
    }
    return edits;
}

int apply_wrong_inverse(Program& p) {
    // The first mirrored multiplication if the program has one, else the
    // final multiplication (harnesses that invert by multiplying forward).
    for (Instruction& in : p.instructions) {
        if (in.mn == Mn::Icmodmul) {
            in.consts[0] -= 1;
            return 1;
        }
    }
    for (auto it = p.instructions.rbegin(); it != p.instructions.rend(); ++it) {
        if (it->mn == Mn::Cmodmul) {
            it->consts[0] -= 1;
            return 1;
        }
    }
    return 0;
}

int apply_unmirrored_inverse(Program& p) {
    for (Instruction& in : p.instructions) {
        if (in.mn == Mn::Icmodmul) {
            in.mn = Mn::Cmodmul;
            return 1;
        }
    }
    return 0;
}

int apply_skipped_uncompute(Program& p) {
    int edits = 0;
    auto& ins = p.instructions;
    for (std::size_t i = 0; i < ins.size(); ++i) {
        if (ins[i].mn != Mn::Cz) continue;
        std::size_t j = i + 1;
        while (j < ins.size() && ins[j].mn == Mn::Ccx) ++j;
        if (j > i + 1) {
            ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                      ins.begin() + static_cast<std::ptrdiff_t>(j));
            ++edits;
        }
    }
    return edits;
}

} // namespace

lang::Program inject_bug(const lang::Program& program, const std::string& bug_id) {
    if (!program.ok()) throw UsageError("inject_bug: program has unresolved errors");
    lang::Program mutated = program;
    int edits = 0;
    if (bug_id == "flipped-angles") {
        edits = apply_flipped_angles(mutated);
    } else if (bug_id == "wrong-init") {
        edits = apply_wrong_init(mutated);
    } else if (bug_id == "miscoded-cx") {
        edits = apply_miscoded_cx(mutated);
    } else if (bug_id == "reversed-a") {
        edits = apply_reversed_a(mutated);
    } else if (bug_id == "ctrl-routing") {
        edits = apply_ctrl_routing(mutated);
    } else if (bug_id == "wrong-inverse") {
        edits = apply_wrong_inverse(mutated);
    } else if (bug_id == "unmirrored-inverse") {
        edits = apply_unmirrored_inverse(mutated);
    } else if (bug_id == "skipped-uncompute") {
        edits = apply_skipped_uncompute(mutated);
    } else {
        throw UsageError("unknown bug id '" + bug_id + "'");
    }
    if (edits == 0) {
        throw UsageError("bug '" + bug_id + "' does not apply to this program");
    }
    return mutated;
}

} // namespace qassert::driver
