#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "qassert/assertions.hpp"
#include "qassert/driver.hpp"
#include "qassert/errors.hpp"
#include "qassert/program.hpp"
#include "qassert/statevector.hpp"

using namespace qassert;
using lang::Mn;
using lang::Program;

namespace {

const char* kBell =
    "reg q 2\n"
    "h q[0]\n"
    "cx q[0] q[1]\n"
    "assert entangled q[0] q[1]\n";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        lines.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const std::string& l : lines) out += l + "\n";
    return out;
}

} // namespace

TEST_CASE("the four-line Bell program parses to one assertion") {
    const Program p = lang::parse(kBell);
    REQUIRE(p.ok());
    REQUIRE(p.registers.size() == 1);
    REQUIRE(p.num_qubits == 2);
    REQUIRE(p.instructions.size() == 3);
    REQUIRE(p.instructions.back().mn == Mn::AssertEntangled);
    const lang::AssertionSpec spec = lang::assertion_spec(p.instructions.back());
    REQUIRE(lang::slice_name(p.registers, spec.a) == "q[0]");
    REQUIRE(lang::slice_name(p.registers, spec.b) == "q[1]");
    REQUIRE(lang::slice_width(p.registers, spec.a) == 1);
}

TEST_CASE("empty input parses to an empty program") {
    const Program p = lang::parse("");
    REQUIRE(p.ok());
    REQUIRE(p.instructions.empty());
    REQUIRE(p.registers.empty());

    const Program comments = lang::parse("# nothing here\n\n   # more nothing\n");
    REQUIRE(comments.ok());
    REQUIRE(comments.instructions.empty());
}

TEST_CASE("a gate touching one qubit twice is a resolution error") {
    const Program p = lang::parse("reg q 2\ncx q[0] q[0]\n");
    REQUIRE(p.errors.size() == 1);
    REQUIRE(p.errors[0].category == lang::SourceError::Category::Resolution);
    REQUIRE(p.errors[0].line == 2);
}

TEST_CASE("parser reports one error per bad line and keeps going") {
    const Program p = lang::parse("reg q 2\n"
                                  "bogus q[0]\n"        // unknown mnemonic
                                  "h q[5]\n"            // index out of range
                                  "x r[0]\n"            // undeclared register
                                  "rz q[0]\n"           // missing angle
                                  "prep q[0] 2\n"       // bad prep value
                                  "h q[0] q[1]\n");     // extra operand
    REQUIRE(p.errors.size() == 6);
    REQUIRE(p.errors[0].category == lang::SourceError::Category::Syntax);
    REQUIRE(p.errors[1].category == lang::SourceError::Category::Resolution);
    REQUIRE(p.errors[2].category == lang::SourceError::Category::Resolution);
    REQUIRE(p.errors[3].category == lang::SourceError::Category::Arity);
    REQUIRE(p.errors[5].category == lang::SourceError::Category::Arity);
    for (std::size_t i = 0; i < p.errors.size(); ++i) {
        REQUIRE(p.errors[i].line == static_cast<int>(i) + 2);
    }
}

TEST_CASE("prep is rejected after a gate touched the qubit") {
    const Program p = lang::parse("reg q 1\nh q[0]\nprep q[0] 1\n");
    REQUIRE(p.errors.size() == 1);
    REQUIRE(p.errors[0].line == 3);
}

TEST_CASE("assertions validate their operands") {
    const Program overlap = lang::parse("reg q 2\nassert entangled q q\n");
    REQUIRE(overlap.errors.size() == 1);

    const Program wide = lang::parse("reg q 2\nassert classical q 4\n");
    REQUIRE(wide.errors.size() == 1);

    const Program unknown = lang::parse("reg q 2\nassert spooky q\n");
    REQUIRE(unknown.errors.size() == 1);
    REQUIRE(unknown.errors[0].category == lang::SourceError::Category::Syntax);
}

TEST_CASE("angles parse and print in exact form") {
    const auto pi = Angle::parse("pi");
    REQUIRE(pi);
    REQUIRE(pi->radians() == Catch::Approx(M_PI));
    REQUIRE(pi->str() == "pi");

    const auto frac = Angle::parse("-pi/2^3");
    REQUIRE(frac);
    REQUIRE(frac->radians() == Catch::Approx(-M_PI / 8));
    REQUIRE(frac->str() == "-pi/2^3");

    const auto dec = Angle::parse("0.784");
    REQUIRE(dec);
    REQUIRE(dec->radians() == 0.784);
    const auto round = Angle::parse(dec->str());
    REQUIRE(round);
    REQUIRE(round->radians() == dec->radians());

    REQUIRE_FALSE(Angle::parse("pi/3"));
    REQUIRE_FALSE(Angle::parse("2pi"));
}

TEST_CASE("native emission round-trips every benchmark breakpoint") {
    for (const auto& bench : driver::registry()) {
        const std::string text = bench.generate();
        const Program p = lang::parse(text);
        REQUIRE(p.ok());
        const auto split = engine::split_at_breakpoints(p);
        for (const auto& bp : split.breakpoints) {
            const std::string emitted = lang::emit_native(bp);
            const Program again = lang::parse(emitted);
            REQUIRE(again.ok());
            // Fixed point: emitting the re-parse reproduces the text.
            const auto split2 = engine::split_at_breakpoints(again);
            REQUIRE(split2.breakpoints.size() == 1);
            REQUIRE(lang::emit_native(split2.breakpoints[0]) == emitted);
            // And the instruction lists agree exactly.
            const auto& again_bp = split2.breakpoints[0];
            REQUIRE(again_bp.prefix.size() == bp.prefix.size());
            for (std::size_t i = 0; i < bp.prefix.size(); ++i) {
                REQUIRE(bp.prefix[i].equivalent(again_bp.prefix[i]));
            }
        }
    }
}

TEST_CASE("adder macros with controls round-trip through the native dialect") {
    const Program p = lang::parse("reg b 3\n"
                                  "reg c 2\n"
                                  "cadd 3 b c[0] c[1]\n"
                                  "icadd 3 b c[0]\n"
                                  "rz b[0] -pi/2^4\n"
                                  "assert classical b 0\n");
    REQUIRE(p.ok());
    const auto split = engine::split_at_breakpoints(p);
    const std::string emitted = lang::emit_native(split.breakpoints[0]);
    const Program again = lang::parse(emitted);
    REQUIRE(again.ok());
    const auto split2 = engine::split_at_breakpoints(again);
    REQUIRE(lang::emit_native(split2.breakpoints[0]) == emitted);
    REQUIRE(again.instructions[0].mn == Mn::Cadd);
    REQUIRE(again.instructions[0].qubits.size() == 2);
    REQUIRE(again.instructions[1].mn == Mn::Icadd);
    REQUIRE(again.instructions[1].qubits.size() == 1);
}

TEST_CASE("fault-injected programs still round-trip") {
    const Program p = lang::parse(driver::generate_program_text("cmodmul_harness"));
    const Program bugged = driver::inject_bug(p, "ctrl-routing");
    const auto split = engine::split_at_breakpoints(bugged);
    const std::string emitted = lang::emit_native(split.breakpoints.back());
    REQUIRE(emitted.find("ctrl-routing") != std::string::npos);
    const Program again = lang::parse(emitted);
    REQUIRE(again.ok());
    bool found = false;
    for (const auto& in : again.instructions) {
        if (in.mn == Mn::Cmodmul) {
            REQUIRE(in.ctrl_routing);
            found = true;
        }
    }
    REQUIRE(found);
}

TEST_CASE("a single bad token yields exactly one error at its line") {
    for (const char* bench : {"qft_harness", "cadd_harness", "cmodmul_harness"}) {
        std::vector<std::string> lines = split_lines(driver::generate_program_text(bench));
        // Corrupt the first gate line (skip declarations, preps and asserts).
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string& l = lines[i];
            if (l.empty() || l[0] == '#') continue;
            if (l.rfind("reg ", 0) == 0 || l.rfind("prep ", 0) == 0 ||
                l.rfind("assert ", 0) == 0) {
                continue;
            }
            lines[i] = l.substr(0, l.rfind(' ')) + " zz[9]";
            const Program p = lang::parse(join_lines(lines));
            REQUIRE(p.errors.size() == 1);
            REQUIRE(p.errors[0].line == static_cast<int>(i) + 1);
            break;
        }
    }
}

TEST_CASE("the parser survives arbitrary token soup") {
    // Random junk must produce source errors, never crashes or acceptance.
    sim::ShotRng rng(0xabcdef12, 0);
    const char* words[] = {"reg",  "q",     "q[0]",  "assert", "pi/2^2", "cx",
                           "-3",   "17",    "qft",   "]",      "x[",     "classical",
                           "h",    "#",     "65536", "cmodmul", "pi",    "zz"};
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        const int lines = 1 + static_cast<int>(rng.next_u64() % 6);
        for (int l = 0; l < lines; ++l) {
            const int toks = static_cast<int>(rng.next_u64() % 7);
            for (int t = 0; t < toks; ++t) {
                text += words[rng.next_u64() % std::size(words)];
                text += ' ';
            }
            text += '\n';
        }
        const Program p = lang::parse(text);
        // Either it parsed cleanly or every error cites a real line.
        for (const auto& e : p.errors) {
            REQUIRE(e.line >= 1);
            REQUIRE(e.line <= lines);
            REQUIRE_FALSE(e.message.empty());
        }
    }
}

TEST_CASE("the qft macro expands to ten elementary gates at width four") {
    const Program p = lang::parse("reg r4 4\nqft r4\n");
    REQUIRE(p.ok());
    const auto frag = lang::expand(p.instructions[0], p.registers);
    REQUIRE(frag.ops.size() == 10);
    int h = 0, rot = 0;
    for (const auto& op : frag.ops) {
        if (op.g == gates::Gate::H) ++h;
        if (op.g == gates::Gate::Phase) {
            ++rot;
            REQUIRE(op.controls.size() == 1);
        }
    }
    REQUIRE(h == 4);
    REQUIRE(rot == 6);
}

TEST_CASE("macro expansion equals direct fragment construction") {
    const Program p = lang::parse("reg a 4\n"
                                  "prep a[1] 1\n"
                                  "qft a\n"
                                  "cadd 9 a\n"
                                  "iqft a\n");
    REQUIRE(p.ok());
    sim::StateVector via_program(4);
    for (const auto& in : p.instructions) {
        lang::expand(in, p.registers).apply_to(via_program);
    }

    const std::array<int, 4> reg{0, 1, 2, 3};
    sim::StateVector direct(4);
    direct.apply(gates::elementary(gates::Gate::X), std::array{1});
    gates::qft(reg).apply_to(direct);
    gates::cadd({}, reg, 9).apply_to(direct);
    gates::qft(reg, true).apply_to(direct);

    for (std::uint64_t k = 0; k < 16; ++k) {
        REQUIRE(std::abs(via_program.amp(k) - direct.amp(k)) < 1e-12);
    }
}

TEST_CASE("qasm-subset emission ends with a bare measure_all") {
    const Program p = lang::parse(driver::generate_program_text("qft_harness"));
    const auto split = engine::split_at_breakpoints(p);
    const std::string text = lang::emit_qasm_subset(split.breakpoints[0]);

    const std::vector<std::string> lines = split_lines(text);
    REQUIRE(lines.front() == "version 1");
    REQUIRE(lines[1] == "qubits 4");
    REQUIRE(lines.back() == "measure_all");
    // Only prep-derived X gates precede the first breakpoint's measurement.
    for (std::size_t i = 2; i + 1 < lines.size(); ++i) {
        REQUIRE(lines[i].rfind("x q", 0) == 0);
    }
}

TEST_CASE("qasm-subset expands macros into elementary lines") {
    const Program p = lang::parse("reg q 2\nqft q\nassert superposition q\n");
    const auto split = engine::split_at_breakpoints(p);
    const std::string text = lang::emit_qasm_subset(split.breakpoints[0]);
    const std::vector<std::string> lines = split_lines(text);
    // version, qubits, h, crz, h, measure_all
    REQUIRE(lines.size() == 6);
    REQUIRE(lines[2] == "h q1");
    REQUIRE(lines[3] == "crz q0 q1 pi/2^1");
    REQUIRE(lines[4] == "h q0");
}
