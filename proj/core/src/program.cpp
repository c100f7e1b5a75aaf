#include "qassert/program.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>

#include "qassert/errors.hpp"

namespace qassert {

std::string Angle::str() const {
    if (exact) {
        std::string s = negative ? "-pi" : "pi";
        if (k > 0) {
            s += "/2^" + std::to_string(k);
        }
        return s;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::optional<Angle> Angle::parse(std::string_view text) {
    bool neg = false;
    std::string_view rest = text;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        neg = rest.front() == '-';
        rest.remove_prefix(1);
    }
    if (rest == "pi") {
        return pi_over_pow2(0, neg);
    }
    if (rest.rfind("pi/2^", 0) == 0) {
        rest.remove_prefix(5);
        int k = 0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
        if (ec != std::errc{} || ptr != rest.data() + rest.size() || k < 0 || k > 62) {
            return std::nullopt;
        }
        return pi_over_pow2(k, neg);
    }
    // Signed decimal radians.
    std::string owned(text);
    char* end = nullptr;
    const double v = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size() || owned.empty() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return decimal(v);
}

} // namespace qassert

namespace qassert::lang {

namespace {

struct Token {
    std::string_view text;
    int column = 0; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#') {
            ++i;
        }
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

std::optional<std::uint64_t> parse_u64(std::string_view t) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

const std::map<std::string_view, Mn>& mnemonic_table() {
    static const std::map<std::string_view, Mn> table = {
        {"prep", Mn::Prep},        {"x", Mn::X},
        {"h", Mn::H},              {"z", Mn::Z},
        {"rz", Mn::Rz},            {"cx", Mn::Cx},
        {"ccx", Mn::Ccx},          {"cz", Mn::Cz},
        {"crz", Mn::Crz},          {"ccrz", Mn::Ccrz},
        {"qft", Mn::Qft},          {"iqft", Mn::Iqft},
        {"cadd", Mn::Cadd},        {"icadd", Mn::Icadd},
        {"cmodmul", Mn::Cmodmul},  {"icmodmul", Mn::Icmodmul},
    };
    return table;
}

// Parse state carried across lines: declared registers plus which qubits a
// gate has already touched (prep must come before any gate on its qubit, and
// at most once per qubit).
struct ParseCtx {
    Program* prog;
    std::vector<bool> gate_touched;
    std::vector<bool> prepped;

    void fail(int line, const Token& tok, SourceError::Category cat, std::string msg) {
        prog->errors.push_back({line, tok.column, std::move(msg), cat});
    }
};

struct LineParser {
    ParseCtx& ctx;
    int line_no;
    const std::vector<Token>& tokens;
    std::size_t next = 1; // tokens[0] is the mnemonic
    bool failed = false;

    const Token& last_token() const { return tokens.back(); }

    bool done() const { return next >= tokens.size(); }

    std::optional<Token> take(const char* what) {
        if (done()) {
            ctx.fail(line_no, last_token(), SourceError::Category::Arity,
                     std::string("missing operand: expected ") + what);
            failed = true;
            return std::nullopt;
        }
        return tokens[next++];
    }

    void expect_end() {
        if (!failed && !done()) {
            ctx.fail(line_no, tokens[next], SourceError::Category::Arity,
                     "unexpected extra operand");
            failed = true;
        }
    }

    // name[i] -> resolved global qubit index
    std::optional<int> qubit(const char* what) {
        auto tok = take(what);
        if (!tok) return std::nullopt;
        const std::string_view t = tok->text;
        const std::size_t lb = t.find('[');
        if (lb == std::string_view::npos || t.back() != ']') {
            ctx.fail(line_no, *tok, SourceError::Category::Syntax,
                     "expected qubit reference name[i]");
            failed = true;
            return std::nullopt;
        }
        const std::string_view name = t.substr(0, lb);
        const auto idx = parse_u64(t.substr(lb + 1, t.size() - lb - 2));
        const RegisterDecl* reg = ctx.prog->find_register(name);
        if (!reg) {
            ctx.fail(line_no, *tok, SourceError::Category::Resolution,
                     "undeclared register '" + std::string(name) + "'");
            failed = true;
            return std::nullopt;
        }
        if (!idx || *idx >= static_cast<std::uint64_t>(reg->width)) {
            ctx.fail(line_no, *tok, SourceError::Category::Resolution,
                     "qubit index out of range for register '" + std::string(name) + "'");
            failed = true;
            return std::nullopt;
        }
        return reg->offset + static_cast<int>(*idx);
    }

    // plain register name
    std::optional<int> whole_register(const char* what) {
        auto tok = take(what);
        if (!tok) return std::nullopt;
        if (tok->text.find('[') != std::string_view::npos) {
            ctx.fail(line_no, *tok, SourceError::Category::Syntax,
                     std::string(what) + " must be a whole register");
            failed = true;
            return std::nullopt;
        }
        const RegisterDecl* reg = ctx.prog->find_register(tok->text);
        if (!reg) {
            ctx.fail(line_no, *tok, SourceError::Category::Resolution,
                     "undeclared register '" + std::string(tok->text) + "'");
            failed = true;
            return std::nullopt;
        }
        return static_cast<int>(reg - ctx.prog->registers.data());
    }

    // register name or single-qubit slice name[i]
    std::optional<RegSlice> slice(const char* what) {
        auto tok = take(what);
        if (!tok) return std::nullopt;
        const std::string_view t = tok->text;
        const std::size_t lb = t.find('[');
        std::string_view name = t;
        std::optional<std::uint64_t> idx;
        if (lb != std::string_view::npos) {
            if (t.back() != ']') {
                ctx.fail(line_no, *tok, SourceError::Category::Syntax, "malformed register slice");
                failed = true;
                return std::nullopt;
            }
            name = t.substr(0, lb);
            idx = parse_u64(t.substr(lb + 1, t.size() - lb - 2));
            if (!idx) {
                ctx.fail(line_no, *tok, SourceError::Category::Syntax, "malformed register slice");
                failed = true;
                return std::nullopt;
            }
        }
        const RegisterDecl* reg = ctx.prog->find_register(name);
        if (!reg) {
            ctx.fail(line_no, *tok, SourceError::Category::Resolution,
                     "undeclared register '" + std::string(name) + "'");
            failed = true;
            return std::nullopt;
        }
        RegSlice s;
        s.reg = static_cast<int>(reg - ctx.prog->registers.data());
        if (idx) {
            if (*idx >= static_cast<std::uint64_t>(reg->width)) {
                ctx.fail(line_no, *tok, SourceError::Category::Resolution,
                         "qubit index out of range for register '" + std::string(name) + "'");
                failed = true;
                return std::nullopt;
            }
            s.bit = static_cast<int>(*idx);
        }
        return s;
    }

    std::optional<std::uint64_t> integer(const char* what) {
        auto tok = take(what);
        if (!tok) return std::nullopt;
        auto v = parse_u64(tok->text);
        if (!v) {
            ctx.fail(line_no, *tok, SourceError::Category::Syntax,
                     std::string("expected integer ") + what);
            failed = true;
        }
        return v;
    }

    std::optional<Angle> angle() {
        auto tok = take("angle");
        if (!tok) return std::nullopt;
        auto a = Angle::parse(tok->text);
        if (!a) {
            ctx.fail(line_no, *tok, SourceError::Category::Syntax,
                     "malformed angle (use pi/2^k or a decimal)");
            failed = true;
        }
        return a;
    }
};

bool distinct_qubits(const std::vector<int>& qs) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            if (qs[i] == qs[j]) return false;
        }
    }
    return true;
}

void parse_line(ParseCtx& ctx, int line_no, std::string_view line) {
    const std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) return;
    Program& prog = *ctx.prog;
    const Token& head = tokens[0];
    LineParser p{ctx, line_no, tokens};

    auto push = [&](Instruction instr) {
        if (p.failed) return;
        instr.line = line_no;
        if (!distinct_qubits(instr.qubits)) {
            ctx.fail(line_no, head, SourceError::Category::Resolution,
                     "instruction names the same qubit twice");
            return;
        }
        for (int q : instr.qubits) {
            if (instr.mn != Mn::Prep && !instr.is_assert()) {
                ctx.gate_touched[static_cast<std::size_t>(q)] = true;
            }
        }
        // Macros act on whole registers.
        if (instr.mn == Mn::Qft || instr.mn == Mn::Iqft || instr.mn == Mn::Cadd ||
            instr.mn == Mn::Icadd || instr.mn == Mn::Cmodmul || instr.mn == Mn::Icmodmul) {
            for (const RegSlice& s : instr.reg_ops) {
                const RegisterDecl& r = prog.registers[static_cast<std::size_t>(s.reg)];
                for (int q = r.offset; q < r.offset + r.width; ++q) {
                    ctx.gate_touched[static_cast<std::size_t>(q)] = true;
                }
            }
        }
        prog.instructions.push_back(std::move(instr));
    };

    if (head.text == "reg") {
        auto name_tok = p.take("register name");
        auto width = p.integer("register width");
        p.expect_end();
        if (p.failed) return;
        // Gate mnemonics are fine as register names (statements dispatch on
        // the head token); only the statement keywords themselves clash.
        if (name_tok->text.find('[') != std::string_view::npos ||
            name_tok->text.find(']') != std::string_view::npos || name_tok->text == "reg" ||
            name_tok->text == "assert") {
            ctx.fail(line_no, *name_tok, SourceError::Category::Syntax, "bad register name");
            return;
        }
        if (prog.find_register(name_tok->text)) {
            ctx.fail(line_no, *name_tok, SourceError::Category::Resolution,
                     "register '" + std::string(name_tok->text) + "' already declared");
            return;
        }
        if (*width < 1 || prog.num_qubits + *width > 63) {
            ctx.fail(line_no, *name_tok, SourceError::Category::Resolution,
                     "register width out of range");
            return;
        }
        RegisterDecl decl;
        decl.name = std::string(name_tok->text);
        decl.width = static_cast<int>(*width);
        decl.offset = prog.num_qubits;
        prog.num_qubits += decl.width;
        ctx.gate_touched.resize(static_cast<std::size_t>(prog.num_qubits), false);
        ctx.prepped.resize(static_cast<std::size_t>(prog.num_qubits), false);
        prog.registers.push_back(std::move(decl));
        return;
    }

    if (head.text == "assert") {
        auto kind_tok = p.take("assertion kind");
        if (!kind_tok) return;
        Instruction instr;
        if (kind_tok->text == "classical") {
            instr.mn = Mn::AssertClassical;
            auto s = p.slice("register");
            auto v = p.integer("expected value");
            p.expect_end();
            if (p.failed) return;
            instr.reg_ops = {*s};
            const int w = slice_width(prog.registers, *s);
            if (w < 64 && (*v >> w) != 0) {
                ctx.fail(line_no, *kind_tok, SourceError::Category::Resolution,
                         "expected value does not fit the register");
                return;
            }
            instr.consts = {*v};
        } else if (kind_tok->text == "superposition") {
            instr.mn = Mn::AssertSuperposition;
            auto s = p.slice("register");
            p.expect_end();
            if (p.failed) return;
            instr.reg_ops = {*s};
        } else if (kind_tok->text == "entangled" || kind_tok->text == "product") {
            instr.mn = kind_tok->text == "entangled" ? Mn::AssertEntangled : Mn::AssertProduct;
            auto a = p.slice("first register");
            auto b = p.slice("second register");
            p.expect_end();
            if (p.failed) return;
            const int a_lo = slice_offset(prog.registers, *a);
            const int a_hi = a_lo + slice_width(prog.registers, *a);
            const int b_lo = slice_offset(prog.registers, *b);
            const int b_hi = b_lo + slice_width(prog.registers, *b);
            if (a_lo < b_hi && b_lo < a_hi) {
                ctx.fail(line_no, *kind_tok, SourceError::Category::Resolution,
                         "assertion registers overlap");
                return;
            }
            instr.reg_ops = {*a, *b};
        } else {
            ctx.fail(line_no, *kind_tok, SourceError::Category::Syntax,
                     "unknown assertion kind '" + std::string(kind_tok->text) + "'");
            return;
        }
        push(std::move(instr));
        return;
    }

    const auto mn_it = mnemonic_table().find(head.text);
    if (mn_it == mnemonic_table().end()) {
        ctx.fail(line_no, head, SourceError::Category::Syntax,
                 "unknown mnemonic '" + std::string(head.text) + "'");
        return;
    }

    Instruction instr;
    instr.mn = mn_it->second;
    switch (instr.mn) {
    case Mn::Prep: {
        auto q = p.qubit("qubit");
        auto v = p.integer("0 or 1");
        p.expect_end();
        if (p.failed) return;
        if (*v > 1) {
            ctx.fail(line_no, head, SourceError::Category::Syntax, "prep value must be 0 or 1");
            return;
        }
        if (ctx.gate_touched[static_cast<std::size_t>(*q)]) {
            ctx.fail(line_no, head, SourceError::Category::Resolution,
                     "prep must precede every gate on its qubit");
            return;
        }
        if (ctx.prepped[static_cast<std::size_t>(*q)]) {
            ctx.fail(line_no, head, SourceError::Category::Resolution,
                     "qubit prepared twice");
            return;
        }
        ctx.prepped[static_cast<std::size_t>(*q)] = true;
        instr.qubits = {*q};
        instr.consts = {*v};
        break;
    }
    case Mn::X:
    case Mn::H:
    case Mn::Z: {
        auto q = p.qubit("qubit");
        p.expect_end();
        if (p.failed) return;
        instr.qubits = {*q};
        break;
    }
    case Mn::Rz: {
        auto q = p.qubit("qubit");
        auto a = p.angle();
        p.expect_end();
        if (p.failed) return;
        instr.qubits = {*q};
        instr.angle = *a;
        break;
    }
    case Mn::Cx:
    case Mn::Cz: {
        auto c = p.qubit("control qubit");
        auto t = p.qubit("target qubit");
        p.expect_end();
        if (p.failed) return;
        instr.qubits = {*c, *t};
        break;
    }
    case Mn::Ccx: {
        auto c0 = p.qubit("control qubit");
        auto c1 = p.qubit("control qubit");
        auto t = p.qubit("target qubit");
        p.expect_end();
        if (p.failed) return;
        instr.qubits = {*c0, *c1, *t};
        break;
    }
    case Mn::Crz: {
        auto c = p.qubit("control qubit");
        auto t = p.qubit("target qubit");
        auto a = p.angle();
        p.expect_end();
        if (p.failed) return;
        instr.qubits = {*c, *t};
        instr.angle = *a;
        break;
    }
    case Mn::Ccrz: {
        auto c0 = p.qubit("control qubit");
        auto c1 = p.qubit("control qubit");
        auto t = p.qubit("target qubit");
        auto a = p.angle();
        p.expect_end();
        if (p.failed) return;
        instr.qubits = {*c0, *c1, *t};
        instr.angle = *a;
        break;
    }
    case Mn::Qft:
    case Mn::Iqft: {
        auto r = p.whole_register("register");
        p.expect_end();
        if (p.failed) return;
        instr.reg_ops = {RegSlice{*r, -1}};
        break;
    }
    case Mn::Cadd:
    case Mn::Icadd: {
        auto a = p.integer("constant");
        auto r = p.whole_register("target register");
        if (p.failed) return;
        instr.consts = {*a};
        instr.reg_ops = {RegSlice{*r, -1}};
        while (!p.done() && instr.qubits.size() < 2) {
            auto c = p.qubit("control qubit");
            if (p.failed) return;
            instr.qubits.push_back(*c);
        }
        p.expect_end();
        if (p.failed) return;
        const RegisterDecl& reg = prog.registers[static_cast<std::size_t>(*r)];
        if (reg.width < 64 && (*a >> reg.width) != 0) {
            ctx.fail(line_no, head, SourceError::Category::Resolution,
                     "constant does not fit the register");
            return;
        }
        for (int q : instr.qubits) {
            const RegisterDecl& owner = register_of(prog.registers, q);
            if (&owner == &reg) {
                ctx.fail(line_no, head, SourceError::Category::Resolution,
                         "control qubit lies inside the target register");
                return;
            }
        }
        break;
    }
    case Mn::Cmodmul:
    case Mn::Icmodmul: {
        auto c = p.qubit("control qubit");
        auto a = p.integer("multiplier");
        auto x = p.whole_register("x register");
        auto b = p.whole_register("accumulator register");
        auto n = p.integer("modulus");
        auto anc = p.qubit("ancilla qubit");
        if (p.failed) return;
        if (instr.mn == Mn::Cmodmul && !p.done()) {
            auto flag = p.take("flag");
            if (flag->text == "ctrl-routing") {
                instr.ctrl_routing = true;
            } else {
                ctx.fail(line_no, *flag, SourceError::Category::Syntax,
                         "unknown cmodmul flag '" + std::string(flag->text) + "'");
                return;
            }
        }
        p.expect_end();
        if (p.failed) return;
        if (*n < 2) {
            ctx.fail(line_no, head, SourceError::Category::Resolution, "modulus must be >= 2");
            return;
        }
        const RegisterDecl& breg = prog.registers[static_cast<std::size_t>(*b)];
        if (breg.width >= 64 || (std::uint64_t{1} << (breg.width - 1)) < *n) {
            ctx.fail(line_no, head, SourceError::Category::Resolution,
                     "accumulator register needs width >= bits(N)+1");
            return;
        }
        if (*x == *b) {
            ctx.fail(line_no, head, SourceError::Category::Resolution,
                     "x and accumulator must be distinct registers");
            return;
        }
        for (int q : {*c, *anc}) {
            const RegisterDecl& owner = register_of(prog.registers, q);
            const bool inside =
                &owner == &breg || &owner == &prog.registers[static_cast<std::size_t>(*x)];
            if (inside) {
                ctx.fail(line_no, head, SourceError::Category::Resolution,
                         "control/ancilla qubit lies inside an operand register");
                return;
            }
        }
        instr.qubits = {*c, *anc};
        instr.reg_ops = {RegSlice{*x, -1}, RegSlice{*b, -1}};
        instr.consts = {*a, *n};
        break;
    }
    default:
        break;
    }
    push(std::move(instr));
}

} // namespace

const RegisterDecl* Program::find_register(std::string_view name) const {
    for (const RegisterDecl& r : registers) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

const RegisterDecl& register_of(const std::vector<RegisterDecl>& regs, int qubit) {
    for (const RegisterDecl& r : regs) {
        if (qubit >= r.offset && qubit < r.offset + r.width) return r;
    }
    throw InternalError("qubit " + std::to_string(qubit) + " belongs to no register");
}

int slice_offset(const std::vector<RegisterDecl>& regs, const RegSlice& s) {
    const RegisterDecl& r = regs[static_cast<std::size_t>(s.reg)];
    return s.whole() ? r.offset : r.offset + s.bit;
}

int slice_width(const std::vector<RegisterDecl>& regs, const RegSlice& s) {
    return s.whole() ? regs[static_cast<std::size_t>(s.reg)].width : 1;
}

std::string slice_name(const std::vector<RegisterDecl>& regs, const RegSlice& s) {
    const RegisterDecl& r = regs[static_cast<std::size_t>(s.reg)];
    if (s.whole()) return r.name;
    return r.name + "[" + std::to_string(s.bit) + "]";
}

bool Instruction::equivalent(const Instruction& other) const {
    auto angle_eq = [](const Angle& a, const Angle& b) {
        if (a.exact != b.exact) return false;
        if (a.exact) return a.negative == b.negative && a.k == b.k;
        return a.value == b.value;
    };
    return mn == other.mn && qubits == other.qubits && reg_ops == other.reg_ops &&
           consts == other.consts && ctrl_routing == other.ctrl_routing &&
           angle_eq(angle, other.angle);
}

Program parse(std::string_view text) {
    Program prog;
    ParseCtx ctx{&prog, {}, {}};
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        parse_line(ctx, line_no, line);
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return prog;
}

AssertionSpec assertion_spec(const Instruction& instr) {
    AssertionSpec spec;
    spec.line = instr.line;
    switch (instr.mn) {
    case Mn::AssertClassical:
        spec.kind = AssertKind::Classical;
        spec.a = instr.reg_ops[0];
        spec.expected = instr.consts[0];
        break;
    case Mn::AssertSuperposition:
        spec.kind = AssertKind::Superposition;
        spec.a = instr.reg_ops[0];
        break;
    case Mn::AssertEntangled:
        spec.kind = AssertKind::Entangled;
        spec.a = instr.reg_ops[0];
        spec.b = instr.reg_ops[1];
        break;
    case Mn::AssertProduct:
        spec.kind = AssertKind::Product;
        spec.a = instr.reg_ops[0];
        spec.b = instr.reg_ops[1];
        break;
    default:
        throw UsageError("assertion_spec: not an assert directive");
    }
    return spec;
}

const char* assert_kind_name(AssertKind kind) {
    switch (kind) {
    case AssertKind::Classical:
        return "classical";
    case AssertKind::Superposition:
        return "superposition";
    case AssertKind::Entangled:
        return "entangled";
    case AssertKind::Product:
        return "product";
    }
    return "?";
}

gates::CircuitFragment expand(const Instruction& instr, const std::vector<RegisterDecl>& regs,
                              std::vector<std::string>* warnings) {
    using gates::CircuitFragment;
    using gates::Gate;

    auto reg_qubits = [&](const RegSlice& s) {
        const RegisterDecl& r = regs[static_cast<std::size_t>(s.reg)];
        std::vector<int> qs(static_cast<std::size_t>(r.width));
        std::iota(qs.begin(), qs.end(), r.offset);
        return qs;
    };

    CircuitFragment f;
    switch (instr.mn) {
    case Mn::Prep:
        if (instr.consts[0] == 1) {
            f.add(Gate::X, {instr.qubits[0]});
        }
        break;
    case Mn::X:
        f.add(Gate::X, {instr.qubits[0]});
        break;
    case Mn::H:
        f.add(Gate::H, {instr.qubits[0]});
        break;
    case Mn::Z:
        f.add(Gate::Z, {instr.qubits[0]});
        break;
    case Mn::Rz: {
        f.add_rot(instr.angle, instr.qubits[0], {});
        break;
    }
    case Mn::Cx:
        f.add(Gate::X, {instr.qubits[1]}, {instr.qubits[0]});
        break;
    case Mn::Cz:
        f.add(Gate::Z, {instr.qubits[1]}, {instr.qubits[0]});
        break;
    case Mn::Ccx:
        f.add(Gate::X, {instr.qubits[2]}, {instr.qubits[0], instr.qubits[1]});
        break;
    case Mn::Crz: {
        const int c[1] = {instr.qubits[0]};
        f.add_rot(instr.angle, instr.qubits[1], c);
        break;
    }
    case Mn::Ccrz: {
        const int c[2] = {instr.qubits[0], instr.qubits[1]};
        f.add_rot(instr.angle, instr.qubits[2], c);
        break;
    }
    case Mn::Qft:
    case Mn::Iqft:
        f = gates::qft(reg_qubits(instr.reg_ops[0]), instr.mn == Mn::Iqft);
        break;
    case Mn::Cadd:
    case Mn::Icadd:
        f = gates::cadd(instr.qubits, reg_qubits(instr.reg_ops[0]), instr.consts[0],
                        instr.mn == Mn::Icadd);
        break;
    case Mn::Cmodmul:
    case Mn::Icmodmul: {
        const std::uint64_t a = instr.consts[0];
        const std::uint64_t n = instr.consts[1];
        if (warnings && std::gcd(a % n, n) != 1) {
            warnings->push_back("line " + std::to_string(instr.line) + ": multiplier " +
                                std::to_string(a) + " is not invertible mod " + std::to_string(n));
        }
        f = gates::cmodmul(instr.qubits[0], a, reg_qubits(instr.reg_ops[0]),
                           reg_qubits(instr.reg_ops[1]), n, instr.qubits[1],
                           instr.mn == Mn::Icmodmul,
                           /*enforce_invertible=*/false, instr.ctrl_routing);
        break;
    }
    case Mn::AssertClassical:
    case Mn::AssertSuperposition:
    case Mn::AssertEntangled:
    case Mn::AssertProduct:
        break;
    }
    return f;
}

namespace {

std::string qubit_ref(const std::vector<RegisterDecl>& regs, int qubit) {
    const RegisterDecl& r = register_of(regs, qubit);
    return r.name + "[" + std::to_string(qubit - r.offset) + "]";
}

void render_instruction(std::string& out, const std::vector<RegisterDecl>& regs,
                        const Instruction& in) {
    auto q = [&](int i) { return qubit_ref(regs, in.qubits[static_cast<std::size_t>(i)]); };
    auto reg_name = [&](int i) {
        return slice_name(regs, in.reg_ops[static_cast<std::size_t>(i)]);
    };
    switch (in.mn) {
    case Mn::Prep:
        out += "prep " + q(0) + " " + std::to_string(in.consts[0]);
        break;
    case Mn::X:
        out += "x " + q(0);
        break;
    case Mn::H:
        out += "h " + q(0);
        break;
    case Mn::Z:
        out += "z " + q(0);
        break;
    case Mn::Rz:
        out += "rz " + q(0) + " " + in.angle.str();
        break;
    case Mn::Cx:
        out += "cx " + q(0) + " " + q(1);
        break;
    case Mn::Cz:
        out += "cz " + q(0) + " " + q(1);
        break;
    case Mn::Ccx:
        out += "ccx " + q(0) + " " + q(1) + " " + q(2);
        break;
    case Mn::Crz:
        out += "crz " + q(0) + " " + q(1) + " " + in.angle.str();
        break;
    case Mn::Ccrz:
        out += "ccrz " + q(0) + " " + q(1) + " " + q(2) + " " + in.angle.str();
        break;
    case Mn::Qft:
        out += "qft " + reg_name(0);
        break;
    case Mn::Iqft:
        out += "iqft " + reg_name(0);
        break;
    case Mn::Cadd:
    case Mn::Icadd:
        out += in.mn == Mn::Cadd ? "cadd " : "icadd ";
        out += std::to_string(in.consts[0]) + " " + reg_name(0);
        for (std::size_t i = 0; i < in.qubits.size(); ++i) {
            out += " " + qubit_ref(regs, in.qubits[i]);
        }
        break;
    case Mn::Cmodmul:
    case Mn::Icmodmul:
        out += in.mn == Mn::Cmodmul ? "cmodmul " : "icmodmul ";
        out += q(0) + " " + std::to_string(in.consts[0]) + " " + reg_name(0) + " " + reg_name(1) +
               " " + std::to_string(in.consts[1]) + " " + q(1);
        if (in.ctrl_routing) out += " ctrl-routing";
        break;
    case Mn::AssertClassical:
        out += "assert classical " + reg_name(0) + " " + std::to_string(in.consts[0]);
        break;
    case Mn::AssertSuperposition:
        out += "assert superposition " + reg_name(0);
        break;
    case Mn::AssertEntangled:
        out += "assert entangled " + reg_name(0) + " " + reg_name(1);
        break;
    case Mn::AssertProduct:
        out += "assert product " + reg_name(0) + " " + reg_name(1);
        break;
    }
    out += '\n';
}

Instruction make_assert_instruction(const AssertionSpec& spec) {
    Instruction in;
    switch (spec.kind) {
    case AssertKind::Classical:
        in.mn = Mn::AssertClassical;
        in.reg_ops = {spec.a};
        in.consts = {spec.expected};
        break;
    case AssertKind::Superposition:
        in.mn = Mn::AssertSuperposition;
        in.reg_ops = {spec.a};
        break;
    case AssertKind::Entangled:
        in.mn = Mn::AssertEntangled;
        in.reg_ops = {spec.a, spec.b};
        break;
    case AssertKind::Product:
        in.mn = Mn::AssertProduct;
        in.reg_ops = {spec.a, spec.b};
        break;
    }
    return in;
}

} // namespace

std::string emit_native(const BreakpointProgram& bp) {
    std::string out;
    for (const RegisterDecl& r : bp.registers) {
        out += "reg " + r.name + " " + std::to_string(r.width) + "\n";
    }
    for (const Instruction& in : bp.prefix) {
        render_instruction(out, bp.registers, in);
    }
    render_instruction(out, bp.registers, make_assert_instruction(bp.assertion));
    return out;
}

std::string emit_qasm_subset(const BreakpointProgram& bp) {
    std::string out = "version 1\n";
    out += "qubits " + std::to_string(bp.num_qubits) + "\n";
    auto qname = [](int q) { return "q" + std::to_string(q); };
    for (const Instruction& in : bp.prefix) {
        for (const gates::Op& op : expand(in, bp.registers).ops) {
            std::string line;
            switch (op.g) {
            case gates::Gate::X:
                line = op.controls.empty() ? "x" : (op.controls.size() == 1 ? "cx" : "ccx");
                break;
            case gates::Gate::H:
                line = "h";
                break;
            case gates::Gate::Z:
                line = op.controls.empty() ? "z" : "cz";
                break;
            case gates::Gate::Rz:
            case gates::Gate::Phase:
                line = op.controls.empty() ? "rz" : (op.controls.size() == 1 ? "crz" : "ccrz");
                break;
            }
            for (int c : op.controls) line += " " + qname(c);
            for (int t : op.targets) line += " " + qname(t);
            if (op.g == gates::Gate::Rz || op.g == gates::Gate::Phase) {
                line += " " + op.angle.str();
            }
            out += line + "\n";
        }
    }
    out += "measure_all\n";
    return out;
}

} // namespace qassert::lang
