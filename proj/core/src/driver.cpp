#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "qassert/driver.hpp"
#include "qassert/errors.hpp"

namespace qassert::driver {

namespace {

lang::Program parse_or_throw(const std::string& text, const std::string& display_name) {
    lang::Program prog = lang::parse(text);
    if (!prog.ok()) {
        throw ParseFailure("program '" + display_name + "' has " +
                               std::to_string(prog.errors.size()) + " error(s)",
                           prog.errors);
    }
    return prog;
}

engine::Status overall_of(const std::vector<engine::Verdict>& verdicts) {
    bool any_indeterminate = false;
    for (const engine::Verdict& v : verdicts) {
        if (v.status == engine::Status::Fail) return engine::Status::Fail;
        if (v.status == engine::Status::Indeterminate) any_indeterminate = true;
    }
    return any_indeterminate ? engine::Status::Indeterminate : engine::Status::Pass;
}

} // namespace

Report run_text(const std::string& text, const std::string& display_name,
                const std::optional<std::string>& bug, const engine::RunOptions& opts) {
    lang::Program prog = parse_or_throw(text, display_name);
    if (bug) {
        prog = inject_bug(prog, *bug);
    }
    engine::ProgramRun run = engine::check_program(prog, opts);

    Report report;
    report.program_name = display_name;
    report.bug = bug;
    report.alpha = opts.alpha;
    report.seed = opts.seed;
    report.forced_shots = opts.shots;
    report.per_shot_rerun = opts.per_shot_rerun;
    report.registers = prog.registers;
    report.verdicts = std::move(run.verdicts);
    report.warnings = std::move(run.warnings);
    report.overall = overall_of(report.verdicts);
    return report;
}

Report run_benchmark(const std::string& name, const std::optional<std::string>& bug,
                     const engine::RunOptions& opts) {
    const BenchmarkSpec* spec = find_benchmark(name);
    if (!spec) {
        generate_program_text(name); // throws, naming the valid benchmarks
        return {};
    }
    if (bug) {
        const bool known = std::any_of(spec->bugs.begin(), spec->bugs.end(),
                                       [&](const BugInfo& b) { return b.id == *bug; });
        if (!known) {
            std::string ids;
            for (const BugInfo& b : spec->bugs) {
                ids += ids.empty() ? b.id : ", " + b.id;
            }
            throw UsageError("benchmark '" + name + "' has no bug '" + *bug +
                             "' (have: " + (ids.empty() ? "none" : ids) + ")");
        }
    }
    return run_text(spec->generate(), name, bug, opts);
}

std::vector<std::string> emit_breakpoints(const std::string& text,
                                          const std::optional<std::string>& bug,
                                          const std::string& stem, const std::string& dir,
                                          const std::string& dialect) {
    if (dialect != "native" && dialect != "qasm-subset") {
        throw UsageError("unknown dialect '" + dialect + "' (native, qasm-subset)");
    }
    lang::Program prog = parse_or_throw(text, stem);
    if (bug) {
        prog = inject_bug(prog, *bug);
    }
    engine::SplitResult split = engine::split_at_breakpoints(prog);

    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    for (const lang::BreakpointProgram& bp : split.breakpoints) {
        const std::string ext = dialect == "native" ? ".qprog" : ".qasm";
        const std::string name = stem + "_bp" + std::to_string(bp.index) + ext;
        const std::filesystem::path path = std::filesystem::path(dir) / name;
        std::ofstream out(path);
        if (!out) {
            throw ResourceError("cannot write " + path.string());
        }
        out << (dialect == "native" ? lang::emit_native(bp) : lang::emit_qasm_subset(bp));
        written.push_back(path.string());
    }
    return written;
}

} // namespace qassert::driver
