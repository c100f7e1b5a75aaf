#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qassert/assertions.hpp"
#include "qassert/program.hpp"

namespace qassert::driver {

struct BugInfo {
    std::string id;
    std::string description;
    std::string defense;                // the assertion expected to catch it
    lang::AssertKind defense_kind = lang::AssertKind::Classical;
};

struct BenchmarkSpec {
    std::string name;
    std::string description;
    std::vector<BugInfo> bugs;
    std::string (*generate)() = nullptr;
};

const std::vector<BenchmarkSpec>& registry();
const BenchmarkSpec* find_benchmark(const std::string& name);
std::string generate_program_text(const std::string& name);

/// Grover instance with a configurable marked element (the registry entry
/// uses 5).
std::string generate_grover(std::uint64_t marked, int iterations = 2);

/// Applies one registered fault to a parsed program. Every fault is a
/// minimal structural edit (one sign, one operand, one constant); a fault
/// whose pattern is absent from the program is a usage error.
lang::Program inject_bug(const lang::Program& program, const std::string& bug_id);

/// Parse failure carrying the per-line source errors.
class ParseFailure : public UsageError {
  public:
    ParseFailure(std::string msg, std::vector<lang::SourceError> errs)
        : UsageError(std::move(msg)), errors(std::move(errs)) {}
    std::vector<lang::SourceError> errors;
};

struct Report {
    std::string program_name;
    std::optional<std::string> bug;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<int> forced_shots;
    bool per_shot_rerun = false;
    std::vector<lang::RegisterDecl> registers;
    std::vector<engine::Verdict> verdicts;
    std::vector<std::string> warnings;
    engine::Status overall = engine::Status::Pass;
};

/// Parse + optional fault injection + assertion pipeline.
Report run_text(const std::string& text, const std::string& display_name,
                const std::optional<std::string>& bug, const engine::RunOptions& opts);

Report run_benchmark(const std::string& name, const std::optional<std::string>& bug,
                     const engine::RunOptions& opts);

std::string render_text(const Report& report);
std::string render_json(const Report& report);

/// Truncated programs of (possibly fault-injected) `text`, one file per
/// breakpoint, named <stem>_bp<k>.<ext>. Returns the file names written.
std::vector<std::string> emit_breakpoints(const std::string& text,
                                          const std::optional<std::string>& bug,
                                          const std::string& stem, const std::string& dir,
                                          const std::string& dialect);

} // namespace qassert::driver
