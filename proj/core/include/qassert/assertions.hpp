#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qassert/program.hpp"
#include "qassert/statevector.hpp"
#include "qassert/stats.hpp"

namespace qassert::engine {

struct SplitResult {
    std::vector<lang::BreakpointProgram> breakpoints;
    std::vector<std::string> warnings;
};

/// One truncated program per assertion directive, in source order. The k-th
/// prefix holds exactly the non-assert instructions preceding assertion k.
SplitResult split_at_breakpoints(const lang::Program& program);

/// Shot-indexed full-width outcomes of one truncated program.
struct MeasurementEnsemble {
    int num_qubits = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> shots;

    std::uint64_t reading(std::size_t shot, int offset, int width) const {
        const std::uint64_t mask =
            width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
        return (shots[shot] >> offset) & mask;
    }
    stats::Histogram reading_histogram(int offset, int width) const;
};

/// Simulates the breakpoint prefix once and samples `shots` outcomes from
/// seeded per-shot streams. per_shot_rerun instead rebuilds the state for
/// every shot and measures it destructively; the histograms are identical,
/// the cost is not.
MeasurementEnsemble run_ensemble(const lang::BreakpointProgram& bp, int shots,
                                 std::uint64_t seed, bool per_shot_rerun = false,
                                 std::vector<std::string>* warnings = nullptr);

enum class Status { Pass, Fail, Indeterminate };
const char* status_name(Status s);

/// A register window inside the measured bitstrings.
struct RegisterView {
    std::string name;
    int offset = 0;
    int width = 0;
};

RegisterView view_of(const std::vector<lang::RegisterDecl>& regs, const lang::RegSlice& slice);

struct Verdict {
    lang::AssertionSpec assertion;
    Status status = Status::Indeterminate;
    std::optional<stats::ChiSquareResult> chi;
    std::optional<double> p_value;
    /// The test degenerated (constant register, all shots identical, ...).
    bool degenerate = false;
    /// Shot count below chi-square validity guidance for this hypothesis.
    bool low_power = false;
    int shots = 0;
    std::uint64_t seed = 0;
    std::string note;
    std::vector<std::uint64_t> deviating; // classical: distinct wrong readings
    stats::Histogram hist_a;
    stats::Histogram hist_b;
    /// Full-width outcome counts of the breakpoint ensemble, for reporting.
    stats::Histogram full_hist;
    std::optional<stats::ContingencyTable> table;
};

/// Exact test: pass with p = 1.0 iff every reading equals expected,
/// else fail with p = 0.0 and the deviating outcomes recorded.
Verdict check_classical(const MeasurementEnsemble& ens, const RegisterView& reg,
                        std::uint64_t expected);

/// Chi-square goodness of fit against the uniform distribution over all
/// 2^width readings. Pass iff p > alpha.
Verdict check_superposition(const MeasurementEnsemble& ens, const RegisterView& reg,
                            double alpha);

/// Contingency-table independence test on the joint readings. Pass iff
/// independence is REJECTED (p <= alpha): rejection is the success case.
/// Degenerate data (a constant register) cannot reject and never passes.
Verdict check_entangled(const MeasurementEnsemble& ens, const RegisterView& a,
                        const RegisterView& b, double alpha);

/// Same table, inverted reading: pass iff independence is NOT rejected
/// (p > alpha). A constant register is trivially unentangled in the measured
/// basis: pass-degenerate with p = 1.0.
Verdict check_product(const MeasurementEnsemble& ens, const RegisterView& a,
                      const RegisterView& b, double alpha);

struct RunOptions {
    std::optional<int> shots; // force every breakpoint; else per-kind default
    std::uint64_t seed = 20230917;
    double alpha = 0.05;
    bool per_shot_rerun = false;
    int worker_threads = 0; // 0 = hardware concurrency
};

int default_shots(lang::AssertKind kind, int width);

struct ProgramRun {
    std::vector<Verdict> verdicts;
    std::vector<std::string> warnings;
};

/// Full pipeline: split, run every breakpoint ensemble (possibly on worker
/// threads), check. Output is a deterministic function of
/// (program, shots, seed, alpha) regardless of thread count.
ProgramRun check_program(const lang::Program& program, const RunOptions& opts);

} // namespace qassert::engine
