#include "qassert/assertions.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "qassert/errors.hpp"

namespace qassert::engine {

SplitResult split_at_breakpoints(const lang::Program& program) {
    if (!program.ok()) {
        throw UsageError("split_at_breakpoints: program has unresolved errors");
    }
    SplitResult result;
    std::vector<lang::Instruction> prefix;
    int index = 0;
    for (const lang::Instruction& in : program.instructions) {
        if (in.is_assert()) {
            lang::BreakpointProgram bp;
            bp.registers = program.registers;
            bp.num_qubits = program.num_qubits;
            bp.prefix = prefix;
            bp.assertion = lang::assertion_spec(in);
            bp.index = index++;
            result.breakpoints.push_back(std::move(bp));
        } else {
            prefix.push_back(in);
        }
    }
    if (result.breakpoints.empty()) {
        result.warnings.push_back("program contains no assertions; nothing to check");
    }
    return result;
}

stats::Histogram MeasurementEnsemble::reading_histogram(int offset, int width) const {
    stats::Histogram h;
    for (std::size_t s = 0; s < shots.size(); ++s) {
        h.add(reading(s, offset, width));
    }
    return h;
}

namespace {

sim::StateVector build_state(const lang::BreakpointProgram& bp,
                             std::vector<std::string>* warnings) {
    sim::StateVector state(bp.num_qubits);
    for (const lang::Instruction& in : bp.prefix) {
        lang::expand(in, bp.registers, warnings).apply_to(state);
    }
    return state;
}

} // namespace

MeasurementEnsemble run_ensemble(const lang::BreakpointProgram& bp, int shots,
                                 std::uint64_t seed, bool per_shot_rerun,
                                 std::vector<std::string>* warnings) {
    if (shots < 1) throw UsageError("run_ensemble: need at least one shot");
    MeasurementEnsemble ens;
    ens.num_qubits = bp.num_qubits;
    ens.seed = seed;
    try {
        if (per_shot_rerun) {
            ens.shots.reserve(static_cast<std::size_t>(shots));
            for (int s = 0; s < shots; ++s) {
                sim::StateVector state = build_state(bp, s == 0 ? warnings : nullptr);
                sim::ShotRng rng(seed, static_cast<std::uint64_t>(s));
                ens.shots.push_back(state.measure_shot(rng).value);
            }
        } else {
            const sim::StateVector state = build_state(bp, warnings);
            ens.shots = state.sample_shots(shots, seed);
        }
    } catch (const ResourceError& e) {
        throw ResourceError("breakpoint " + std::to_string(bp.index) + " (line " +
                            std::to_string(bp.assertion.line) + "): " + e.what());
    }
    return ens;
}

const char* status_name(Status s) {
    switch (s) {
    case Status::Pass:
        return "pass";
    case Status::Fail:
        return "fail";
    case Status::Indeterminate:
        return "indeterminate";
    }
    return "?";
}

RegisterView view_of(const std::vector<lang::RegisterDecl>& regs, const lang::RegSlice& slice) {
    RegisterView v;
    v.name = lang::slice_name(regs, slice);
    v.offset = lang::slice_offset(regs, slice);
    v.width = lang::slice_width(regs, slice);
    return v;
}

namespace {

void require_in_range(const MeasurementEnsemble& ens, const RegisterView& reg) {
    if (reg.offset < 0 || reg.width < 1 || reg.offset + reg.width > ens.num_qubits) {
        throw UsageError("register '" + reg.name + "' is wider than the measured data");
    }
}

} // namespace

Verdict check_classical(const MeasurementEnsemble& ens, const RegisterView& reg,
                        std::uint64_t expected) {
    require_in_range(ens, reg);
    if (ens.shots.empty()) throw UsageError("check_classical: empty ensemble");

    Verdict v;
    v.shots = static_cast<int>(ens.shots.size());
    v.seed = ens.seed;
    v.hist_a = ens.reading_histogram(reg.offset, reg.width);

    for (const auto& [outcome, count] : v.hist_a.counts) {
        if (outcome != expected) v.deviating.push_back(outcome);
    }
    if (v.deviating.empty()) {
        v.status = Status::Pass;
        v.p_value = 1.0;
    } else {
        v.status = Status::Fail;
        v.p_value = 0.0;
        v.note = "observed readings other than " + std::to_string(expected);
    }
    return v;
}

Verdict check_superposition(const MeasurementEnsemble& ens, const RegisterView& reg,
                            double alpha) {
    require_in_range(ens, reg);
    if (ens.shots.size() < 2) throw UsageError("check_superposition: need at least two shots");

    Verdict v;
    v.shots = static_cast<int>(ens.shots.size());
    v.seed = ens.seed;
    v.hist_a = ens.reading_histogram(reg.offset, reg.width);

    const std::uint64_t cells = std::uint64_t{1} << reg.width;
    const std::vector<double> uniform(cells, 1.0 / static_cast<double>(cells));
    const stats::GofResult r = stats::chi2_gof(v.hist_a, uniform);
    v.chi = r;
    v.p_value = r.p_value;
    v.low_power = ens.shots.size() < 5 * cells;
    v.status = r.p_value > alpha ? Status::Pass : Status::Fail;
    if (v.status == Status::Fail) {
        v.note = "readings are not consistent with a uniform superposition";
    }
    return v;
}

namespace {

stats::ContingencyTable joint_table(const MeasurementEnsemble& ens, const RegisterView& a,
                                    const RegisterView& b) {
    stats::ContingencyTable t;
    for (std::size_t s = 0; s < ens.shots.size(); ++s) {
        t.add(ens.reading(s, a.offset, a.width), ens.reading(s, b.offset, b.width));
    }
    return t;
}

Verdict pair_verdict_base(const MeasurementEnsemble& ens, const RegisterView& a,
                          const RegisterView& b) {
    require_in_range(ens, a);
    require_in_range(ens, b);
    if (a.offset < b.offset + b.width && b.offset < a.offset + a.width) {
        throw UsageError("registers '" + a.name + "' and '" + b.name + "' overlap");
    }
    if (ens.shots.size() < 2) throw UsageError("need at least two shots");

    Verdict v;
    v.shots = static_cast<int>(ens.shots.size());
    v.seed = ens.seed;
    v.hist_a = ens.reading_histogram(a.offset, a.width);
    v.hist_b = ens.reading_histogram(b.offset, b.width);
    v.table = joint_table(ens, a, b);
    return v;
}

} // namespace

Verdict check_entangled(const MeasurementEnsemble& ens, const RegisterView& a,
                        const RegisterView& b, double alpha) {
    Verdict v = pair_verdict_base(ens, a, b);
    const bool a_const = v.hist_a.counts.size() == 1;
    const bool b_const = v.hist_b.counts.size() == 1;

    if (a_const && b_const) {
        // Every shot identical. Perfect mutual predictability, but a single
        // repeated outcome is equally consistent with two classical
        // constants, so no dependence was demonstrated.
        v.status = Status::Fail;
        v.degenerate = true;
        v.note = "all shots identical; dependence not demonstrable";
        return v;
    }
    if (a_const || b_const) {
        v.status = Status::Indeterminate;
        v.degenerate = true;
        v.note = std::string("register '") + (a_const ? a.name : b.name) +
                 "' was constant; independence untestable";
        return v;
    }

    const stats::ContingencyResult r = stats::chi2_contingency(*v.table);
    v.chi = r;
    v.p_value = r.p_value;
    v.low_power = r.low_expected;
    if (r.indeterminate) {
        v.status = Status::Indeterminate;
        v.degenerate = true;
        return v;
    }
    v.status = r.p_value <= alpha ? Status::Pass : Status::Fail;
    if (v.status == Status::Fail) {
        v.note = "entanglement not detected (evidence of a bug, not proof of separability)";
    }
    return v;
}

Verdict check_product(const MeasurementEnsemble& ens, const RegisterView& a,
                      const RegisterView& b, double alpha) {
    Verdict v = pair_verdict_base(ens, a, b);
    const bool a_const = v.hist_a.counts.size() == 1;
    const bool b_const = v.hist_b.counts.size() == 1;

    if (a_const || b_const) {
        // A constant register is trivially unentangled in the measured basis.
        v.status = Status::Pass;
        v.degenerate = true;
        v.p_value = 1.0;
        v.note = std::string("register '") + (a_const ? a.name : b.name) +
                 "' was constant; trivially independent";
        return v;
    }

    const stats::ContingencyResult r = stats::chi2_contingency(*v.table);
    v.chi = r;
    v.p_value = r.p_value;
    v.low_power = r.low_expected;
    if (r.indeterminate) {
        v.status = Status::Indeterminate;
        v.degenerate = true;
        return v;
    }
    v.status = r.p_value > alpha ? Status::Pass : Status::Fail;
    if (v.status == Status::Fail) {
        v.note = "registers are still correlated; uncomputation looks incomplete";
    }
    return v;
}

int default_shots(lang::AssertKind kind, int width) {
    switch (kind) {
    case lang::AssertKind::Classical:
        return 16;
    case lang::AssertKind::Superposition: {
        const std::uint64_t cells = std::uint64_t{1} << width;
        return static_cast<int>(std::max<std::uint64_t>(100, 5 * cells));
    }
    case lang::AssertKind::Entangled:
    case lang::AssertKind::Product:
        return 16;
    }
    return 16;
}

namespace {

Verdict check_breakpoint(const lang::BreakpointProgram& bp, const RunOptions& opts,
                         std::vector<std::string>* warnings) {
    const lang::AssertionSpec& spec = bp.assertion;
    const RegisterView a = view_of(bp.registers, spec.a);
    const int shots =
        opts.shots ? *opts.shots : default_shots(spec.kind, a.width);
    const MeasurementEnsemble ens =
        run_ensemble(bp, shots, opts.seed, opts.per_shot_rerun, warnings);

    Verdict v;
    switch (spec.kind) {
    case lang::AssertKind::Classical:
        v = check_classical(ens, a, spec.expected);
        break;
    case lang::AssertKind::Superposition:
        v = check_superposition(ens, a, opts.alpha);
        break;
    case lang::AssertKind::Entangled:
        v = check_entangled(ens, a, view_of(bp.registers, spec.b), opts.alpha);
        break;
    case lang::AssertKind::Product:
        v = check_product(ens, a, view_of(bp.registers, spec.b), opts.alpha);
        break;
    }
    v.assertion = spec;
    for (std::uint64_t outcome : ens.shots) {
        v.full_hist.add(outcome);
    }
    return v;
}

} // namespace

ProgramRun check_program(const lang::Program& program, const RunOptions& opts) {
    SplitResult split = split_at_breakpoints(program);
    ProgramRun run;
    run.warnings = std::move(split.warnings);

    const std::size_t n = split.breakpoints.size();
    run.verdicts.resize(n);
    if (n == 0) return run;

    unsigned workers = opts.worker_threads > 0
                           ? static_cast<unsigned>(opts.worker_threads)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));

    // Each breakpoint collects its own expansion warnings; the ordered,
    // deduplicated merge below keeps the output independent of thread count.
    std::vector<std::vector<std::string>> bp_warnings(n);

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            run.verdicts[i] = check_breakpoint(split.breakpoints[i], opts, &bp_warnings[i]);
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += workers) {
                        run.verdicts[i] =
                            check_breakpoint(split.breakpoints[i], opts, &bp_warnings[i]);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    // Ordered reduction: warnings come out keyed by source order, deduplicated.
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::string& w : bp_warnings[i]) {
            if (std::find(run.warnings.begin(), run.warnings.end(), w) == run.warnings.end()) {
                run.warnings.push_back(w);
            }
        }
    }
    return run;
}

} // namespace qassert::engine
