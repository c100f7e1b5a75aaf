// Acceptance suite: end-to-end checks of the shipped benchmarks against
// their documented behavior, one printed line per criterion. Exits nonzero
// if any criterion fails. Thresholds are fixed here, not tuned at runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qassert/assertions.hpp"
#include "qassert/driver.hpp"
#include "qassert/program.hpp"
#include "qassert/stats.hpp"

using namespace qassert;
using engine::Status;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

// max_seconds <= 0 means no runtime budget for the criterion.
void criterion(int id, const std::string& name, double max_seconds,
               const std::function<bool()>& body) {
    g_notes.clear();
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
        ok = body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && max_seconds > 0 && secs > max_seconds) {
        ok = false;
        note("runtime " + std::to_string(secs) + "s exceeds the " +
             std::to_string(max_seconds) + "s budget");
    }
    std::printf("[%s] C%-2d %-52s (%.2fs)\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs);
    if (!ok) {
        ++g_failures;
        if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
        for (const std::string& n : g_notes) std::printf("       %s\n", n.c_str());
    }
}

bool expect(bool cond, const std::string& what) {
    if (!cond) note("failed: " + what);
    return cond;
}

const engine::Verdict* verdict_of_kind(const driver::Report& r, lang::AssertKind kind, int nth = 0) {
    int seen = 0;
    for (const auto& v : r.verdicts) {
        if (v.assertion.kind == kind && seen++ == nth) return &v;
    }
    return nullptr;
}

stats::Histogram marginal(const stats::Histogram& full, int offset, int width) {
    stats::Histogram h;
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    for (const auto& [outcome, count] : full.counts) {
        h.add((outcome >> offset) & mask, count);
    }
    return h;
}

// High-resolution quadrature for Q(a, x); the independent reference the
// statistics kernel is held against.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double fm, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m));
    const double frm = f(0.5 * (m + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson(f, a, m, fa, fm, flm, 0.5 * eps, depth - 1) +
           simpson(f, m, b, fm, fb, frm, 0.5 * eps, depth - 1);
}

double gamma_q_oracle(double a, double x) {
    if (x == 0.0) return 1.0;
    const auto f = [a, x](double s) { return std::pow(x + s, a - 1.0) * std::exp(-s); };
    double acc = 0.0, lo = 0.0;
    for (double hi : {1.0, 4.0, 16.0, 60.0 + 10.0 * a + x}) {
        if (hi <= lo) continue;
        const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        acc += simpson(f, lo, hi, fa, fb, fm, 1e-15 * (1.0 + acc), 48);
        lo = hi;
    }
    return std::exp(-x + std::log(acc) - std::lgamma(a));
}

bool c1_qft_harness() {
    engine::RunOptions opts;
    opts.shots = 160;
    const driver::Report r = driver::run_benchmark("qft_harness", std::nullopt, opts);
    bool ok = expect(r.verdicts.size() == 3, "three assertions");
    ok &= expect(r.verdicts[0].status == Status::Pass, "classical(5) precondition passes");
    ok &= expect(r.verdicts[1].status == Status::Pass, "superposition at 160 shots passes");
    ok &= expect(r.verdicts[2].status == Status::Pass, "classical(5) postcondition passes");
    // Deterministic at fixed seed.
    const driver::Report again = driver::run_benchmark("qft_harness", std::nullopt, opts);
    ok &= expect(driver::render_json(r) == driver::render_json(again), "fixed-seed determinism");
    return ok;
}

bool c2_adder() {
    engine::RunOptions opts;
    const driver::Report clean = driver::run_benchmark("cadd_harness", std::nullopt, opts);
    bool ok = expect(clean.overall == Status::Pass, "clean adder asserts 25");

    const driver::Report bugged = driver::run_benchmark("cadd_harness", "flipped-angles", opts);
    const engine::Verdict& out = bugged.verdicts.back();
    ok &= expect(out.status == Status::Fail, "flipped-angles fails the output assertion");
    ok &= expect(out.p_value.has_value() && *out.p_value == 0.0, "p = 0.0 exactly");
    return ok;
}

bool c3_multiplier() {
    engine::RunOptions opts;
    opts.shots = 16;
    opts.alpha = 0.05;

    const driver::Report clean = driver::run_benchmark("cmodmul_harness", std::nullopt, opts);
    const engine::Verdict* ent = verdict_of_kind(clean, lang::AssertKind::Entangled);
    const engine::Verdict* prod = verdict_of_kind(clean, lang::AssertKind::Product);
    bool ok = expect(ent && ent->status == Status::Pass, "clean: entangled passes");
    ok &= expect(prod && prod->status == Status::Pass, "clean: product passes");
    ok &= expect(prod && prod->p_value.has_value() && *prod->p_value == 1.0,
                 "clean: product p = 1.0 exactly");

    const driver::Report routing = driver::run_benchmark("cmodmul_harness", "ctrl-routing", opts);
    const engine::Verdict* ent2 = verdict_of_kind(routing, lang::AssertKind::Entangled);
    ok &= expect(ent2 && ent2->status == Status::Fail, "ctrl-routing: entangled fails");

    const driver::Report inverse = driver::run_benchmark("cmodmul_harness", "wrong-inverse", opts);
    const engine::Verdict* prod2 = verdict_of_kind(inverse, lang::AssertKind::Product);
    ok &= expect(prod2 && prod2->status == Status::Fail, "wrong-inverse: product fails");
    return ok;
}

bool c4_shor_clean() {
    engine::RunOptions opts;
    opts.shots = 256;
    const driver::Report r = driver::run_benchmark("shor15", std::nullopt, opts);
    bool ok = expect(r.overall == Status::Pass, "all assertions pass");

    const stats::Histogram up = marginal(r.verdicts.back().full_hist, 0, 3);
    ok &= expect(up.total == 256, "256 shots recorded");
    for (const auto& [v, count] : up.counts) {
        ok &= expect(v == 0 || v == 2 || v == 4 || v == 6,
                     "outcome " + std::to_string(v) + " outside {0,2,4,6}");
    }
    for (std::uint64_t v : {0, 2, 4, 6}) {
        const double f = static_cast<double>(up.count(v)) / 256.0;
        ok &= expect(f >= 0.15 && f <= 0.35,
                     "frequency of " + std::to_string(v) + " = " + std::to_string(f));
    }
    return ok;
}

bool c5_shor_wrong_inverse() {
    engine::RunOptions opts;
    opts.shots = 512;
    const driver::Report r = driver::run_benchmark("shor15", "wrong-inverse", opts);

    const engine::Verdict* scratch = nullptr;
    for (const auto& v : r.verdicts) {
        if (v.assertion.kind == lang::AssertKind::Classical && v.assertion.expected == 0) {
            scratch = &v;
            break;
        }
    }
    bool ok = expect(scratch != nullptr, "scratch postcondition present");
    ok &= expect(scratch && scratch->status == Status::Fail, "scratch postcondition fails");

    // Registers: up[0..3), x[3..8), b[8..13), anc[13].
    const stats::Histogram& full = r.verdicts.back().full_hist;
    double n = 0, scratch_zero = 0, good_up = 0;
    for (const auto& [outcome, count] : full.counts) {
        n += static_cast<double>(count);
        const std::uint64_t b = (outcome >> 8) & 31, anc = outcome >> 13;
        if (b == 0 && anc == 0) {
            scratch_zero += static_cast<double>(count);
            const std::uint64_t up = outcome & 7;
            if (up == 0 || up == 2 || up == 4 || up == 6) good_up += static_cast<double>(count);
        }
    }
    const double p_zero = scratch_zero / n;
    ok &= expect(p_zero >= 0.40 && p_zero <= 0.60,
                 "P(scratch = 0) = " + std::to_string(p_zero));
    const double p_good = good_up / scratch_zero;
    ok &= expect(p_good >= 0.9, "P(output in {0,2,4,6} | scratch=0) = " + std::to_string(p_good));
    return ok;
}

bool c6_arithmetic_sweeps() {
    // Adder: all 1024 (a, b) pairs at width 5 against integer addition.
    const lang::Program adder = lang::parse("reg b 5\nqft b\nassert superposition b\n");
    bool ok = true;
    {
        std::vector<int> b{0, 1, 2, 3, 4};
        for (std::uint64_t a = 0; a < 32 && ok; ++a) {
            const gates::CircuitFragment frag = gates::cadd({}, b, a);
            for (std::uint64_t v = 0; v < 32; ++v) {
                sim::StateVector st(5);
                for (int i = 0; i < 5; ++i) {
                    if ((v >> i) & 1u) {
                        st.apply(gates::elementary(gates::Gate::X), std::array{i});
                    }
                }
                gates::qft(b).apply_to(st);
                frag.apply_to(st);
                gates::qft(b, true).apply_to(st);
                const std::uint64_t want = (a + v) & 31;
                if (std::norm(st.amp(want)) < 0.999) {
                    ok = expect(false, "cadd mismatch at a=" + std::to_string(a) +
                                           " b=" + std::to_string(v));
                    break;
                }
            }
        }
    }
    // Multiplier: all x, b < 15 with a in {7, 13, 4, 1}, both control values.
    {
        std::vector<int> x{1, 2, 3, 4, 5}, b{6, 7, 8, 9, 10};
        for (std::uint64_t a : {7ULL, 13ULL, 4ULL, 1ULL}) {
            const gates::CircuitFragment frag = gates::cmodmul(0, a, x, b, 15, 11);
            for (int ctl = 0; ctl < 2 && ok; ++ctl) {
                for (std::uint64_t xv = 0; xv < 15 && ok; ++xv) {
                    for (std::uint64_t bv = 0; bv < 15; ++bv) {
                        sim::StateVector st(12);
                        if (ctl) st.apply(gates::elementary(gates::Gate::X), std::array{0});
                        for (int i = 0; i < 5; ++i) {
                            if ((xv >> i) & 1u)
                                st.apply(gates::elementary(gates::Gate::X), std::array{x[static_cast<std::size_t>(i)]});
                            if ((bv >> i) & 1u)
                                st.apply(gates::elementary(gates::Gate::X), std::array{b[static_cast<std::size_t>(i)]});
                        }
                        frag.apply_to(st);
                        const std::uint64_t want_b = ctl ? (a * xv + bv) % 15 : bv;
                        const std::uint64_t want =
                            static_cast<std::uint64_t>(ctl) | (xv << 1) | (want_b << 6);
                        if (std::norm(st.amp(want)) < 0.999) {
                            ok = expect(false, "cmodmul mismatch at a=" + std::to_string(a) +
                                                   " ctl=" + std::to_string(ctl) +
                                                   " x=" + std::to_string(xv) +
                                                   " b=" + std::to_string(bv));
                            break;
                        }
                    }
                }
            }
        }
    }
    (void)adder;
    return ok;
}

bool c7_statistics_kernel() {
    bool ok = true;
    const double as[] = {0.5, 1.0, 2.5, 8.0};
    const double xs[] = {0.0, 0.25, 0.5, 1.0, 1.920729, 3.841, 5.0, 8.0, 13.0, 20.0, 27.0, 33.0, 40.0};
    for (double a : as) {
        for (double x : xs) {
            const double want = gamma_q_oracle(a, x);
            const double got = stats::gamma_q(a, x);
            const double rel = std::fabs(got - want) / std::max(want, 1e-300);
            if (rel > 1e-8) {
                ok = expect(false, "gamma_q(" + std::to_string(a) + "," + std::to_string(x) +
                                       ") rel err " + std::to_string(rel));
            }
        }
    }

    stats::ContingencyTable bell;
    bell.add(0, 0, 8);
    bell.add(1, 1, 8);
    const stats::ContingencyResult r = stats::chi2_contingency(bell);
    ok &= expect(std::fabs(r.statistic - 16.0) < 1e-12, "bell table statistic = 16");
    ok &= expect(r.dof == 1, "bell table dof = 1");
    const double oracle_p = gamma_q_oracle(0.5, 8.0);
    ok &= expect(std::fabs(r.p_value - oracle_p) < 1e-6,
                 "bell table p within 1e-6 of the oracle");
    ok &= expect(std::fabs(oracle_p - 6.33e-5) < 5e-7, "oracle p is about 6.3e-5");
    return ok;
}

bool c8_soak() {
    bool ok = true;
    // Bell entangled at 16 shots: at least 99 of 100 seeds pass.
    {
        const lang::Program p = lang::parse(driver::generate_program_text("bell"));
        const auto split = engine::split_at_breakpoints(p);
        int passes = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto ens = engine::run_ensemble(split.breakpoints[0], 16, seed);
            const auto v = engine::check_entangled(ens, {"q[0]", 0, 1}, {"q[1]", 1, 1}, 0.05);
            if (v.status == Status::Pass) ++passes;
        }
        ok &= expect(passes >= 99, "bell entangled passes " + std::to_string(passes) + "/100");
    }
    // Independent qubits, product assertion at 16 shots: at least 90 pass.
    {
        const lang::Program p =
            lang::parse("reg a 1\nreg b 1\nh a[0]\nh b[0]\nassert product a b\n");
        const auto split = engine::split_at_breakpoints(p);
        int passes = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto ens = engine::run_ensemble(split.breakpoints[0], 16, seed);
            const auto v = engine::check_product(ens, {"a", 0, 1}, {"b", 1, 1}, 0.05);
            if (v.status == Status::Pass) ++passes;
        }
        ok &= expect(passes >= 90, "independent product passes " + std::to_string(passes) + "/100");
    }
    // Power monotonicity over growing ensembles.
    {
        const lang::Program p = lang::parse(driver::generate_program_text("bell"));
        const auto split = engine::split_at_breakpoints(p);
        double prev = -1.0;
        for (int shots : {4, 8, 16, 32}) {
            int passes = 0;
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const auto ens = engine::run_ensemble(split.breakpoints[0], shots, seed);
                if (engine::check_entangled(ens, {"q[0]", 0, 1}, {"q[1]", 1, 1}, 0.05).status ==
                    Status::Pass) {
                    ++passes;
                }
            }
            const double rate = passes / 100.0;
            ok &= expect(rate >= prev, "rejection rate nondecreasing at " +
                                           std::to_string(shots) + " shots");
            prev = rate;
        }
    }
    return ok;
}

bool c9_coverage_matrix() {
    bool ok = true;
    engine::RunOptions opts; // default shots, seed, alpha
    for (const auto& bench : driver::registry()) {
        const driver::Report clean = driver::run_benchmark(bench.name, std::nullopt, opts);
        ok &= expect(clean.overall == Status::Pass, bench.name + ": clean run passes");
        for (const auto& bug : bench.bugs) {
            const driver::Report bugged = driver::run_benchmark(bench.name, bug.id, opts);
            ok &= expect(bugged.overall == Status::Fail,
                         bench.name + "+" + bug.id + ": bugged run fails");
            // At least the paired defense must trip, not just any assertion.
            bool paired_failed = false;
            for (const auto& v : bugged.verdicts) {
                paired_failed |=
                    v.assertion.kind == bug.defense_kind && v.status == Status::Fail;
            }
            ok &= expect(paired_failed,
                         bench.name + "+" + bug.id + ": paired " + bug.defense + " fails");
        }
    }
    return ok;
}

bool c10_determinism() {
    bool ok = true;
    engine::RunOptions serial;
    serial.worker_threads = 1;
    engine::RunOptions parallel;
    parallel.worker_threads = 8;
    for (const auto& bench : driver::registry()) {
        const std::string a =
            driver::render_json(driver::run_benchmark(bench.name, std::nullopt, serial));
        const std::string b =
            driver::render_json(driver::run_benchmark(bench.name, std::nullopt, parallel));
        const std::string c =
            driver::render_json(driver::run_benchmark(bench.name, std::nullopt, parallel));
        ok &= expect(a == b && b == c, bench.name + ": byte-identical reports");
    }
    return ok;
}

} // namespace

int main() {
    criterion(1, "qft harness: classical/superposition/classical", 1.0, c1_qft_harness);
    criterion(2, "adder harness: clean 25, flipped angles p=0.0", 1.0, c2_adder);
    criterion(3, "multiplier harness: entangled/product verdicts", 5.0, c3_multiplier);
    criterion(4, "shor-15 clean: outputs on {0,2,4,6}, scratch clear", 60.0, c4_shor_clean);
    criterion(5, "shor-15 wrong inverse: scratch half-corrupted", 0.0, c5_shor_wrong_inverse);
    criterion(6, "arithmetic oracle sweeps: adder and multiplier", 120.0, c6_arithmetic_sweeps);
    criterion(7, "statistics kernel vs quadrature oracle", 0.0, c7_statistics_kernel);
    criterion(8, "soak: seed-robust verdict rates and power", 120.0, c8_soak);
    criterion(9, "bug/defense coverage matrix", 0.0, c9_coverage_matrix);
    criterion(10, "byte-identical reports across thread counts", 0.0, c10_determinism);

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
