#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qassert/driver.hpp"

namespace {

// Exit codes: 0 pass, 1 assertion failure, 2 indeterminate, 3 usage error,
// 4 resource limit, 5 internal error.
enum ExitCode {
    kPass = 0,
    kAssertionFailed = 1,
    kIndeterminate = 2,
    kUsage = 3,
    kResource = 4,
    kInternal = 5,
};

int worker_threads_from_env() {
    const char* env = std::getenv("QASSERT_THREADS");
    if (!env) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

std::string load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qassert::UsageError("cannot read program file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_command(const std::string& target, const std::optional<std::string>& bug,
                const qassert::engine::RunOptions& opts, const std::string& format,
                const std::optional<std::string>& emit_dir, const std::string& dialect) {
    using namespace qassert;

    // A registered benchmark name wins; anything else is a program file.
    const bool is_benchmark = driver::find_benchmark(target) != nullptr;
    const std::string text = is_benchmark ? driver::generate_program_text(target)
                                          : load_file(target);
    const std::string display =
        is_benchmark ? target : std::filesystem::path(target).stem().string();

    if (emit_dir) {
        for (const std::string& f : driver::emit_breakpoints(text, bug, display, *emit_dir, dialect)) {
            std::cerr << "wrote " << f << "\n";
        }
    }

    const driver::Report report = is_benchmark ? driver::run_benchmark(target, bug, opts)
                                               : driver::run_text(text, display, bug, opts);
    std::cout << (format == "json" ? driver::render_json(report) : driver::render_text(report));

    switch (report.overall) {
    case engine::Status::Pass:
        return kPass;
    case engine::Status::Fail:
        return kAssertionFailed;
    case engine::Status::Indeterminate:
        return kIndeterminate;
    }
    return kInternal;
}

int list_command() {
    for (const auto& b : qassert::driver::registry()) {
        std::cout << b.name << "  - " << b.description << "\n";
        for (const auto& bug : b.bugs) {
            std::cout << "    bug " << bug.id << ": " << bug.description << " (caught by "
                      << bug.defense << ")\n";
        }
    }
    return kPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical assertion checker for quantum programs"};
    app.require_subcommand(1);

    std::string target;
    std::string bug_id;
    std::string format = "text";
    std::string dialect = "native";
    std::string emit_dir;
    int shots = 0;
    std::uint64_t seed = 20230917;
    double alpha = 0.05;
    bool per_shot_rerun = false;

    CLI::App* run = app.add_subcommand("run", "run a benchmark or program file");
    run->add_option("target", target, "benchmark name or program file path")->required();
    run->add_option("--bug", bug_id, "fault injection id (see `list`)");
    run->add_option("--shots", shots, "ensemble size for every breakpoint");
    run->add_option("--seed", seed, "master random seed");
    run->add_option("--alpha", alpha, "significance level");
    run->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    run->add_flag("--per-shot-rerun", per_shot_rerun,
                  "re-simulate the truncated program for every shot");
    run->add_option("--emit-breakpoints", emit_dir, "write truncated programs to this directory");
    run->add_option("--dialect", dialect, "breakpoint emission dialect")
        ->check(CLI::IsMember({"native", "qasm-subset"}));

    CLI::App* list = app.add_subcommand("list", "enumerate benchmarks and bug injections");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    }

    try {
        if (list->parsed()) {
            return list_command();
        }
        qassert::engine::RunOptions opts;
        if (shots > 0) opts.shots = shots;
        opts.seed = seed;
        opts.alpha = alpha;
        opts.per_shot_rerun = per_shot_rerun;
        opts.worker_threads = worker_threads_from_env();
        return run_command(target, bug_id.empty() ? std::nullopt : std::make_optional(bug_id),
                           opts, format,
                           emit_dir.empty() ? std::nullopt : std::make_optional(emit_dir),
                           dialect);
    } catch (const qassert::driver::ParseFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& err : e.errors) {
            const char* cat = err.category == qassert::lang::SourceError::Category::Syntax
                                  ? "syntax"
                                  : (err.category == qassert::lang::SourceError::Category::Arity
                                         ? "arity"
                                         : "resolution");
            std::cerr << "  line " << err.line << ":" << err.column << " [" << cat << "] "
                      << err.message << "\n";
        }
        return kUsage;
    } catch (const qassert::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qassert::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
