// hilbmod: Riesz index, Riesz decomposition and Fredholm solver for compact perturbations of
// the identity on A^k, A a finite-dimensional C*-algebra.
//
// Exit codes: 0 completed, 1 verification failed, 2 bad input, 3 numerical failure.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hilbmod/errors.hpp"
#include "hilbmod/instances.hpp"
#include "hilbmod/io.hpp"
#include "hilbmod/verify.hpp"

namespace {

using namespace hilbmod;

enum Exit : int { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kNumerical = 3 };

class BadInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool use_color() {
    const char* no_color = std::getenv("NO_COLOR");
    if (no_color != nullptr && *no_color != '\0') return false;
    return ::isatty(STDOUT_FILENO) != 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadInput("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadInput("cannot write " + path);
    out << text;
    if (!out) throw BadInput("error writing " + path);
}

struct CommonFlags {
    std::string input;
    std::optional<double> tol;
    std::vector<double> lambda;
    std::string output;
    std::string format = "text";
    bool lenient = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("input", f.input, "Problem file (JSON)")->required();
    cmd->add_option("--tol", f.tol, "Rank tolerance (absolute singular value cutoff; 0 = automatic)");
    cmd->add_option("--lambda", f.lambda, "Spectral parameter: <re> <im>")->expected(2);
    cmd->add_option("--output", f.output, "Also write the JSON report to this path");
    cmd->add_option("--format", f.format, "Standard output format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_flag("--lenient", f.lenient, "Ignore unknown keys in the problem file");
}

void check_tol(const std::optional<double>& tol) {
    if (tol && (!std::isfinite(*tol) || *tol < 0.0)) throw BadInput("--tol must be a finite non-negative number");
}

io::ProblemFile load_problem(const CommonFlags& f) {
    check_tol(f.tol);
    io::ProblemFile p = io::parse_problem(read_file(f.input), f.lenient);
    if (!f.lambda.empty()) p.lambda = cplx(f.lambda[0], f.lambda[1]);
    if (p.lambda == cplx(0.0, 0.0)) throw BadInput("lambda must be nonzero");
    return p;
}

void emit_report(const io::ReportFile& r, const CommonFlags& f) {
    const std::string json = io::report_to_json(r).dump(2) + "\n";
    if (!f.output.empty()) write_file(f.output, json);
    if (f.format == "json")
        std::cout << json;
    else
        std::cout << io::report_to_text(r, use_color());
}

std::string summary_text(const VerifySummary& s, const VerifyOptions& opts, bool color) {
    const auto paint = [color](bool good, const std::string& text) {
        if (!color) return text;
        return std::string(good ? "\033[32m" : "\033[31m") + text + "\033[0m";
    };
    std::ostringstream os;
    os << "hilbmod verify  seed=" << opts.seed << " count=" << opts.count << " tol=" << opts.rank_tol << "\n";
    for (const auto& f : s.families) {
        os << paint(f.passed, f.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(11) << f.name
           << " instances=" << f.instances << " failures=" << f.failures << " worst_ratio=" << std::setprecision(3)
           << f.worst_ratio << "  (" << f.description << ")\n";
        if (!f.passed) {
            os << "      first failure: instance " << *f.failing_index << " seed " << *f.failing_seed << ": "
               << f.failure_message << "\n";
            if (!f.instance_dump.empty()) os << "      instance: " << f.instance_dump << "\n";
        }
    }
    os << (s.passed() ? "all families passed" : "verification FAILED") << "\n";
    return os.str();
}

io::json summary_json(const VerifySummary& s, const VerifyOptions& opts) {
    io::json fams = io::json::array();
    for (const auto& f : s.families) {
        io::json j = {{"name", f.name},         {"description", f.description}, {"passed", f.passed},
                      {"instances", f.instances}, {"failures", f.failures},       {"worst_ratio", f.worst_ratio}};
        if (!f.passed) {
            j["failing_index"] = *f.failing_index;
            j["failing_seed"] = *f.failing_seed;
            j["message"] = f.failure_message;
            if (!f.instance_dump.empty()) j["instance"] = io::json::parse(f.instance_dump);
        }
        fams.push_back(std::move(j));
    }
    return {{"tool", io::kToolName},  {"version", io::kToolVersion}, {"command", "verify"},
            {"seed", opts.seed},      {"count", opts.count},         {"tolerance", {{"rank", opts.rank_tol}}},
            {"passed", s.passed()},   {"families", std::move(fams)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riesz-Fredholm toolkit for Hilbert C*-modules over finite-dimensional C*-algebras"};
    app.set_version_flag("--version", std::string(io::kToolVersion));
    app.require_subcommand(1);

    CommonFlags analyze_flags;
    auto* analyze_cmd = app.add_subcommand("analyze", "Riesz index, chains, decomposition and EP data of L = lambda I - C");
    add_common(analyze_cmd, analyze_flags);

    CommonFlags solve_flags;
    auto* solve_cmd = app.add_subcommand("solve", "Solve lambda x - C x = f via the Fredholm alternative");
    add_common(solve_cmd, solve_flags);

    VerifyOptions vopts;
    std::optional<double> verify_tol;
    std::vector<std::string> only;
    std::string verify_format = "text";
    std::string verify_output;
    auto* verify_cmd = app.add_subcommand("verify", "Run the randomized invariant suite");
    verify_cmd->add_option("--seed", vopts.seed, "Base seed");
    verify_cmd->add_option("--count", vopts.count, "Instances per family")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--jobs", vopts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tol", verify_tol, "Rank tolerance (0 = automatic)");
    verify_cmd->add_option("--family", only, "Restrict to the named families")
        ->check(CLI::IsMember(verify_family_names()));
    verify_cmd->add_option("--format", verify_format, "Output format")->check(CLI::IsMember({"json", "text"}));
    verify_cmd->add_option("--output", verify_output, "Also write the JSON summary to this path");

    GenSpec gspec;
    gspec.seed = 1;
    std::vector<int> gen_blocks{1};
    std::optional<int> gen_target;
    std::string gen_similarity = "generic";
    std::vector<double> gen_lambda;
    std::string gen_output;
    auto* gen_cmd = app.add_subcommand("gen", "Emit a random compact operator as a problem file");
    gen_cmd->add_option("--seed", gspec.seed, "Seed");
    gen_cmd->add_option("--blocks", gen_blocks, "Algebra block sizes")->delimiter(',');
    gen_cmd->add_option("--k", gspec.k, "Number of generators of A^k")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--target-r", gen_target, "Prescribed Riesz index of I - C")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--norm-cap", gspec.norm_cap, "Upper bound on ||C||")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--similarity", gen_similarity, "Similarity transform: generic, orthogonal, identity")
        ->check(CLI::IsMember({"generic", "orthogonal", "identity"}));
    gen_cmd->add_option("--lambda", gen_lambda, "Spectral parameter written to the file: <re> <im>")->expected(2);
    gen_cmd->add_option("--output", gen_output, "Write to this path instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (analyze_cmd->parsed()) {
            const io::ProblemFile p = load_problem(analyze_flags);
            emit_report(run_analyze(p, analyze_flags.tol), analyze_flags);
            return kOk;
        }
        if (solve_cmd->parsed()) {
            const io::ProblemFile p = load_problem(solve_flags);
            if (!p.f) throw BadInput("problem file has no right-hand side \"f\"");
            emit_report(run_solve(p, solve_flags.tol), solve_flags);
            return kOk;
        }
        if (verify_cmd->parsed()) {
            check_tol(verify_tol);
            vopts.rank_tol = verify_tol.value_or(0.0);
            const auto start = std::chrono::steady_clock::now();
            const VerifySummary s = run_verify(vopts, only);
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            const io::json j = summary_json(s, vopts);
            if (!verify_output.empty()) write_file(verify_output, j.dump(2) + "\n");
            if (verify_format == "json")
                std::cout << j.dump(2) << "\n";
            else
                std::cout << summary_text(s, vopts, use_color());
            std::cerr << "elapsed " << std::fixed << std::setprecision(1) << ms / 1000.0 << " s\n";
            return s.passed() ? kOk : kVerifyFailed;
        }
        if (gen_cmd->parsed()) {
            gspec.profile = BlockProfile(gen_blocks);
            gspec.target_r = gen_target;
            gspec.similarity = gen_similarity == "orthogonal" ? Similarity::orthogonal_split
                               : gen_similarity == "identity" ? Similarity::identity
                                                              : Similarity::generic;
            const cplx lambda = gen_lambda.empty() ? cplx(1.0, 0.0) : cplx(gen_lambda[0], gen_lambda[1]);
            const std::string text =
                io::problem_to_json(io::problem_from_operator(gen_compact(gspec), lambda)).dump(2) + "\n";
            if (gen_output.empty())
                std::cout << text;
            else
                write_file(gen_output, text);
            return kOk;
        }
    } catch (const BadInput& e) {
        std::cerr << "hilbmod: " << e.what() << "\n";
        return kBadInput;
    } catch (const io::ParseError& e) {
        std::cerr << "hilbmod: parse error: " << e.what() << "\n";
        return kBadInput;
    } catch (const InvalidParameter& e) {
        std::cerr << "hilbmod: invalid input: " << e.what() << "\n";
        return kBadInput;
    } catch (const ShapeError& e) {
        std::cerr << "hilbmod: invalid input: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "hilbmod: numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}
