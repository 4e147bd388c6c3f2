#pragma once

// JSON problem and report files.
//
// Problem file:
//   {
//     "blocks": [n_1, ..., n_b],            algebra block sizes
//     "k": 2,                               number of standard generators of E = A^k
//     "C": [ block_1, ..., block_b ],       block i: (k n_i) rows of (k n_i) [re, im] pairs
//     "lambda": [re, im],                   optional, default [1, 0]
//     "f": [ block_1, ..., block_b ],       optional, block i: (k n_i) rows of n_i [re, im] pairs
//     "tolerances": {"rank": 0, "solve": 1e-8}   optional
//   }
// Unknown keys are rejected unless parsing is lenient.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hilbmod/errors.hpp"
#include "hilbmod/fredholm.hpp"

namespace hilbmod::io {

using nlohmann::json;

inline constexpr std::string_view kToolName = "hilbmod";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Malformed input. The message is anchored at "line L, column C" for syntax errors and at a
/// JSON pointer for schema errors.
class ParseError : public Error {
public:
    using Error::Error;
};

struct ProblemFile {
    std::vector<int> blocks;
    int k = 1;
    std::vector<CMatrix> c;
    cplx lambda{1.0, 0.0};
    std::optional<std::vector<CMatrix>> f;
    std::optional<double> rank_tol;
    std::optional<double> solve_tol;

    [[nodiscard]] ModuleShape shape() const;
    [[nodiscard]] ModuleOperator op() const;
    /// Throws InvalidParameter when the file carries no right-hand side.
    [[nodiscard]] ModuleElement rhs() const;

    friend bool operator==(const ProblemFile&, const ProblemFile&);
};

ProblemFile problem_from_operator(const ModuleOperator& c, cplx lambda = 1.0);

ProblemFile parse_problem(std::string_view text, bool lenient = false);
json problem_to_json(const ProblemFile& p);
ProblemFile problem_from_json(const json& j, bool lenient = false);

struct GeneratorList {
    std::vector<int> dims;
    int count = 0;
    std::vector<std::vector<CMatrix>> generators;

    friend bool operator==(const GeneratorList&, const GeneratorList&);
};

GeneratorList generator_list(const KernelData& k);

struct AnalysisSection {
    int r = 0;
    std::vector<std::vector<int>> kernel_dims;
    std::vector<std::vector<int>> range_dims;
    /// Ker(L) and Ker(L^r).
    GeneratorList kernel_l;
    GeneratorList kernel_lr;
    std::vector<int> range_lr_dims;
    bool ep = false;
    double ep_residual = 0.0;
    double decomposition_residual = 0.0;
    double theta_residual = 0.0;
    double c_r_residual = 0.0;
    double projector_gap = 0.0;
    double matrix_form_annihilation = 0.0;
    bool matrix_form_invertible = false;
    double matrix_form_condition = 1.0;
    double matrix_form_identity_gap = 0.0;

    friend bool operator==(const AnalysisSection&, const AnalysisSection&);
};

struct SolveSection {
    bool solvable = false;
    bool injective = false;
    double residual_range_test = 0.0;
    double residual_orthogonality_test = 0.0;
    std::optional<std::vector<CMatrix>> particular_solution;
    std::optional<double> solution_norm_bound;
    GeneratorList kernel_l;

    friend bool operator==(const SolveSection&, const SolveSection&);
};

struct ReportFile {
    std::string tool{kToolName};
    std::string version{kToolVersion};
    std::string command;
    ProblemFile input;
    double rank_tol = 0.0;
    double solve_tol = 1e-8;
    std::optional<AnalysisSection> analysis;
    std::optional<SolveSection> solve;
    double timing_ms = 0.0;

    friend bool operator==(const ReportFile&, const ReportFile&);
};

json report_to_json(const ReportFile& r);
ReportFile report_from_json(const json& j);
ReportFile parse_report(std::string_view text);

/// Human-readable rendering; color escapes only when `color` is set.
std::string report_to_text(const ReportFile& r, bool color);

}  // namespace hilbmod::io
