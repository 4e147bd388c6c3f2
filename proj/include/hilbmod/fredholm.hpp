#pragma once

// Solvability of lambda x - C x = f.
//
// Either L = lambda I - C is injective, and then the equation has exactly one solution for
// every f, depending continuously on f; or Ker(L) != {0}, and the equation is solvable iff f
// is orthogonal to Ker(L*), with solution set x0 + Ker(L).
//
// Coefficients of the general solution act on the right (x_k . a_k), E being a right module.

#include <optional>
#include <span>

#include "hilbmod/riesz.hpp"

namespace hilbmod {

struct SolveReport {
    cplx lambda;
    bool solvable = false;
    bool injective = false;
    /// ||(I - L L^+) f||
    double residual_range_test = 0.0;
    /// max over generators g of Ker(L*) of ||<g, f>||
    double residual_orthogonality_test = 0.0;
    /// Minimal-norm solution L^+ f, present when solvable.
    std::optional<ModuleElement> particular_solution;
    /// Generators x_1, ..., x_m of Ker(L).
    KernelData kernel;
    /// ||L^{-1}||, present when L is injective.
    std::optional<double> solution_norm_bound;

    /// Inputs kept so general_solution can be formed and checked without the caller.
    ModuleOperator l;
    ModuleElement f;
    double tol = 0.0;
};

/// Throws InvalidParameter for lambda == 0, ShapeError on shape mismatch, and
/// InvariantViolation when the two solvability tests disagree by more than a factor 10.
SolveReport analyze(const ModuleOperator& c, cplx lambda, const ModuleElement& f, double tol = 1e-8,
                    double rank_tol = 0.0);

/// x0 + sum_k x_k . a_k. Throws InvalidState if the report is unsolvable, ShapeError if the
/// coefficient count is not m.
ModuleElement general_solution(const SolveReport& report, std::span<const AlgebraElement> coefficients);

/// L^{-1} f. Throws FredholmAlternativeError when L has a kernel.
ModuleElement solve_unique(const ModuleOperator& c, cplx lambda, const ModuleElement& f, double tol = 1e-8,
                           double rank_tol = 0.0);

/// (L - P)^{-1} f with P from the Riesz report.
ModuleElement solve_regularized(const ModuleOperator& c, cplx lambda, const RieszReport& report,
                                const ModuleElement& f, double tol = 1e-8);

}  // namespace hilbmod
