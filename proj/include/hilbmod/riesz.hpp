#pragma once

// Kernel/range chains of L = lambda I - C and the decomposition at the Riesz index.
//
// For lambda != 0 everything is computed for I - C/lambda: powers of L differ from powers of
// I - C/lambda by the nonzero factor lambda^n, so kernels, ranges and the index agree.

#include <cstddef>
#include <vector>

#include "hilbmod/operators.hpp"

namespace hilbmod {

/// lambda I - C. Throws InvalidParameter for lambda == 0.
ModuleOperator build_L(const ModuleOperator& c, cplx lambda);

/// Per-block kernel and range dimensions of L^0, L^1, ...
///
/// Powers are formed by repeated multiplication and every power gets a fresh rank decision.
/// With rank_tol == 0 the cutoff for L^n is ||L||^n * (k max n_i) * 1e-12, i.e. the shared
/// convention applied to the a-priori scale of L^n (round-off in a vanishing power is
/// relative to ||L||^n, not to its own tiny norm). A block is settled at n when
/// Ker(L^n) = Ker(L^{n+1}), or already at n when L^n vanishes on it. The list stops at the
/// first power where every block is settled.
struct ChainDims {
    /// kernel[i][n] = dim Ker(L^n) on block i.
    std::vector<std::vector<int>> kernel;
    /// range[i][n] = dim Ran(L^n) on block i.
    std::vector<std::vector<int>> range;
    /// Per-block stabilization index of the kernel chain.
    std::vector<int> kernel_settle;
    /// Per-block stabilization index of the range chain.
    std::vector<int> range_settle;

    [[nodiscard]] std::size_t length() const { return kernel.empty() ? 0 : kernel.front().size(); }
};

/// max_len caps the highest power computed; 0 selects k * max n_i + 1.
/// Throws InvariantViolation if the chain has not settled by then.
ChainDims rank_chain(const ModuleOperator& l, double rank_tol = 0.0, int max_len = 0);

/// Cutoff used for L^n under the chain convention.
double power_cutoff(const ModuleOperator& l, int n, double rank_tol);

/// Index at which both chains settle. Throws InvariantViolation when kernel and range settle
/// at different indices in some block.
int ascent_index(const ChainDims& chain);
int ascent_index(const ModuleOperator& l, double rank_tol = 0.0);

/// C_r = sum_{j=1}^{r} (-1)^{j-1} binom(r, j) C^j, so that (I - C)^r = I - C_r.
ModuleOperator binomial_compact_part(const ModuleOperator& c, int r);

struct RieszReport {
    cplx lambda;
    int r = 0;
    ChainDims chain;
    /// Ker(L^r), with finitely many A-module generators.
    KernelData kernel;
    /// Ran(L^r).
    Submodule range;
    /// (lambda I - C)^r.
    ModuleOperator l_power;
    /// Orthogonal projector onto Ker(L^r).
    ModuleOperator projector_p;
    /// Projector onto Ker(L^r) along Ran(L^r); equals P exactly when L^r is EP.
    ModuleOperator projector_oblique;
    /// C_r for I - C/lambda.
    ModuleOperator c_r;
    /// P written as sum_j theta(g_j, h_j): g_j the kernel generators, h_j from the Gram pseudoinverse.
    std::vector<ModuleElement> theta_left;
    std::vector<ModuleElement> theta_right;

    /// ||L^r (L^r)^+ - (L^r)^+ L^r||
    double ep_residual = 0.0;
    /// ||Pi_Ker + Pi_Ran - I||
    double decomposition_residual = 0.0;
    /// ||sum_j theta(g_j, h_j) - P||
    double theta_residual = 0.0;
    /// ||(I - C/lambda)^r - (I - C_r)||
    double c_r_residual = 0.0;
    /// ||P - projector_oblique||
    double projector_gap = 0.0;
    /// Sum over blocks of (k n_i - rank[basis Ker | basis Ran]); zero iff Ker(L^r) + Ran(L^r) is direct and spans E.
    int direct_sum_deficit = 0;
    /// Cutoff applied to L^r.
    double cutoff = 0.0;
};

/// Throws InvalidParameter for lambda == 0, InvariantViolation if Ker(L^r) and Ran(L^r) fail to
/// be complementary.
RieszReport riesz_decomposition(const ModuleOperator& c, cplx lambda, double rank_tol = 0.0);

struct MatrixFormVerdict {
    /// ||L^r P||, should vanish.
    double kernel_annihilation = 0.0;
    bool compression_invertible = false;
    /// Condition number of L^r restricted to Ran(L^r) (1 when that range is zero).
    double condition_number = 1.0;
    /// ||compression - I||: informational, the compression is invertible but in general not I.
    double identity_gap = 0.0;
    bool ok = false;
};

/// Checks the block form L^r = [[X, 0], [0, 0]] over Ran(L^r) + Ker(L^r) with X invertible.
MatrixFormVerdict matrix_form_check(const RieszReport& report, double tol);

/// lambda I - C - P. Throws InvalidParameter if the report was built for another lambda or shape,
/// NumericalFailure if the result has a kernel or condition number >= 1/tol.
ModuleOperator regularizer(const ModuleOperator& c, cplx lambda, const RieszReport& report, double tol = 1e-12);

/// Worst block condition number; +inf when some block is singular.
double operator_condition(const ModuleOperator& t);

}  // namespace hilbmod
