#include "hilbmod/fredholm.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

namespace {

ModuleElement block_solve(const ModuleOperator& a, const ModuleElement& f) {
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < a.shape().block_count(); ++i) out.push_back(a.block(i).fullPivLu().solve(f.block(i)));
    return {f.shape(), std::move(out)};
}

}  // namespace

SolveReport analyze(const ModuleOperator& c, cplx lambda, const ModuleElement& f, double tol, double rank_tol) {
    if (c.shape() != f.shape()) throw ShapeError("analyze: operator and right-hand side shapes differ");
    ModuleOperator l = build_L(c, lambda);
    const double cutoff = rank_cutoff(l, rank_tol);
    const ModuleElement x0 = apply(moore_penrose(l, cutoff), f);

    SolveReport rep{.lambda = lambda,
                    .solvable = false,
                    .injective = false,
                    .residual_range_test = element_norm(apply(l, x0) - f),
                    .residual_orthogonality_test = 0.0,
                    .particular_solution = std::nullopt,
                    .kernel = kernel_generators(l, cutoff),
                    .solution_norm_bound = std::nullopt,
                    .l = l,
                    .f = f,
                    .tol = tol};
    for (const auto& g : kernel_generators(adjoint(l), cutoff).generators)
        rep.residual_orthogonality_test = std::max(rep.residual_orthogonality_test, a_norm(inner_product(g, f)));

    const double scale = tol * std::max(1.0, element_norm(f));
    const bool by_range = rep.residual_range_test <= scale;
    const bool by_orth = rep.residual_orthogonality_test <= scale;
    if (by_range != by_orth &&
        std::max(rep.residual_range_test, rep.residual_orthogonality_test) > 10.0 * scale)
        throw InvariantViolation("solvability tests disagree: range residual " +
                                 std::to_string(rep.residual_range_test) + ", orthogonality residual " +
                                 std::to_string(rep.residual_orthogonality_test));
    rep.solvable = by_range;
    if (rep.solvable) rep.particular_solution = x0;

    rep.injective = std::all_of(rep.kernel.dims.begin(), rep.kernel.dims.end(), [](int d) { return d == 0; });
    if (rep.injective) {
        double bound = 0.0;
        for (const auto& b : l.blocks()) {
            const Eigen::VectorXd s = linalg::singular_values(b);
            bound = std::max(bound, 1.0 / s(s.size() - 1));
        }
        rep.solution_norm_bound = bound;
    }
    return rep;
}

ModuleElement general_solution(const SolveReport& report, std::span<const AlgebraElement> coefficients) {
    if (!report.solvable || !report.particular_solution)
        throw InvalidState("general_solution: the equation is not solvable");
    if (coefficients.size() != report.kernel.generators.size())
        throw ShapeError("general_solution: expected " + std::to_string(report.kernel.generators.size()) +
                         " coefficients, got " + std::to_string(coefficients.size()));
    ModuleElement x = *report.particular_solution;
    for (std::size_t k = 0; k < coefficients.size(); ++k) x += right_action(report.kernel.generators[k], coefficients[k]);
    return x;
}

ModuleElement solve_unique(const ModuleOperator& c, cplx lambda, const ModuleElement& f, double tol, double rank_tol) {
    if (c.shape() != f.shape()) throw ShapeError("solve_unique: operator and right-hand side shapes differ");
    const ModuleOperator l = build_L(c, lambda);
    const KernelData ker = kernel_generators(l, rank_tol);
    if (ker.count() != 0)
        throw FredholmAlternativeError(
            "solve_unique: L is not injective; use analyze and general_solution for the solution set");
    ModuleElement x = block_solve(l, f);
    const double res = element_norm(apply(l, x) - f);
    if (res > tol * std::max(1.0, element_norm(f)))
        throw NumericalFailure("solve_unique: residual " + std::to_string(res) + " exceeds tolerance");
    return x;
}

ModuleElement solve_regularized(const ModuleOperator& c, cplx lambda, const RieszReport& report,
                                const ModuleElement& f, double tol) {
    if (c.shape() != f.shape()) throw ShapeError("solve_regularized: operator and right-hand side shapes differ");
    const ModuleOperator reg = regularizer(c, lambda, report, tol);
    const double cond = operator_condition(reg);
    ModuleElement y = block_solve(reg, f);
    const double res = element_norm(apply(reg, y) - f);
    if (res > tol * cond * element_norm(f))
        throw NumericalFailure("solve_regularized: residual " + std::to_string(res) + " exceeds tol * cond * ||f||");
    return y;
}

}  // namespace hilbmod
