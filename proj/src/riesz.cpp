#include "hilbmod/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

namespace {

void check_chain_shape(const ChainDims& chain, std::size_t i) {
    const auto& ker = chain.kernel[i];
    const auto& ran = chain.range[i];
    const int ks = chain.kernel_settle[i];
    for (std::size_t n = 1; n < ker.size(); ++n) {
        const bool before = static_cast<int>(n) <= ks;
        if (before ? ker[n] <= ker[n - 1] : ker[n] != ker[n - 1])
            throw InvariantViolation("kernel chain of block " + std::to_string(i) + " is not strictly increasing then constant");
        if (before ? ran[n] >= ran[n - 1] : ran[n] != ran[n - 1])
            throw InvariantViolation("range chain of block " + std::to_string(i) + " is not strictly decreasing then constant");
    }
}

}  // namespace

ModuleOperator build_L(const ModuleOperator& c, cplx lambda) {
    if (lambda == cplx(0.0, 0.0)) throw InvalidParameter("lambda must be nonzero");
    return lambda * ModuleOperator::identity(c.shape()) - c;
}

double power_cutoff(const ModuleOperator& l, int n, double rank_tol) {
    if (rank_tol < 0.0) throw InvalidParameter("rank tolerance must be >= 0");
    if (rank_tol > 0.0) return rank_tol;
    return linalg::auto_cutoff(std::pow(operator_norm(l), n), l.shape().max_rows());
}

ChainDims rank_chain(const ModuleOperator& l, double rank_tol, int max_len) {
    const ModuleShape& shape = l.shape();
    const std::size_t b = shape.block_count();
    if (max_len < 0) throw InvalidParameter("max_len must be >= 1");
    if (max_len == 0) max_len = static_cast<int>(shape.max_rows()) + 1;

    ChainDims chain;
    chain.kernel.assign(b, {0});
    chain.range.resize(b);
    chain.kernel_settle.assign(b, -1);
    chain.range_settle.assign(b, -1);
    for (std::size_t i = 0; i < b; ++i) chain.range[i].push_back(static_cast<int>(shape.rows(i)));

    const double scale = operator_norm(l);
    ModuleOperator pw = ModuleOperator::identity(shape);
    for (int n = 1;; ++n) {
        if (n > max_len)
            throw InvariantViolation("kernel chain did not stabilize within " + std::to_string(max_len) + " powers");
        pw = compose(l, pw);
        const double cutoff =
            rank_tol > 0.0 ? rank_tol : linalg::auto_cutoff(std::pow(scale, n), shape.max_rows());
        bool all_settled = true;
        for (std::size_t i = 0; i < b; ++i) {
            const int dim = static_cast<int>(shape.rows(i));
            const int rk = static_cast<int>(linalg::rank(pw.block(i), cutoff));
            const int ker = dim - rk;
            chain.kernel[i].push_back(ker);
            chain.range[i].push_back(rk);
            const auto un = static_cast<std::size_t>(n);
            if (chain.kernel_settle[i] < 0) {
                if (ker == chain.kernel[i][un - 1]) chain.kernel_settle[i] = n - 1;
                else if (ker == dim) chain.kernel_settle[i] = n;
            }
            if (chain.range_settle[i] < 0) {
                if (rk == chain.range[i][un - 1]) chain.range_settle[i] = n - 1;
                else if (rk == 0) chain.range_settle[i] = n;
            }
            all_settled = all_settled && chain.kernel_settle[i] >= 0 && chain.range_settle[i] >= 0;
        }
        if (all_settled) break;
    }
    return chain;
}

int ascent_index(const ChainDims& chain) {
    int r = 0;
    for (std::size_t i = 0; i < chain.kernel.size(); ++i) {
        if (chain.kernel_settle[i] != chain.range_settle[i])
            throw InvariantViolation("block " + std::to_string(i) + ": kernel chain settles at " +
                                     std::to_string(chain.kernel_settle[i]) + " but range chain at " +
                                     std::to_string(chain.range_settle[i]));
        check_chain_shape(chain, i);
        r = std::max(r, chain.kernel_settle[i]);
    }
    return r;
}

int ascent_index(const ModuleOperator& l, double rank_tol) { return ascent_index(rank_chain(l, rank_tol)); }

ModuleOperator binomial_compact_part(const ModuleOperator& c, int r) {
    if (r < 0) throw InvalidParameter("binomial_compact_part: r must be >= 0");
    ModuleOperator out = ModuleOperator::zero(c.shape());
    ModuleOperator cj = ModuleOperator::identity(c.shape());
    double binom = 1.0;
    for (int j = 1; j <= r; ++j) {
        cj = compose(c, cj);
        binom = binom * static_cast<double>(r - j + 1) / static_cast<double>(j);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        out += cplx(sign * binom, 0.0) * cj;
    }
    return out;
}

RieszReport riesz_decomposition(const ModuleOperator& c, cplx lambda, double rank_tol) {
    const ModuleOperator l1 = build_L((1.0 / lambda) * c, 1.0);
    const ModuleShape& shape = c.shape();

    ChainDims chain = rank_chain(l1, rank_tol);
    const int r = ascent_index(chain);
    const ModuleOperator lr = power(l1, r);
    const double cutoff = power_cutoff(l1, r, rank_tol);

    KernelData kernel = kernel_generators(lr, cutoff);
    Submodule range = range_submodule(lr, cutoff);
    for (std::size_t i = 0; i < shape.block_count(); ++i)
        if (kernel.dims[i] != chain.kernel[i][static_cast<std::size_t>(r)])
            throw InvariantViolation("Ker(L^r) dimension disagrees with the chain");

    const ModuleOperator p = projector_onto(kernel.span);
    const ModuleOperator pi_range = projector_onto(range);
    const ModuleOperator id = ModuleOperator::identity(shape);

    // oblique projector and direct-sum check from the stacked bases [K | R]
    std::vector<CMatrix> oblique;
    int deficit = 0;
    for (std::size_t i = 0; i < shape.block_count(); ++i) {
        const Eigen::Index n = shape.rows(i);
        const CMatrix& kb = kernel.span.basis(i);
        const CMatrix& rb = range.basis(i);
        CMatrix m(n, kb.cols() + rb.cols());
        m << kb, rb;
        const auto rk = linalg::rank(m, linalg::auto_cutoff(linalg::spectral_norm(m), n));
        deficit += static_cast<int>(n - rk);
        if (m.cols() != n || rk != n)
            throw InvariantViolation("Ker(L^r) and Ran(L^r) are not complementary in block " + std::to_string(i));
        CMatrix sel = CMatrix::Zero(n, n);
        sel.topLeftCorner(kb.cols(), kb.cols()).setIdentity();
        oblique.push_back(m * sel * m.fullPivLu().inverse());
    }

    // P = sum_j theta(g_j, h_j) with h_j = sum_l g_l (Gamma^+)_{lj}, Gamma_{lj} = <g_l, g_j>
    const auto& gens = kernel.generators;
    const std::size_t m = gens.size();
    std::vector<ModuleElement> right;
    if (m > 0) {
        std::vector<CMatrix> gram_pinv;
        for (std::size_t i = 0; i < shape.block_count(); ++i) {
            const Eigen::Index ni = shape.cols(i);
            CMatrix gram(static_cast<Eigen::Index>(m) * ni, static_cast<Eigen::Index>(m) * ni);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t bb = 0; bb < m; ++bb)
                    gram.block(static_cast<Eigen::Index>(a) * ni, static_cast<Eigen::Index>(bb) * ni, ni, ni) =
                        inner_product(gens[a], gens[bb]).block(i);
            gram_pinv.push_back(
                linalg::pseudo_inverse(gram, linalg::auto_cutoff(linalg::spectral_norm(gram), gram.rows())));
        }
        for (std::size_t j = 0; j < m; ++j) {
            ModuleElement h = ModuleElement::zero(shape);
            for (std::size_t lidx = 0; lidx < m; ++lidx) {
                std::vector<CMatrix> coeff;
                for (std::size_t i = 0; i < shape.block_count(); ++i) {
                    const Eigen::Index ni = shape.cols(i);
                    coeff.emplace_back(gram_pinv[i].block(static_cast<Eigen::Index>(lidx) * ni,
                                                          static_cast<Eigen::Index>(j) * ni, ni, ni));
                }
                h += right_action(gens[lidx], AlgebraElement(shape.profile(), std::move(coeff)));
            }
            right.push_back(std::move(h));
        }
    }
    ModuleOperator theta_sum = ModuleOperator::zero(shape);
    for (std::size_t j = 0; j < m; ++j) theta_sum += theta(gens[j], right[j]);

    const ModuleOperator c_r = binomial_compact_part((1.0 / lambda) * c, r);
    const ModuleOperator lr_pinv = moore_penrose(lr, cutoff);

    RieszReport rep{
        .lambda = lambda,
        .r = r,
        .chain = std::move(chain),
        .kernel = kernel,
        .range = range,
        .l_power = std::pow(lambda, r) * lr,
        .projector_p = p,
        .projector_oblique = ModuleOperator(shape, std::move(oblique)),
        .c_r = c_r,
        .theta_left = gens,
        .theta_right = std::move(right),
    };
    rep.ep_residual = operator_norm(compose(lr, lr_pinv) - compose(lr_pinv, lr));
    rep.decomposition_residual = operator_norm(p + pi_range - id);
    rep.theta_residual = operator_norm(theta_sum - p);
    rep.c_r_residual = operator_norm(lr - (id - c_r));
    rep.projector_gap = operator_norm(p - rep.projector_oblique);
    rep.direct_sum_deficit = deficit;
    rep.cutoff = cutoff;
    return rep;
}

MatrixFormVerdict matrix_form_check(const RieszReport& report, double tol) {
    MatrixFormVerdict v;
    const ModuleOperator& lr = report.l_power;
    v.kernel_annihilation = operator_norm(compose(lr, report.projector_p));
    v.compression_invertible = true;
    for (std::size_t i = 0; i < lr.shape().block_count(); ++i) {
        const CMatrix& rb = report.range.basis(i);
        if (rb.cols() == 0) continue;
        const CMatrix x = rb.adjoint() * lr.block(i) * rb;
        const double cond = linalg::condition_number(x);
        v.condition_number = std::max(v.condition_number, cond);
        v.identity_gap = std::max(v.identity_gap, linalg::spectral_norm(x - CMatrix::Identity(x.rows(), x.cols())));
        if (!(cond < 1.0 / tol)) v.compression_invertible = false;
    }
    v.ok = v.compression_invertible && v.kernel_annihilation <= tol * std::max(1.0, operator_norm(lr));
    return v;
}

double operator_condition(const ModuleOperator& t) {
    double worst = 1.0;
    for (const auto& b : t.blocks()) worst = std::max(worst, linalg::condition_number(b));
    return worst;
}

ModuleOperator regularizer(const ModuleOperator& c, cplx lambda, const RieszReport& report, double tol) {
    if (report.lambda != lambda) throw InvalidParameter("regularizer: report was computed for a different lambda");
    if (report.projector_p.shape() != c.shape()) throw InvalidParameter("regularizer: report shape differs from C");
    ModuleOperator reg = build_L(c, lambda) - report.projector_p;
    const double cond = operator_condition(reg);
    if (!(cond < 1.0 / tol))
        throw NumericalFailure("regularizer: L - P has condition number " + std::to_string(cond));
    const KernelData ker = kernel_generators(reg);
    if (ker.count() != 0) throw NumericalFailure("regularizer: L - P has a nontrivial kernel");
    return reg;
}

}  // namespace hilbmod
