#include "hilbmod/operators.hpp"

#include <algorithm>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

ModuleOperator::ModuleOperator(ModuleShape shape, std::vector<CMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    if (blocks_.size() != shape_.block_count())
        throw ShapeError("operator has " + std::to_string(blocks_.size()) + " blocks, expected " +
                         std::to_string(shape_.block_count()));
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i].rows() != shape_.rows(i) || blocks_[i].cols() != shape_.rows(i))
            throw ShapeError("operator block " + std::to_string(i) + " must be " + std::to_string(shape_.rows(i)) +
                             "x" + std::to_string(shape_.rows(i)));
}

ModuleOperator ModuleOperator::zero(const ModuleShape& shape) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i) blocks.emplace_back(CMatrix::Zero(shape.rows(i), shape.rows(i)));
    return {shape, std::move(blocks)};
}

ModuleOperator ModuleOperator::identity(const ModuleShape& shape) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i)
        blocks.emplace_back(CMatrix::Identity(shape.rows(i), shape.rows(i)));
    return {shape, std::move(blocks)};
}

ModuleOperator& ModuleOperator::operator+=(const ModuleOperator& other) {
    if (shape_ != other.shape_) throw ShapeError("operator shapes differ");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
    return *this;
}

ModuleOperator& ModuleOperator::operator-=(const ModuleOperator& other) {
    if (shape_ != other.shape_) throw ShapeError("operator shapes differ");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
    return *this;
}

ModuleOperator& ModuleOperator::operator*=(cplx s) {
    for (auto& b : blocks_) b *= s;
    return *this;
}

bool operator==(const ModuleOperator& a, const ModuleOperator& b) {
    if (a.shape_ != b.shape_) return false;
    for (std::size_t i = 0; i < a.blocks_.size(); ++i)
        if (a.blocks_[i] != b.blocks_[i]) return false;
    return true;
}

ModuleOperator compose(const ModuleOperator& s, const ModuleOperator& t) {
    if (s.shape() != t.shape()) throw ShapeError("compose: operator shapes differ");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < s.shape().block_count(); ++i) out.emplace_back(s.block(i) * t.block(i));
    return {s.shape(), std::move(out)};
}

ModuleOperator power(const ModuleOperator& t, int n) {
    if (n < 0) throw InvalidParameter("power: negative exponent");
    ModuleOperator out = ModuleOperator::identity(t.shape());
    for (int j = 0; j < n; ++j) out = compose(t, out);
    return out;
}

ModuleElement apply(const ModuleOperator& t, const ModuleElement& x) {
    if (t.shape() != x.shape()) throw ShapeError("apply: operator and element shapes differ");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < x.shape().block_count(); ++i) out.emplace_back(t.block(i) * x.block(i));
    return {x.shape(), std::move(out)};
}

ModuleOperator adjoint(const ModuleOperator& t) {
    std::vector<CMatrix> out;
    for (const auto& b : t.blocks()) out.emplace_back(b.adjoint());
    return {t.shape(), std::move(out)};
}

ModuleOperator theta(const ModuleElement& x, const ModuleElement& y) {
    if (x.shape() != y.shape()) throw ShapeError("theta: element shapes differ");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < x.shape().block_count(); ++i) out.emplace_back(x.block(i) * y.block(i).adjoint());
    return {x.shape(), std::move(out)};
}

double operator_norm(const ModuleOperator& t) {
    double m = 0.0;
    for (const auto& b : t.blocks()) m = std::max(m, linalg::spectral_norm(b));
    return m;
}

double rank_cutoff(const ModuleOperator& t, double rank_tol) {
    if (rank_tol < 0.0) throw InvalidParameter("rank tolerance must be >= 0");
    if (rank_tol > 0.0) return rank_tol;
    return linalg::auto_cutoff(operator_norm(t), t.shape().max_rows());
}

std::vector<cplx> spectrum(const ModuleOperator& c, double tol) {
    std::vector<cplx> all;
    for (const auto& b : c.blocks()) {
        Eigen::ComplexEigenSolver<CMatrix> es(b, false);
        if (es.info() != Eigen::Success) throw NumericalFailure("spectrum: eigenvalue iteration did not converge");
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) all.push_back(es.eigenvalues()(j));
    }
    std::sort(all.begin(), all.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    // greedy clustering; the first member of each cluster represents it
    std::vector<cplx> out;
    for (cplx z : all) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](cplx w) { return std::abs(z - w) <= tol; });
        if (!dup) out.push_back(z);
    }
    return out;
}

ModuleOperator moore_penrose(const ModuleOperator& t, double rank_tol) {
    const double cutoff = rank_cutoff(t, rank_tol);
    std::vector<CMatrix> out;
    for (const auto& b : t.blocks()) out.push_back(linalg::pseudo_inverse(b, cutoff));
    return {t.shape(), std::move(out)};
}

EpReport is_ep(const ModuleOperator& t, double tol, double rank_tol) {
    if (!(tol > 0.0)) throw InvalidParameter("is_ep: tolerance must be positive");
    const double cutoff = rank_cutoff(t, rank_tol);
    const ModuleOperator pinv = moore_penrose(t, cutoff);
    EpReport rep;
    rep.commutator_residual = operator_norm(compose(t, pinv) - compose(pinv, t));
    for (std::size_t i = 0; i < t.shape().block_count(); ++i) {
        const Eigen::Index n = t.shape().rows(i);
        const CMatrix pr = linalg::projector(linalg::range_basis(t.block(i), cutoff), n);
        const CMatrix pr_star = linalg::projector(linalg::range_basis(t.block(i).adjoint(), cutoff), n);
        rep.range_projector_gap = std::max(rep.range_projector_gap, linalg::spectral_norm(pr - pr_star));
    }
    rep.ep = rep.commutator_residual <= tol;
    return rep;
}

KernelData kernel_generators(const ModuleOperator& t, double rank_tol) {
    const double cutoff = rank_cutoff(t, rank_tol);
    std::vector<CMatrix> bases;
    KernelData data{.dims = {}, .generators = {}, .span = Submodule::zero(t.shape())};
    for (const auto& b : t.blocks()) {
        bases.push_back(linalg::null_basis(b, cutoff));
        data.dims.push_back(static_cast<int>(bases.back().cols()));
    }
    data.span = Submodule::from_basis(t.shape(), std::move(bases));
    data.generators = data.span.generators();
    return data;
}

Submodule range_submodule(const ModuleOperator& t, double rank_tol) {
    const double cutoff = rank_cutoff(t, rank_tol);
    std::vector<CMatrix> bases;
    for (const auto& b : t.blocks()) bases.push_back(linalg::range_basis(b, cutoff));
    return Submodule::from_basis(t.shape(), std::move(bases));
}

ModuleOperator projector_onto(const Submodule& sub) {
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < sub.shape().block_count(); ++i) out.push_back(sub.projector(i));
    return {sub.shape(), std::move(out)};
}

}  // namespace hilbmod
