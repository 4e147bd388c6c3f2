#include "hilbmod/module.hpp"

#include <algorithm>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

ModuleShape::ModuleShape(BlockProfile profile, int k) : profile_(std::move(profile)), k_(k) {
    if (k_ < 1) throw InvalidParameter("module rank k must be >= 1, got " + std::to_string(k_));
}

Eigen::Index ModuleShape::max_rows() const { return static_cast<Eigen::Index>(k_) * profile_.max_size(); }

ModuleElement::ModuleElement(ModuleShape shape, std::vector<CMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
    if (blocks_.size() != shape_.block_count())
        throw ShapeError("module element has " + std::to_string(blocks_.size()) + " blocks, expected " +
                         std::to_string(shape_.block_count()));
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i].rows() != shape_.rows(i) || blocks_[i].cols() != shape_.cols(i))
            throw ShapeError("module block " + std::to_string(i) + " must be " + std::to_string(shape_.rows(i)) +
                             "x" + std::to_string(shape_.cols(i)));
}

ModuleElement ModuleElement::zero(const ModuleShape& shape) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i) blocks.emplace_back(CMatrix::Zero(shape.rows(i), shape.cols(i)));
    return {shape, std::move(blocks)};
}

ModuleElement ModuleElement::standard(const ModuleShape& shape, int j) {
    if (j < 0 || j >= shape.k()) throw InvalidParameter("standard generator index out of range");
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i) {
        const Eigen::Index n = shape.cols(i);
        CMatrix b = CMatrix::Zero(shape.rows(i), n);
        b.block(j * n, 0, n, n).setIdentity();
        blocks.push_back(std::move(b));
    }
    return {shape, std::move(blocks)};
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& other) {
    if (shape_ != other.shape_) throw ShapeError("module shapes differ");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
    return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& other) {
    if (shape_ != other.shape_) throw ShapeError("module shapes differ");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
    return *this;
}

ModuleElement& ModuleElement::operator*=(cplx s) {
    for (auto& b : blocks_) b *= s;
    return *this;
}

bool operator==(const ModuleElement& a, const ModuleElement& b) {
    if (a.shape_ != b.shape_) return false;
    for (std::size_t i = 0; i < a.blocks_.size(); ++i)
        if (a.blocks_[i] != b.blocks_[i]) return false;
    return true;
}

AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
    if (x.shape() != y.shape()) throw ShapeError("inner_product: module shapes differ");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < x.shape().block_count(); ++i) out.emplace_back(x.block(i).adjoint() * y.block(i));
    return {x.shape().profile(), std::move(out)};
}

ModuleElement right_action(const ModuleElement& x, const AlgebraElement& a) {
    if (x.shape().profile() != a.profile()) throw ShapeError("right_action: profiles differ");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < x.shape().block_count(); ++i) out.emplace_back(x.block(i) * a.block(i));
    return {x.shape(), std::move(out)};
}

double element_norm(const ModuleElement& x) {
    double m = 0.0;
    for (const auto& b : x.blocks()) m = std::max(m, linalg::spectral_norm(b));
    return m;
}

std::vector<ModuleElement> pack_generators(const ModuleShape& shape, std::span<const CMatrix> bases) {
    if (bases.size() != shape.block_count()) throw ShapeError("pack_generators: one basis per block required");
    Eigen::Index count = 0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i].rows() != shape.rows(i)) throw ShapeError("pack_generators: basis row count mismatch");
        const Eigen::Index n = shape.cols(i);
        count = std::max(count, (bases[i].cols() + n - 1) / n);
    }
    std::vector<ModuleElement> gens;
    gens.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index g = 0; g < count; ++g) {
        std::vector<CMatrix> blocks;
        for (std::size_t i = 0; i < bases.size(); ++i) {
            const Eigen::Index n = shape.cols(i);
            CMatrix b = CMatrix::Zero(shape.rows(i), n);
            const Eigen::Index first = g * n;
            const Eigen::Index take = std::clamp<Eigen::Index>(bases[i].cols() - first, 0, n);
            if (take > 0) b.leftCols(take) = bases[i].middleCols(first, take);
            blocks.push_back(std::move(b));
        }
        gens.emplace_back(shape, std::move(blocks));
    }
    return gens;
}

Submodule::Submodule(ModuleShape shape, std::vector<ModuleElement> generators, std::vector<CMatrix> bases)
    : shape_(std::move(shape)), generators_(std::move(generators)), bases_(std::move(bases)) {}

Submodule Submodule::from_basis(const ModuleShape& shape, std::vector<CMatrix> bases) {
    auto gens = pack_generators(shape, bases);
    return {shape, std::move(gens), std::move(bases)};
}

Submodule Submodule::zero(const ModuleShape& shape) {
    std::vector<CMatrix> bases;
    for (std::size_t i = 0; i < shape.block_count(); ++i) bases.emplace_back(shape.rows(i), 0);
    return from_basis(shape, std::move(bases));
}

Submodule Submodule::full(const ModuleShape& shape) {
    std::vector<CMatrix> bases;
    for (std::size_t i = 0; i < shape.block_count(); ++i) bases.emplace_back(CMatrix::Identity(shape.rows(i), shape.rows(i)));
    return from_basis(shape, std::move(bases));
}

std::vector<int> Submodule::dims() const {
    std::vector<int> d;
    for (const auto& b : bases_) d.push_back(static_cast<int>(b.cols()));
    return d;
}

CMatrix Submodule::projector(std::size_t i) const { return linalg::projector(bases_[i], shape_.rows(i)); }

bool Submodule::contains(const ModuleElement& x, double tol) const {
    const double scale = std::max(1.0, element_norm(x));
    return element_norm(x - project_onto(*this, x)) <= tol * scale;
}

Submodule submodule_from_generators(std::span<const ModuleElement> gens) {
    if (gens.empty()) throw InvalidParameter("submodule_from_generators: empty generator list");
    const ModuleShape& shape = gens.front().shape();
    for (const auto& g : gens)
        if (g.shape() != shape) throw ShapeError("submodule_from_generators: generator shapes differ");
    std::vector<CMatrix> bases;
    for (std::size_t i = 0; i < shape.block_count(); ++i) {
        CMatrix cols(shape.rows(i), shape.cols(i) * static_cast<Eigen::Index>(gens.size()));
        for (std::size_t g = 0; g < gens.size(); ++g)
            cols.middleCols(static_cast<Eigen::Index>(g) * shape.cols(i), shape.cols(i)) = gens[g].block(i);
        bases.push_back(linalg::orthonormalize_columns(cols));
    }
    return {shape, std::vector<ModuleElement>(gens.begin(), gens.end()), std::move(bases)};
}

ModuleElement project_onto(const Submodule& sub, const ModuleElement& x) {
    if (sub.shape() != x.shape()) throw ShapeError("project_onto: shapes differ");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < x.shape().block_count(); ++i) {
        const CMatrix& b = sub.basis(i);
        out.emplace_back(b * (b.adjoint() * x.block(i)));
    }
    return {x.shape(), std::move(out)};
}

double distance_to_submodule(const ModuleElement& x, const Submodule& sub) {
    return element_norm(x - project_onto(sub, x));
}

Submodule orthogonal_complement(const Submodule& sub) {
    std::vector<CMatrix> bases;
    for (std::size_t i = 0; i < sub.shape().block_count(); ++i)
        bases.push_back(linalg::complement_basis(sub.basis(i), sub.shape().rows(i)));
    return Submodule::from_basis(sub.shape(), std::move(bases));
}

}  // namespace hilbmod
