#include "hilbmod/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

BlockProfile::BlockProfile(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw InvalidParameter("block profile needs at least one block");
    for (int n : sizes_)
        if (n < 1) throw InvalidParameter("block size must be >= 1, got " + std::to_string(n));
}

int BlockProfile::max_size() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

int BlockProfile::dimension() const {
    return std::accumulate(sizes_.begin(), sizes_.end(), 0, [](int acc, int n) { return acc + n * n; });
}

AlgebraElement::AlgebraElement(BlockProfile profile, std::vector<CMatrix> blocks)
    : profile_(std::move(profile)), blocks_(std::move(blocks)) {
    if (blocks_.size() != profile_.block_count())
        throw ShapeError("algebra element has " + std::to_string(blocks_.size()) + " blocks, profile has " +
                         std::to_string(profile_.block_count()));
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const int n = profile_.size(i);
        if (blocks_[i].rows() != n || blocks_[i].cols() != n)
            throw ShapeError("algebra block " + std::to_string(i) + " must be " + std::to_string(n) + "x" +
                             std::to_string(n));
    }
}

AlgebraElement AlgebraElement::zero(const BlockProfile& profile) { return scalar(profile, 0.0); }

AlgebraElement AlgebraElement::identity(const BlockProfile& profile) { return scalar(profile, 1.0); }

AlgebraElement AlgebraElement::scalar(const BlockProfile& profile, cplx s) {
    std::vector<CMatrix> blocks;
    blocks.reserve(profile.block_count());
    for (int n : profile.sizes()) blocks.emplace_back(s * CMatrix::Identity(n, n));
    return {profile, std::move(blocks)};
}

AlgebraElement AlgebraElement::adjoint() const {
    std::vector<CMatrix> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.emplace_back(b.adjoint());
    return {profile_, std::move(out)};
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
    if (profile_ != other.profile_) throw ShapeError("algebra profiles differ");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
    if (profile_ != other.profile_) throw ShapeError("algebra profiles differ");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
    for (auto& b : blocks_) b *= s;
    return *this;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.profile_ != b.profile_) return false;
    for (std::size_t i = 0; i < a.blocks_.size(); ++i)
        if (a.blocks_[i] != b.blocks_[i]) return false;
    return true;
}

AlgebraElement a_mul(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.profile() != b.profile()) throw ShapeError("a_mul: algebra profiles differ");
    std::vector<CMatrix> out;
    out.reserve(a.profile().block_count());
    for (std::size_t i = 0; i < a.profile().block_count(); ++i) out.emplace_back(a.block(i) * b.block(i));
    return {a.profile(), std::move(out)};
}

double a_norm(const AlgebraElement& a) {
    double m = 0.0;
    for (const auto& b : a.blocks()) m = std::max(m, linalg::spectral_norm(b));
    return m;
}

bool a_is_positive(const AlgebraElement& a, double tol) {
    for (const auto& b : a.blocks()) {
        const double scale = std::max(1.0, linalg::spectral_norm(b));
        if (linalg::spectral_norm(b - b.adjoint()) > tol * scale) return false;
        const CMatrix herm = 0.5 * (b + b.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().size() > 0 && es.eigenvalues()(0) < -tol * scale) return false;
    }
    return true;
}

}  // namespace hilbmod
