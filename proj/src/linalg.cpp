#include "hilbmod/linalg.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hilbmod::linalg {

namespace {

using Svd = Eigen::JacobiSVD<CMatrix>;

Svd full_svd(const CMatrix& m) {
    return Svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Eigen::Index count_above(const Eigen::VectorXd& s, double cutoff) {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) ++r;
    return r;
}

}  // namespace

Eigen::VectorXd singular_values(const CMatrix& m) {
    if (m.size() == 0) return Eigen::VectorXd();
    return Svd(m).singularValues();
}

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

double auto_cutoff(double scale, Eigen::Index dim) {
    return scale * static_cast<double>(dim) * kRankEpsilon;
}

Eigen::Index rank(const CMatrix& m, double cutoff) {
    if (m.size() == 0) return 0;
    return count_above(singular_values(m), cutoff);
}

CMatrix null_basis(const CMatrix& m, double cutoff) {
    const Eigen::Index n = m.cols();
    if (m.rows() == 0) return CMatrix::Identity(n, n);
    if (n == 0) return CMatrix(0, 0);
    Svd svd = full_svd(m);
    const Eigen::Index r = count_above(svd.singularValues(), cutoff);
    CMatrix basis = svd.matrixV().rightCols(n - r);
    normalize_phases(basis);
    return basis;
}

CMatrix range_basis(const CMatrix& m, double cutoff) {
    if (m.size() == 0) return CMatrix(m.rows(), 0);
    Svd svd = full_svd(m);
    const Eigen::Index r = count_above(svd.singularValues(), cutoff);
    CMatrix basis = svd.matrixU().leftCols(r);
    normalize_phases(basis);
    return basis;
}

CMatrix pseudo_inverse(const CMatrix& m, double cutoff) {
    CMatrix out = CMatrix::Zero(m.cols(), m.rows());
    if (m.size() == 0) return out;
    Svd svd = full_svd(m);
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) <= cutoff) continue;
        out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
    }
    return out;
}

CMatrix orthonormalize_columns(const CMatrix& cols) {
    const Eigen::Index dim = cols.rows();
    double max_norm = 0.0;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) max_norm = std::max(max_norm, cols.col(j).norm());
    if (max_norm == 0.0 || dim == 0) return CMatrix(dim, 0);
    const double cutoff = kRankEpsilon * max_norm;

    CMatrix work = cols;
    std::vector<bool> used(static_cast<std::size_t>(cols.cols()), false);
    std::vector<CVector> picked;
    while (static_cast<Eigen::Index>(picked.size()) < dim) {
        Eigen::Index best = -1;
        double best_norm = cutoff;
        for (Eigen::Index j = 0; j < work.cols(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double nj = work.col(j).norm();
            if (nj > best_norm) {
                best = j;
                best_norm = nj;
            }
        }
        if (best < 0) break;
        used[static_cast<std::size_t>(best)] = true;
        CVector q = work.col(best) / best_norm;
        // second pass against the accepted vectors
        for (const auto& p : picked) q -= p * p.dot(q);
        q.normalize();
        for (Eigen::Index j = 0; j < work.cols(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            for (int pass = 0; pass < 2; ++pass) work.col(j) -= q * q.dot(work.col(j));
        }
        picked.push_back(std::move(q));
    }
    CMatrix basis(dim, static_cast<Eigen::Index>(picked.size()));
    for (std::size_t j = 0; j < picked.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = picked[j];
    normalize_phases(basis);
    return basis;
}

CMatrix complement_basis(const CMatrix& basis, Eigen::Index dim) {
    const Eigen::Index d = basis.cols();
    if (d == 0) return CMatrix::Identity(dim, dim);
    if (d >= dim) return CMatrix(dim, 0);
    Eigen::HouseholderQR<CMatrix> qr(basis);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    CMatrix comp = q.rightCols(dim - d);
    normalize_phases(comp);
    return comp;
}

CMatrix projector(const CMatrix& basis, Eigen::Index dim) {
    if (basis.cols() == 0) return CMatrix::Zero(dim, dim);
    return basis * basis.adjoint();
}

void normalize_phases(CMatrix& cols) {
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < cols.rows(); ++i) {
            // equal-modulus entries (up to a small slack) resolve to the first one
            const double a = std::abs(cols(i, j));
            if (a > best * (1.0 + 1e-9)) {
                best = a;
                arg = i;
            }
        }
        if (best <= 0.0) continue;
        const cplx phase = std::conj(cols(arg, j)) / best;
        cols.col(j) *= phase;
        cols(arg, j) = cplx(std::abs(cols(arg, j)), 0.0);
    }
}

double condition_number(const CMatrix& m) {
    if (m.size() == 0) return 1.0;
    const Eigen::VectorXd s = singular_values(m);
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

}  // namespace hilbmod::linalg
