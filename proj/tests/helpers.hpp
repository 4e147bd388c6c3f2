#pragma once

#include <initializer_list>

#include <doctest.h>

#include "hilbmod/instances.hpp"
#include "hilbmod/operators.hpp"

namespace testing_support {

using namespace hilbmod;

inline CMatrix mat(std::initializer_list<std::initializer_list<cplx>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    CMatrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline ModuleShape scalar_shape(int k) { return {BlockProfile({1}), k}; }

/// Element of C^k (A = C).
inline ModuleElement vec(std::initializer_list<cplx> entries) {
    CMatrix m(static_cast<Eigen::Index>(entries.size()), 1);
    Eigen::Index i = 0;
    for (const auto& v : entries) m(i++, 0) = v;
    return {scalar_shape(static_cast<int>(entries.size())), {m}};
}

/// Operator on C^k given by its matrix.
inline ModuleOperator op(const CMatrix& m) { return {scalar_shape(static_cast<int>(m.rows())), {m}}; }

inline ModuleOperator op(std::initializer_list<std::initializer_list<cplx>> rows) { return op(mat(rows)); }

/// Operator on A = M_2, k = 1 acting by left multiplication.
inline ModuleOperator m2_op(const CMatrix& m) { return {ModuleShape(BlockProfile({2}), 1), {m}}; }

inline ModuleElement m2_elem(const CMatrix& m) { return {ModuleShape(BlockProfile({2}), 1), {m}}; }

inline double gap(const CMatrix& a, const CMatrix& b) { return linalg::spectral_norm(a - b); }

inline double gap(const ModuleOperator& a, const ModuleOperator& b) { return operator_norm(a - b); }

inline double gap(const ModuleElement& a, const ModuleElement& b) { return element_norm(a - b); }

/// Dimension of the kernel of m decided exactly over Q(i).
inline int exact_nullity(const CMatrix& m) { return static_cast<int>(m.cols()) - exact_rank_oracle(m); }

/// Random shape with at most two blocks of size at most 3 and k in 1..3.
inline ModuleShape random_shape(Rng& rng, int max_k = 3) {
    std::vector<int> sizes(static_cast<std::size_t>(rng.uniform_int(1, 2)));
    for (auto& n : sizes) n = rng.uniform_int(1, 3);
    return {BlockProfile(sizes), rng.uniform_int(1, max_k)};
}

}  // namespace testing_support
