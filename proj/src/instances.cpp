#include "hilbmod/instances.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

namespace mp = boost::multiprecision;

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw InvalidParameter("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t v = 0;
    do v = engine_();
    while (v >= limit);
    return lo + static_cast<int>(v % span);
}

double Rng::normal() {
    if (spare_) {
        const double s = *spare_;
        spare_.reset();
        return s;
    }
    double u1 = 0.0;
    do u1 = uniform();
    while (u1 == 0.0);
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    return rad * std::cos(ang);
}

cplx Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    return m;
}

CMatrix random_unitary(Eigen::Index n, Rng& rng) {
    const CMatrix g = random_matrix(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

AlgebraElement random_algebra_element(const BlockProfile& profile, Rng& rng) {
    std::vector<CMatrix> blocks;
    for (int n : profile.sizes()) blocks.push_back(random_matrix(n, n, rng));
    return {profile, std::move(blocks)};
}

ModuleElement random_element(const ModuleShape& shape, Rng& rng) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i) blocks.push_back(random_matrix(shape.rows(i), shape.cols(i), rng));
    return {shape, std::move(blocks)};
}

ModuleOperator random_operator(const ModuleShape& shape, Rng& rng) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i) blocks.push_back(random_matrix(shape.rows(i), shape.rows(i), rng));
    return {shape, std::move(blocks)};
}

namespace {

CMatrix well_conditioned(Eigen::Index n, Rng& rng) {
    if (n == 0) return CMatrix(0, 0);
    const CMatrix u = random_unitary(n, rng);
    const CMatrix v = random_unitary(n, rng);
    Eigen::VectorXcd s(n);
    for (Eigen::Index j = 0; j < n; ++j) s(j) = std::exp(rng.uniform(0.0, std::log(4.0)));
    return u * s.asDiagonal() * v.adjoint();
}

/// Jordan form with nilpotent blocks first (superdiagonal ones), then the invertible part.
CMatrix jordan_part(Eigen::Index n, Eigen::Index nil, int target_r, bool designated, Rng& rng) {
    CMatrix j = CMatrix::Zero(n, n);
    Eigen::Index pos = 0;
    bool first = designated;
    while (pos < nil) {
        const int room = static_cast<int>(nil - pos);
        const int len = first ? target_r : rng.uniform_int(1, std::min(target_r, room));
        first = false;
        for (int t = 0; t + 1 < len; ++t) j(pos + t, pos + t + 1) = 1.0;
        pos += len;
    }
    for (Eigen::Index a = nil; a < n; ++a) {
        const double rho = rng.uniform(0.5, 1.5);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        j(a, a) = std::polar(rho, phi);
        for (Eigen::Index b = a + 1; b < n; ++b) j(a, b) = 0.3 * rng.complex_normal();
    }
    return j;
}

}  // namespace

ModuleOperator gen_compact(const GenSpec& spec) {
    const ModuleShape shape(spec.profile, spec.k);
    if (!(spec.norm_cap > 0.0)) throw InvalidParameter("gen_compact: norm_cap must be positive");
    Rng rng(spec.seed);

    if (!spec.target_r) {
        ModuleOperator c = random_operator(shape, rng);
        const double target = spec.norm_cap * rng.uniform(0.1, 1.0);
        return (target / operator_norm(c)) * c;
    }

    const int r = *spec.target_r;
    if (r < 0 || r > shape.max_rows())
        throw InvalidParameter("gen_compact: target_r=" + std::to_string(r) + " is infeasible for k*max(n_i)=" +
                               std::to_string(shape.max_rows()));

    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < shape.block_count(); ++i)
        if (shape.rows(i) >= r) feasible.push_back(i);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::size_t designated =
            r > 0 ? feasible[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(feasible.size()) - 1))] : 0;
        std::vector<CMatrix> blocks;
        bool rejected = false;
        for (std::size_t i = 0; i < shape.block_count() && !rejected; ++i) {
            const Eigen::Index n = shape.rows(i);
            const bool des = r > 0 && i == designated;
            Eigen::Index nil = 0;
            if (des) nil = rng.uniform_int(r, static_cast<int>(n));
            else if (r > 0) nil = rng.uniform_int(0, static_cast<int>(n));
            const CMatrix j = jordan_part(n, nil, r, des, rng);

            CMatrix s;
            switch (spec.similarity) {
                case Similarity::identity:
                    s = CMatrix::Identity(n, n);
                    break;
                case Similarity::generic:
                    s = well_conditioned(n, rng);
                    break;
                case Similarity::orthogonal_split: {
                    CMatrix split = CMatrix::Zero(n, n);
                    split.topLeftCorner(nil, nil) = well_conditioned(nil, rng);
                    split.bottomRightCorner(n - nil, n - nil) = well_conditioned(n - nil, rng);
                    s = random_unitary(n, rng) * split;
                    break;
                }
            }
            if (linalg::condition_number(s) > 1e3) {
                rejected = true;
                break;
            }
            const CMatrix l = s * j * s.fullPivLu().inverse();
            blocks.push_back(CMatrix::Identity(n, n) - l);
        }
        if (rejected) continue;
        ModuleOperator c(shape, std::move(blocks));
        if (operator_norm(c) <= spec.norm_cap) return c;
    }
    throw InvalidParameter("gen_compact: no draw satisfied norm_cap=" + std::to_string(spec.norm_cap));
}

// ---------------------------------------------------------------- exact arithmetic

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) { return {a.re + b.re, a.im + b.im}; }
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) { return {a.re - b.re, a.im - b.im}; }
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

namespace {

mp::cpp_rational exact_double(double v) {
    if (!std::isfinite(v)) throw InvalidParameter("exact oracle: non-finite entry");
    if (v == 0.0) return 0;
    int exp = 0;
    const double frac = std::frexp(v, &exp);
    const auto mant = static_cast<long long>(std::ldexp(frac, 53));
    mp::cpp_rational q(mant);
    const int shift = exp - 53;
    const mp::cpp_int two_pow = mp::cpp_int(1) << std::abs(shift);
    if (shift >= 0) q *= two_pow;
    else q /= two_pow;
    return q;
}

struct GaussInt {
    mp::cpp_int re;
    mp::cpp_int im;
    [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }
};

GaussInt mul(const GaussInt& a, const GaussInt& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
GaussInt sub(const GaussInt& a, const GaussInt& b) { return {a.re - b.re, a.im - b.im}; }

GaussInt exact_div(const GaussInt& a, const GaussInt& b) {
    const mp::cpp_int n = b.re * b.re + b.im * b.im;
    const mp::cpp_int re = a.re * b.re + a.im * b.im;
    const mp::cpp_int im = a.im * b.re - a.re * b.im;
    if (re % n != 0 || im % n != 0) throw InvariantViolation("Bareiss step produced an inexact division");
    return {re / n, im / n};
}

}  // namespace

ExactMatrix to_exact(const CMatrix& m) {
    ExactMatrix out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)].push_back({exact_double(m(i, j).real()), exact_double(m(i, j).imag())});
    return out;
}

ExactMatrix exact_multiply(const ExactMatrix& a, const ExactMatrix& b) {
    const std::size_t inner = b.size();
    const std::size_t cols = inner == 0 ? 0 : b.front().size();
    ExactMatrix out(a.size(), std::vector<GaussianRational>(cols));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != inner) throw ShapeError("exact_multiply: inner dimensions differ");
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t t = 0; t < inner; ++t) out[i][j] = out[i][j] + a[i][t] * b[t][j];
    }
    return out;
}

int exact_rank_oracle(const ExactMatrix& m) {
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m.front().size();
    std::vector<std::vector<GaussInt>> a(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (m[i].size() != cols) throw ShapeError("exact_rank_oracle: ragged matrix");
        mp::cpp_int den = 1;
        for (const auto& z : m[i]) den = mp::lcm(mp::lcm(den, mp::denominator(z.re)), mp::denominator(z.im));
        for (const auto& z : m[i])
            a[i].push_back({mp::numerator(z.re) * (den / mp::denominator(z.re)),
                            mp::numerator(z.im) * (den / mp::denominator(z.im))});
    }

    GaussInt prev{1, 0};
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        const GaussInt pivot = a[rank][c];
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                a[i][j] = exact_div(sub(mul(pivot, a[i][j]), mul(a[i][c], a[rank][j])), prev);
            a[i][c] = {0, 0};
        }
        prev = pivot;
        ++rank;
    }
    return static_cast<int>(rank);
}

int exact_rank_oracle(const CMatrix& m) { return exact_rank_oracle(to_exact(m)); }

}  // namespace hilbmod
