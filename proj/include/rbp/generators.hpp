#ifndef RBP_GENERATORS_HPP
#define RBP_GENERATORS_HPP

//
// Constructors for the matrix families with known rank and stability:
// first-row rank one, the odd rank-two construction, Cauchy matrices,
// generic products QR, the random orthogonal model, and the rank-one
// stable-but-coherent uu^T.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rbp/matrix.hpp"
#include "rbp/orthonormal_basis.hpp"
#include "rbp/random.hpp"

namespace rbp {

inline DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, Rng& rng) {
    DenseMatrix G(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            G(i, j) = rng.normal();
    return G;
}

/// First row a^T, zeros elsewhere. Rank one and (n-1)-stable.
inline DenseMatrix gen_first_row(std::size_t m, std::size_t n, std::span<const double> a) {
    if (a.size() != n)
        throw dimension_error("gen_first_row: a must have length n");
    DenseMatrix A(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (a[j] == 0.0)
            throw std::invalid_argument("gen_first_row: a has a zero entry");
        A(0, j) = a[j];
    }
    return A;
}

/// n x n, first row all ones, remaining rows (-(n-1)/2, ..., (n-1)/2). Rank two, (n-2)-stable.
inline DenseMatrix gen_rank_two_odd(std::size_t n) {
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("gen_rank_two_odd: n must be odd and at least 3");
    DenseMatrix A(n, n);
    const double half = static_cast<double>(n - 1) / 2.0;
    for (std::size_t j = 0; j < n; ++j) {
        A(0, j) = 1.0;
        for (std::size_t i = 1; i < n; ++i)
            A(i, j) = -half + static_cast<double>(j);
    }
    return A;
}

/// A_ij = 1/(u_i + v_j). With distinct u, distinct v, and n >= m, every
/// square submatrix is nonsingular, so the matrix is (n-m)-stable of rank m.
inline DenseMatrix gen_cauchy(std::span<const double> u, std::span<const double> v) {
    const std::size_t m = u.size(), n = v.size();
    if (m == 0 || n < m)
        throw std::invalid_argument("gen_cauchy: need 1 <= m <= n");
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (u[a] == u[b])
                throw std::invalid_argument("gen_cauchy: u entries must be distinct");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (v[a] == v[b])
                throw std::invalid_argument("gen_cauchy: v entries must be distinct");
    DenseMatrix A(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (u[i] + v[j] == 0.0)
                throw std::invalid_argument("gen_cauchy: u_i + v_j must be nonzero");
            A(i, j) = 1.0 / (u[i] + v[j]);
        }
    return A;
}

/// A = Q R with Q (m x r) and R (r x n) standard normal. Rank r, (n-r)-stable a.s.
inline DenseMatrix gen_generic(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
    if (r < 1 || r > std::min(m, n))
        throw std::invalid_argument("gen_generic: need 1 <= r <= min(m, n)");
    Rng rng(seed);
    const DenseMatrix Q = gaussian_matrix(m, r, rng);
    const DenseMatrix R = gaussian_matrix(r, n, rng);
    return Q * R;
}

/// First r columns of a Haar-distributed n x n orthogonal matrix.
///
/// Gram-Schmidt of a Gaussian matrix is the QR factorization whose R has a
/// positive diagonal, which is exactly the sign-corrected QR that makes Q
/// Haar. Only the leading r columns are formed.
inline DenseMatrix haar_orthonormal_columns(std::size_t n, std::size_t r, Rng& rng) {
    if (r < 1 || r > n)
        throw std::invalid_argument("haar_orthonormal_columns: need 1 <= r <= n");
    for (;;) {
        const DenseMatrix G = gaussian_matrix(n, r, rng);
        OrthonormalBasisTracker tracker(n, kDefaultTolerance);
        for (std::size_t j = 0; j < r; ++j)
            if (tracker.try_extend(G.column(j)) != SpanTest::Extended)
                break;
        // A dependent Gaussian draw has probability zero; redraw if it happens.
        if (tracker.size() == r)
            return tracker.as_matrix();
    }
}

/// A = U_r diag(sigma) V_r^T with U and V Haar distributed.
inline DenseMatrix gen_random_orthogonal_model(std::size_t m, std::size_t n, std::size_t r,
                                               std::span<const double> singular_values,
                                               std::uint64_t seed) {
    if (r < 1 || r > std::min(m, n))
        throw std::invalid_argument("gen_random_orthogonal_model: need 1 <= r <= min(m, n)");
    if (singular_values.size() != r)
        throw dimension_error("gen_random_orthogonal_model: need r singular values");
    for (double s : singular_values)
        if (s == 0.0 || !std::isfinite(s))
            throw std::invalid_argument("gen_random_orthogonal_model: singular values must be nonzero");
    Rng rng(seed);
    const DenseMatrix V = haar_orthonormal_columns(n, r, rng);
    DenseMatrix US = haar_orthonormal_columns(m, r, rng);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < r; ++l)
            US(i, l) *= singular_values[l];
    return US * V.transpose();
}

/// u_1 = sqrt(1-eps), u_2..u_{k+1} = sqrt(eps/k), rest zero. Unit norm.
inline std::vector<double> stable_coherent_vector(std::size_t n, std::size_t k, double epsilon) {
    if (k < 1 || k + 1 > n)
        throw std::invalid_argument("gen_stable_coherent: need 1 <= k <= n-1");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("gen_stable_coherent: need 0 < epsilon < 1/2");
    std::vector<double> u(n, 0.0);
    u[0] = std::sqrt(1.0 - epsilon);
    for (std::size_t i = 1; i <= k; ++i)
        u[i] = std::sqrt(epsilon / static_cast<double>(k));
    return u;
}

/// uu^T: row and column k-stable, yet mu(u) = (1-eps) n.
inline DenseMatrix gen_stable_coherent(std::size_t n, std::size_t k, double epsilon) {
    const auto u = stable_coherent_vector(n, k, epsilon);
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A(i, j) = u[i] * u[j];
    return A;
}

//
// Family-tagged generator description, used by the experiment harness and CLI.
//

enum class Family { FirstRow, RankTwoOdd, Cauchy, Generic, RandomOrthogonal, StableCoherent };

inline std::string_view family_name(Family f) {
    switch (f) {
    case Family::FirstRow: return "first-row";
    case Family::RankTwoOdd: return "rank-two-odd";
    case Family::Cauchy: return "cauchy";
    case Family::Generic: return "generic";
    case Family::RandomOrthogonal: return "random-orthogonal";
    case Family::StableCoherent: return "stable-coherent";
    }
    return "unknown";
}

inline std::optional<Family> parse_family(std::string_view name) {
    for (Family f : {Family::FirstRow, Family::RankTwoOdd, Family::Cauchy, Family::Generic,
                     Family::RandomOrthogonal, Family::StableCoherent})
        if (family_name(f) == name)
            return f;
    return std::nullopt;
}

//
// params by family (empty means defaults):
//   first-row          a_1..a_n                 default 1, 2, ..., n
//   rank-two-odd       (none; uses n, m must equal n)
//   cauchy             u_1..u_m v_1..v_n        default u_i = i, v_j = m + j (1-based)
//   generic            (none)
//   random-orthogonal  sigma_1..sigma_r         default all ones
//   stable-coherent    k epsilon                (m must equal n)
//
struct GeneratorSpec {
    Family family = Family::Generic;
    std::size_t m = 1;
    std::size_t n = 1;
    std::size_t r = 1;
    std::vector<double> params;
    std::uint64_t seed = 0;
};

inline std::size_t stable_coherent_k(const GeneratorSpec& spec) {
    if (spec.params.size() != 2 || spec.params[0] < 1.0 || spec.params[0] != std::floor(spec.params[0]))
        throw std::invalid_argument("stable-coherent: params must be 'k epsilon' with integer k >= 1");
    return static_cast<std::size_t>(spec.params[0]);
}

/// Rank of the family's matrices (exact for deterministic families, a.s. for random ones).
inline std::size_t nominal_rank(const GeneratorSpec& spec) {
    switch (spec.family) {
    case Family::FirstRow: return 1;
    case Family::RankTwoOdd: return 2;
    case Family::Cauchy: return spec.m;
    case Family::Generic:
    case Family::RandomOrthogonal: return spec.r;
    case Family::StableCoherent: return 1;
    }
    return 0;
}

/// Column stability the family is constructed to have.
inline std::size_t nominal_stability(const GeneratorSpec& spec) {
    switch (spec.family) {
    case Family::FirstRow: return spec.n - 1;
    case Family::RankTwoOdd: return spec.n - 2;
    case Family::Cauchy: return spec.n - spec.m;
    case Family::Generic:
    case Family::RandomOrthogonal: return spec.n - spec.r;
    case Family::StableCoherent: return stable_coherent_k(spec);
    }
    return 0;
}

inline DenseMatrix generate(const GeneratorSpec& spec) {
    if (spec.m == 0 || spec.n == 0)
        throw std::invalid_argument("generate: dimensions must be positive");
    const auto& p = spec.params;
    switch (spec.family) {
    case Family::FirstRow: {
        if (p.empty()) {
            std::vector<double> a(spec.n);
            for (std::size_t j = 0; j < spec.n; ++j)
                a[j] = static_cast<double>(j + 1);
            return gen_first_row(spec.m, spec.n, a);
        }
        return gen_first_row(spec.m, spec.n, p);
    }
    case Family::RankTwoOdd:
        if (spec.m != spec.n)
            throw std::invalid_argument("rank-two-odd: m must equal n");
        return gen_rank_two_odd(spec.n);
    case Family::Cauchy: {
        if (p.empty()) {
            std::vector<double> u(spec.m), v(spec.n);
            for (std::size_t i = 0; i < spec.m; ++i)
                u[i] = static_cast<double>(i + 1);
            for (std::size_t j = 0; j < spec.n; ++j)
                v[j] = static_cast<double>(spec.m + j + 1);
            return gen_cauchy(u, v);
        }
        if (p.size() != spec.m + spec.n)
            throw std::invalid_argument("cauchy: params must hold m values of u then n values of v");
        return gen_cauchy(std::span(p).first(spec.m), std::span(p).subspan(spec.m));
    }
    case Family::Generic:
        return gen_generic(spec.m, spec.n, spec.r, spec.seed);
    case Family::RandomOrthogonal: {
        if (p.empty())
            return gen_random_orthogonal_model(spec.m, spec.n, spec.r, std::vector<double>(spec.r, 1.0),
                                               spec.seed);
        return gen_random_orthogonal_model(spec.m, spec.n, spec.r, p, spec.seed);
    }
    case Family::StableCoherent:
        if (spec.m != spec.n)
            throw std::invalid_argument("stable-coherent: m must equal n");
        return gen_stable_coherent(spec.n, stable_coherent_k(spec), p[1]);
    }
    throw std::invalid_argument("generate: unknown family");
}

} // namespace rbp

#endif // RBP_GENERATORS_HPP
