#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>
#include <vector>

#include "oracles.hpp"
#include "rbp/generators.hpp"
#include "rbp/linalg.hpp"
#include "rbp/random.hpp"
#include "rbp/stability.hpp"

using namespace rbp;

TEST(StabilityExhaustive, FirstRowExample) {
    const std::vector<double> a{1, 2, 3};
    const auto rep = stability_index_exhaustive(gen_first_row(2, 3, a));
    EXPECT_EQ(rep.rank, 1u);
    EXPECT_EQ(rep.column_stability, 2u);
    // k = n - r leaves no subset to witness a drop
    EXPECT_FALSE(rep.witness_columns.has_value());
}

TEST(StabilityExhaustive, RankTwoOddExample) {
    const DenseMatrix A = gen_rank_two_odd(3);
    EXPECT_EQ(A, (DenseMatrix{{1, 1, 1}, {-1, 0, 1}, {-1, 0, 1}}));
    const auto rep = stability_index_exhaustive(A);
    EXPECT_EQ(rep.rank, 2u);
    EXPECT_EQ(rep.column_stability, 1u);
}

TEST(StabilityExhaustive, WitnessIsFirstLexicographicDroppingSubset) {
    // columns e1, e1, e2: dropping column 2 alone loses e2
    const DenseMatrix A{{1, 1, 0}, {0, 0, 1}};
    const auto rep = stability_index_exhaustive(A);
    EXPECT_EQ(rep.rank, 2u);
    EXPECT_EQ(rep.column_stability, 0u);
    ASSERT_TRUE(rep.witness_columns.has_value());
    EXPECT_EQ(*rep.witness_columns, (std::vector<std::size_t>{2}));

    // e1, e2, e1, e2: any single removal is fine, {0,2} is the first pair that drops the rank
    const DenseMatrix B{{1, 0, 1, 0}, {0, 1, 0, 1}};
    const auto rb = stability_index_exhaustive(B);
    EXPECT_EQ(rb.column_stability, 1u);
    EXPECT_EQ(*rb.witness_columns, (std::vector<std::size_t>{0, 2}));
}

TEST(StabilityExhaustive, ZeroMatrixHasRankZero) {
    const auto rep = stability_index_exhaustive(DenseMatrix(3, 4));
    EXPECT_EQ(rep.rank, 0u);
    EXPECT_EQ(rep.column_stability, 4u);
}

TEST(StabilityExhaustive, RefusesAboveCap) {
    EXPECT_THROW(stability_index_exhaustive(DenseMatrix(2, 17)), std::invalid_argument);
    EXPECT_NO_THROW(stability_index_exhaustive(DenseMatrix(2, 17), kDefaultTolerance, 17));
}

TEST(StabilityExhaustive, MatchesBruteForceOnFamilies) {
    for (std::size_t n = 2; n <= 10; ++n) {
        std::vector<double> a(n);
        for (std::size_t j = 0; j < n; ++j)
            a[j] = static_cast<double>(j) - 4.5;
        const DenseMatrix A = gen_first_row(3, n, a);
        EXPECT_EQ(stability_index_exhaustive(A).column_stability, test::brute_stability(A));
        EXPECT_EQ(test::brute_stability(A), n - 1);
    }
    for (std::size_t n : {3u, 5u, 7u, 9u}) {
        const DenseMatrix A = gen_rank_two_odd(n);
        EXPECT_EQ(stability_index_exhaustive(A).column_stability, n - 2);
        EXPECT_EQ(test::brute_stability(A), n - 2);
    }
    for (std::size_t m = 1; m <= 4; ++m)
        for (std::size_t n = m; n <= 8; ++n) {
            const DenseMatrix A = generate({Family::Cauchy, m, n, m, {}, 0});
            const auto rep = stability_index_exhaustive(A);
            EXPECT_EQ(rep.rank, m);
            EXPECT_EQ(rep.column_stability, n - m);
            EXPECT_EQ(test::brute_stability(A), n - m);
        }
}

TEST(StabilityExhaustive, MatchesBruteForceOnRandomMatrices) {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 2 + rng.uniform_index(5), n = 2 + rng.uniform_index(9);
        DenseMatrix A = gen_generic(m, n, 1 + rng.uniform_index(std::min(m, n)), rng.next_u64());
        // zero out a few columns so that low stabilities occur too
        for (std::size_t j = 0; j < n; ++j)
            if (rng.bernoulli(0.3))
                for (std::size_t i = 0; i < m; ++i)
                    A(i, j) = 0.0;
        const auto rep = stability_index_exhaustive(A);
        EXPECT_EQ(rep.column_stability, test::brute_stability(A)) << "trial " << trial;
        if (rep.witness_columns) {
            EXPECT_EQ(rep.witness_columns->size(), rep.column_stability + 1);
            std::vector<std::size_t> keep;
            for (std::size_t j = 0; j < n; ++j)
                if (std::find(rep.witness_columns->begin(), rep.witness_columns->end(), j) ==
                    rep.witness_columns->end())
                    keep.push_back(j);
            const std::size_t kept = keep.empty() ? 0 : test::ge_rank(A.select_columns(keep));
            EXPECT_LT(kept, rep.rank);
        }
    }
}

TEST(StabilityExhaustive, RowVariantUsesTranspose) {
    const DenseMatrix A = gen_stable_coherent(8, 3, 0.25);
    EXPECT_EQ(row_stability_index_exhaustive(A).column_stability, 3u);
    const std::vector<double> a{1, 2, 3, 4};
    // a single nonzero row: losing it kills the rank, so row stability is 0
    EXPECT_EQ(row_stability_index_exhaustive(gen_first_row(5, 4, a)).column_stability, 0u);
}

TEST(StabilityCertified, CertifiesTrueClaimAndRefutesFalseOne) {
    const std::vector<double> a{1, 2, 3, 4, 5, 6};
    const auto ok = stability_index_certified(gen_first_row(3, 6, a), 5, 200, 1);
    ASSERT_TRUE(std::holds_alternative<Certified>(ok));
    EXPECT_EQ(std::get<Certified>(ok).trials, 200u);

    const DenseMatrix A{{1, 1, 0}, {0, 0, 1}};
    const auto bad = stability_index_certified(A, 1, 200, 2);
    ASSERT_TRUE(std::holds_alternative<RefutedWithWitness>(bad));
    EXPECT_EQ(std::get<RefutedWithWitness>(bad).witness, (std::vector<std::size_t>{2}));

    EXPECT_TRUE(std::holds_alternative<RefutedWithWitness>(stability_index_certified(A, 2, 10, 3)));
    EXPECT_THROW(stability_index_certified(A, 4, 10, 3), std::invalid_argument);
}

TEST(StabilityCertified, NeverRefutesAtTheExactStability) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + rng.uniform_index(8);
        DenseMatrix A = gen_generic(4, n, 2, rng.next_u64());
        for (std::size_t i = 0; i < 4; ++i)
            A(i, 0) = 0.0;
        const auto k = stability_index_exhaustive(A).column_stability;
        EXPECT_TRUE(std::holds_alternative<Certified>(stability_index_certified(A, k, 50, rng.next_u64())));
    }
}

TEST(Coherence, Examples) {
    DenseMatrix e1(5, 1);
    e1(0, 0) = 1.0;
    EXPECT_DOUBLE_EQ(coherence_of_orthonormal(e1).mu, 5.0);

    DenseMatrix flat(4, 1);
    for (std::size_t i = 0; i < 4; ++i)
        flat(i, 0) = 0.5;
    EXPECT_DOUBLE_EQ(coherence_of_orthonormal(flat).mu, 1.0);

    EXPECT_THROW(coherence_of_orthonormal(DenseMatrix{{1}, {1}}), std::invalid_argument);
    EXPECT_THROW(coherence_of_subspace(DenseMatrix{{1, 2}, {2, 4}, {0, 0}}), rank_deficient_error);
}

TEST(Coherence, StableCoherentVector) {
    const auto u = stable_coherent_vector(16, 3, 0.25);
    DenseMatrix U(16, 1);
    for (std::size_t i = 0; i < 16; ++i)
        U(i, 0) = u[i];
    EXPECT_NEAR(coherence_of_orthonormal(U).mu, 12.0, 1e-12);
}

TEST(Coherence, RangeAndBasisIndependence) {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.uniform_index(12), r = 1 + rng.uniform_index(n - 1);
        const DenseMatrix M = gaussian_matrix(n, r, rng);
        const auto c = coherence_of_subspace(M);
        EXPECT_GE(c.mu, 1.0 - 1e-12);
        EXPECT_LE(c.mu, static_cast<double>(n) / static_cast<double>(r) + 1e-12);
        EXPECT_EQ(c.subspace_dim, r);
        EXPECT_EQ(c.ambient_dim, n);

        DenseMatrix G = gaussian_matrix(r, r, rng);
        for (std::size_t i = 0; i < r; ++i)
            G(i, i) += 2.0 * static_cast<double>(r);
        EXPECT_NEAR(coherence_of_subspace(M * G).mu, c.mu, 1e-9);
        EXPECT_NEAR(test::projector_coherence(M), c.mu, 1e-9);
    }
}

TEST(CoherenceImpliesStability, HoldsWheneverApplicable) {
    Rng rng(4242);
    std::size_t applicable = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 4 + rng.uniform_index(9), r = 1 + rng.uniform_index(3);
        const std::size_t m = r + rng.uniform_index(4);
        const DenseMatrix A = gen_random_orthogonal_model(m, n, r, std::vector<double>(r, 1.0), rng.next_u64());
        // the first r rows are independent a.s., so they span the row space
        std::vector<std::size_t> lead(r);
        std::iota(lead.begin(), lead.end(), std::size_t{0});
        const double mu_ref = test::projector_coherence(A.select_rows(lead).transpose());
        for (std::size_t k = 0; k <= n - r; ++k) {
            const auto chk = check_coherence_implies_stability(A, k);
            EXPECT_EQ(chk.rank, r);
            EXPECT_NEAR(chk.mu_v, mu_ref, 1e-9);
            if (!chk.applicable) {
                EXPECT_FALSE(chk.observed_s.has_value());
                continue;
            }
            ++applicable;
            EXPECT_TRUE(chk.bound_holds) << "n=" << n << " r=" << r << " k=" << k;
            EXPECT_EQ(*chk.observed_s, test::brute_stability(A));
        }
    }
    EXPECT_GT(applicable, 100u);
}

TEST(CoherenceImpliesStability, EdgeCases) {
    EXPECT_FALSE(check_coherence_implies_stability(DenseMatrix(3, 3), 1).applicable);
    const DenseMatrix A = gen_generic(3, 5, 2, 1);
    EXPECT_THROW(check_coherence_implies_stability(A, 4), std::invalid_argument);
    // the stable-coherent matrix is stable despite failing the hypothesis
    const DenseMatrix S = gen_stable_coherent(12, 4, 0.25);
    const auto chk = check_coherence_implies_stability(S, 4);
    EXPECT_FALSE(chk.applicable);
    EXPECT_EQ(stability_index_exhaustive(S).column_stability, 4u);
}

TEST(StabilityExhaustive, IdentityAndCauchyExamples) {
    EXPECT_EQ(stability_index_exhaustive(DenseMatrix::identity(3)).column_stability, 0u);
    const std::vector<double> u{1, 2}, v{3, 4, 5, 6};
    const auto rep = stability_index_exhaustive(gen_cauchy(u, v));
    EXPECT_EQ(rep.rank, 2u);
    EXPECT_EQ(rep.column_stability, 2u);
}

TEST(StabilityExhaustive, WitnessDropsRankByExactlyOneAndSmallerRemovalsNever) {
    Rng rng(303);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + rng.uniform_index(4), n = 3 + rng.uniform_index(8);
        DenseMatrix A = gen_generic(m, n, 1 + rng.uniform_index(std::min(m, n)), rng.next_u64());
        for (std::size_t j = 0; j < n; ++j)
            if (rng.bernoulli(0.3))
                for (std::size_t i = 0; i < m; ++i)
                    A(i, j) = 0.0;
        const auto rep = stability_index_exhaustive(A);
        if (rep.witness_columns) {
            std::vector<std::size_t> keep;
            for (std::size_t j = 0; j < n; ++j)
                if (std::find(rep.witness_columns->begin(), rep.witness_columns->end(), j) ==
                    rep.witness_columns->end())
                    keep.push_back(j);
            const std::size_t kept = keep.empty() ? 0 : test::ge_rank(A.select_columns(keep));
            EXPECT_EQ(kept + 1, rep.rank);
        }
        std::vector<std::size_t> perm(n);
        for (int s = 0; s < 1000; ++s) {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            for (std::size_t i = 0; i < rep.column_stability; ++i)
                std::swap(perm[i], perm[i + rng.uniform_index(n - i)]);
            std::vector<std::size_t> keep(perm.begin() + static_cast<std::ptrdiff_t>(rep.column_stability), perm.end());
            const std::size_t kept = keep.empty() ? 0 : test::ge_rank(A.select_columns(keep));
            ASSERT_EQ(kept, rep.rank);
        }
    }
}

TEST(StabilityCertified, Examples) {
    const auto id = stability_index_certified(DenseMatrix::identity(5), 1, 3, 4);
    ASSERT_TRUE(std::holds_alternative<RefutedWithWitness>(id));
    EXPECT_EQ(std::get<RefutedWithWitness>(id).witness.size(), 1u);

    std::vector<double> a(100);
    std::iota(a.begin(), a.end(), 1.0);
    EXPECT_TRUE(std::holds_alternative<Certified>(stability_index_certified(gen_first_row(2, 100, a), 99, 50, 5)));

    const DenseMatrix R = gen_random_orthogonal_model(12, 12, 3, std::vector<double>(3, 1.0), 6);
    EXPECT_TRUE(std::holds_alternative<Certified>(stability_index_certified(R, 9, 200, 7)));
}

TEST(Coherence, SubspaceExamples) {
    DenseMatrix axes(4, 2);
    axes(0, 0) = 1.0;
    axes(1, 1) = 1.0;
    EXPECT_DOUBLE_EQ(coherence_of_orthonormal(axes).mu, 2.0);

    DenseMatrix flat(8, 1);
    for (std::size_t i = 0; i < 8; ++i)
        flat(i, 0) = 1.0 / std::sqrt(8.0);
    EXPECT_NEAR(coherence_of_orthonormal(flat).mu, 1.0, 1e-15);

    DenseMatrix scaled(4, 2);
    scaled(0, 0) = 3.0;
    scaled(1, 1) = 5.0;
    EXPECT_DOUBLE_EQ(coherence_of_subspace(scaled).mu, 2.0);

    Rng rng(12);
    EXPECT_NEAR(coherence_of_subspace(gaussian_matrix(7, 7, rng)).mu, 1.0, 1e-9);
    const DenseMatrix M = gaussian_matrix(6, 2, rng);
    EXPECT_NEAR(coherence_of_subspace(M).mu, test::projector_coherence(M), 1e-12);
}

TEST(CoherenceImpliesStability, Examples) {
    // flat first row: mu(V) = 1 < 6/5
    const DenseMatrix ones = gen_first_row(3, 6, std::vector<double>(6, 1.0));
    const auto flat = check_coherence_implies_stability(ones, 5);
    EXPECT_TRUE(flat.applicable);
    EXPECT_NEAR(flat.mu_v, 1.0, 1e-12);
    EXPECT_EQ(flat.observed_s, 5u);
    EXPECT_TRUE(flat.bound_holds);

    DenseMatrix e11(5, 5);
    e11(0, 0) = 1.0;
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto chk = check_coherence_implies_stability(e11, k);
        EXPECT_FALSE(chk.applicable);
        EXPECT_NEAR(chk.mu_v, 5.0, 1e-12);
    }

    std::size_t found = 0;
    for (std::uint64_t seed = 0; seed < 50 && found < 5; ++seed) {
        const DenseMatrix A = gen_random_orthogonal_model(10, 10, 2, std::vector<double>(2, 1.0), seed);
        const auto chk = check_coherence_implies_stability(A, 2);
        if (!chk.applicable)
            continue;
        ++found;
        EXPECT_TRUE(chk.bound_holds);
        EXPECT_GE(*chk.observed_s, 2u);
    }
    EXPECT_GT(found, 0u);
}

TEST(StableCoherent, EveryKHasExactStabilityAndCoherence) {
    const std::size_t n = 9;
    const double eps = 0.25;
    for (std::size_t k = 1; k < n; ++k) {
        const DenseMatrix A = gen_stable_coherent(n, k, eps);
        EXPECT_EQ(stability_index_exhaustive(A).column_stability, k);
        EXPECT_EQ(row_stability_index_exhaustive(A).column_stability, k);
        EXPECT_NEAR(coherence_of_orthonormal(DenseMatrix(n, 1, stable_coherent_vector(n, k, eps))).mu,
                    (1.0 - eps) * static_cast<double>(n), 1e-12);
    }
}
