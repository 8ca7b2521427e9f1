#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "rbp/generators.hpp"
#include "rbp/random.hpp"
#include "rbp/stability.hpp"
#include "rbp/svd_oracle.hpp"

using namespace rbp;

TEST(Rng, DeterministicAndSplittable) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a.next_u64(), b.next_u64());
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i)
        seeds.insert(derive_seed(7, i));
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
    EXPECT_EQ(Rng(5).split(3).seed(), derive_seed(5, 3));
}

TEST(Rng, RangesAndMoments) {
    Rng rng(1);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    std::vector<int> hist(7, 0);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const auto k = rng.uniform_index(7);
        ASSERT_LT(k, 7u);
        ++hist[k];
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    // 5 sigma on each moment
    EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
    for (int c : hist)
        EXPECT_NEAR(c / static_cast<double>(n), 1.0 / 7.0, 5.0 * std::sqrt((1.0 / 7.0) * (6.0 / 7.0) / n));
}

TEST(Generators, FirstRow) {
    const std::vector<double> a{1, 2, 3};
    EXPECT_EQ(gen_first_row(2, 3, a), (DenseMatrix{{1, 2, 3}, {0, 0, 0}}));
    const std::vector<double> bad{1, 0, 3};
    EXPECT_THROW(gen_first_row(2, 3, bad), std::invalid_argument);
    EXPECT_THROW(gen_first_row(2, 2, a), dimension_error);
}

TEST(Generators, RankTwoOdd) {
    EXPECT_EQ(gen_rank_two_odd(5),
              (DenseMatrix{{1, 1, 1, 1, 1}, {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}}));
    EXPECT_THROW(gen_rank_two_odd(4), std::invalid_argument);
    EXPECT_THROW(gen_rank_two_odd(1), std::invalid_argument);
}

TEST(Generators, Cauchy) {
    const std::vector<double> u{1, 2}, v{3, 4, 5};
    const DenseMatrix A = gen_cauchy(u, v);
    const double expect[2][3] = {{1.0 / 4, 1.0 / 5, 1.0 / 6}, {1.0 / 5, 1.0 / 6, 1.0 / 7}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_DOUBLE_EQ(A(i, j), expect[i][j]);
    const std::vector<double> dup{1, 1};
    EXPECT_THROW(gen_cauchy(dup, v), std::invalid_argument);
    const std::vector<double> cancel{-3, 2};
    EXPECT_THROW(gen_cauchy(cancel, v), std::invalid_argument);
    EXPECT_THROW(gen_cauchy(v, u), std::invalid_argument);
}

TEST(Generators, GenericIsSeededAndHasRankR) {
    EXPECT_EQ(gen_generic(6, 9, 3, 10), gen_generic(6, 9, 3, 10));
    EXPECT_FALSE(gen_generic(6, 9, 3, 10) == gen_generic(6, 9, 3, 11));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const DenseMatrix A = gen_generic(7, 10, 3, s);
        EXPECT_EQ(test::ge_rank(A), 3u);
        EXPECT_EQ(stability_index_exhaustive(A).column_stability, 7u);
    }
    EXPECT_THROW(gen_generic(3, 3, 4, 0), std::invalid_argument);
    EXPECT_THROW(gen_generic(3, 3, 0, 0), std::invalid_argument);
}

TEST(Generators, HaarColumnsAreOrthonormal) {
    Rng rng(3);
    const DenseMatrix Q = haar_orthonormal_columns(9, 4, rng);
    const DenseMatrix G = Q.transpose() * Q;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            EXPECT_NEAR(G(a, b), a == b ? 1.0 : 0.0, 1e-12);
}

TEST(Generators, HaarFirstCoordinatePassesKolmogorovSmirnov) {
    // For a uniform point on the sphere in R^3 the first coordinate is uniform on [-1, 1].
    const std::size_t samples = 2000;
    std::vector<double> xs;
    xs.reserve(samples);
    for (std::size_t t = 0; t < samples; ++t) {
        Rng rng(derive_seed(20240611, t));
        xs.push_back(haar_orthonormal_columns(3, 1, rng)(0, 0));
    }
    const double d = test::ks_statistic(xs, [](double x) { return std::clamp((x + 1.0) / 2.0, 0.0, 1.0); });
    // alpha = 0.01 critical value
    EXPECT_LT(d, 1.628 / std::sqrt(static_cast<double>(samples)));
}

TEST(Generators, RandomOrthogonalModelHasPrescribedSpectrum) {
    const std::vector<double> sigma{3.0, 2.0, 0.5};
    const DenseMatrix A = gen_random_orthogonal_model(8, 6, 3, sigma, 99);
    EXPECT_EQ(A, gen_random_orthogonal_model(8, 6, 3, sigma, 99));
    const auto s = svd_oracle(A);
    EXPECT_NEAR(s.singular_values[0], 3.0, 1e-10);
    EXPECT_NEAR(s.singular_values[1], 2.0, 1e-10);
    EXPECT_NEAR(s.singular_values[2], 0.5, 1e-10);
    for (std::size_t i = 3; i < s.singular_values.size(); ++i)
        EXPECT_NEAR(s.singular_values[i], 0.0, 1e-10);
    const std::vector<double> zero{1.0, 0.0, 1.0};
    EXPECT_THROW(gen_random_orthogonal_model(8, 6, 3, zero, 1), std::invalid_argument);
}

TEST(Generators, StableCoherent) {
    const auto u = stable_coherent_vector(16, 3, 0.25);
    EXPECT_DOUBLE_EQ(u[0], std::sqrt(0.75));
    for (std::size_t i = 1; i <= 3; ++i)
        EXPECT_DOUBLE_EQ(u[i], std::sqrt(0.25 / 3.0));
    for (std::size_t i = 4; i < 16; ++i)
        EXPECT_EQ(u[i], 0.0);
    EXPECT_EQ(test::ge_rank(gen_stable_coherent(16, 3, 0.25)), 1u);
    EXPECT_THROW(stable_coherent_vector(4, 4, 0.25), std::invalid_argument);
    EXPECT_THROW(stable_coherent_vector(4, 2, 0.5), std::invalid_argument);
    EXPECT_THROW(stable_coherent_vector(4, 2, 0.0), std::invalid_argument);
}

TEST(GeneratorSpec, FamilyNamesRoundTrip) {
    for (Family f : {Family::FirstRow, Family::RankTwoOdd, Family::Cauchy, Family::Generic, Family::RandomOrthogonal,
                     Family::StableCoherent})
        EXPECT_EQ(parse_family(family_name(f)), f);
    EXPECT_FALSE(parse_family("nonsense").has_value());
}

TEST(GeneratorSpec, DefaultsAndNominalValues) {
    const DenseMatrix fr = generate({Family::FirstRow, 2, 3, 1, {}, 0});
    EXPECT_EQ(fr, (DenseMatrix{{1, 2, 3}, {0, 0, 0}}));

    const GeneratorSpec cs{Family::Cauchy, 2, 3, 2, {}, 0};
    const std::vector<double> u{1, 2}, v{3, 4, 5};
    EXPECT_EQ(generate(cs), gen_cauchy(u, v));
    EXPECT_EQ(nominal_rank(cs), 2u);
    EXPECT_EQ(nominal_stability(cs), 1u);

    const GeneratorSpec sc{Family::StableCoherent, 12, 12, 1, {4, 0.25}, 0};
    EXPECT_EQ(nominal_stability(sc), 4u);
    EXPECT_EQ(generate(sc), gen_stable_coherent(12, 4, 0.25));

    EXPECT_THROW(generate({Family::StableCoherent, 12, 12, 1, {4.5, 0.25}, 0}), std::invalid_argument);
    EXPECT_THROW(generate({Family::StableCoherent, 12, 11, 1, {4, 0.25}, 0}), std::invalid_argument);
    EXPECT_THROW(generate({Family::RankTwoOdd, 5, 7, 2, {}, 0}), std::invalid_argument);
    EXPECT_THROW(generate({Family::Cauchy, 2, 3, 2, {1, 2, 3}, 0}), std::invalid_argument);
}

TEST(GeneratorSpec, NominalStabilityMatchesExhaustive) {
    const std::vector<GeneratorSpec> specs = {
        {Family::FirstRow, 3, 8, 1, {}, 0},     {Family::RankTwoOdd, 7, 7, 2, {}, 0},
        {Family::Cauchy, 3, 7, 3, {}, 0},       {Family::Generic, 5, 9, 2, {}, 4},
        {Family::RandomOrthogonal, 6, 8, 3, {}, 5}, {Family::StableCoherent, 9, 9, 1, {3, 0.1}, 0},
    };
    for (const auto& spec : specs) {
        const auto rep = stability_index_exhaustive(generate(spec));
        EXPECT_EQ(rep.rank, nominal_rank(spec)) << family_name(spec.family);
        EXPECT_EQ(rep.column_stability, nominal_stability(spec)) << family_name(spec.family);
    }
}

TEST(Generators, SpecExamplesForRandomFamilies) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        EXPECT_EQ(test::ge_rank(gen_generic(8, 10, 3, s)), 3u);
        EXPECT_EQ(stability_index_exhaustive(gen_generic(5, 8, 2, s)).column_stability, 6u);
        EXPECT_EQ(test::ge_rank(gen_generic(4, 6, 4, s)), 4u);
        const DenseMatrix R = gen_random_orthogonal_model(10, 10, 3, std::vector<double>(3, 1.0), s);
        const auto rep = stability_index_exhaustive(R);
        EXPECT_EQ(rep.rank, 3u);
        EXPECT_EQ(rep.column_stability, 7u);
    }
}

TEST(Generators, StableCoherentSmallExample) {
    const auto u = stable_coherent_vector(4, 1, 0.25);
    EXPECT_DOUBLE_EQ(u[0], std::sqrt(0.75));
    EXPECT_DOUBLE_EQ(u[1], 0.5);
    EXPECT_EQ(u[2], 0.0);
    EXPECT_EQ(u[3], 0.0);
    EXPECT_NEAR(norm2(u), 1.0, 1e-15);
    const DenseMatrix A = gen_stable_coherent(4, 1, 0.25);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_EQ(A(i, j), u[i] * u[j]);
}
