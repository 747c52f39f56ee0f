#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "clustercf/mmd_critic.hpp"
#include "fixtures.hpp"

using namespace clustercf;
using testfixtures::make_blobs;
using testfixtures::numeric_matrix;

namespace {

// independent naive evaluation of the three-term MMD^2 sum
double mmd_squared_oracle(const std::vector<std::vector<double>>& Z,
                          const std::vector<std::vector<double>>& X, double gamma) {
    const double m = static_cast<double>(Z.size());
    const double n = static_cast<double>(X.size());
    double zz = 0.0;
    for (std::size_t i = 0; i < Z.size(); ++i)
        for (std::size_t j = 0; j < Z.size(); ++j)
            zz += std::exp(-gamma * squared_euclidean(Z[i], Z[j]));
    double zx = 0.0;
    for (std::size_t i = 0; i < Z.size(); ++i)
        for (std::size_t j = 0; j < X.size(); ++j)
            zx += std::exp(-gamma * squared_euclidean(Z[i], X[j]));
    double xx = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = 0; j < X.size(); ++j)
            xx += std::exp(-gamma * squared_euclidean(X[i], X[j]));
    return zz / (m * m) - 2.0 * zx / (m * n) + xx / (n * n);
}

double witness_oracle(const std::vector<double>& x, const std::vector<std::vector<double>>& X,
                      const std::vector<std::vector<double>>& Z, double gamma) {
    double dx = 0.0;
    for (const auto& xi : X) dx += std::exp(-gamma * squared_euclidean(x, xi));
    double dz = 0.0;
    for (const auto& zj : Z) dz += std::exp(-gamma * squared_euclidean(x, zj));
    return dx / static_cast<double>(X.size()) - dz / static_cast<double>(Z.size());
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, Rng& rng) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& v : p) v = rng.uniform(-3.0, 3.0);
    return pts;
}

} // namespace

TEST(RbfKernel, IdentityHalfPointAndDecay) {
    const std::vector<double> a{1.0, 2.0};
    EXPECT_DOUBLE_EQ(rbf_kernel(a, a, 3.0), 1.0);

    // gamma = 1, squared distance = ln 2 -> exp(-ln 2) = 1/2
    const std::vector<double> origin{0.0};
    const std::vector<double> b{std::sqrt(std::log(2.0))};
    EXPECT_NEAR(rbf_kernel(origin, b, 1.0), 0.5, 1e-15);

    double prev = 1.0;
    for (double d = 0.5; d < 20.0; d += 0.5) {
        const double v = rbf_kernel(origin, {d}, 1.0);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-12);

    EXPECT_THROW(rbf_kernel(a, origin, 1.0), ContractError);
    EXPECT_THROW(rbf_kernel(a, a, 0.0), ContractError);
}

TEST(MmdSquared, DegenerateCases) {
    Rng rng(5);
    const auto X = random_points(8, 2, rng);
    EXPECT_NEAR(mmd_squared(X, X, {0.7}), 0.0, 1e-12);

    const std::vector<std::vector<double>> one{{1.5, -0.5}};
    EXPECT_NEAR(mmd_squared(one, one, {1.0}), 0.0, 1e-15); // 1 - 2 + 1
}

TEST(MmdSquared, MatchesTripleSumOracle) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(19); // n <= 20
        const auto X = random_points(n, 3, rng);
        const std::size_t m = 1 + rng.below(n);
        std::vector<std::vector<double>> Z(X.begin(), X.begin() + static_cast<std::ptrdiff_t>(m));
        const double gamma = rng.uniform(0.1, 2.0);
        EXPECT_NEAR(mmd_squared(Z, X, {gamma}), mmd_squared_oracle(Z, X, gamma), 1e-12);
    }
}

TEST(MmdSquared, FivePointFixtureAgainstOracle) {
    const std::vector<std::vector<double>> X{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0},
                                             {2.0, 2.0}, {-1.0, 1.0}};
    const std::vector<std::vector<double>> Z{X[1], X[3]};
    EXPECT_NEAR(mmd_squared(Z, X, {0.5}), mmd_squared_oracle(Z, X, 0.5), 1e-12);
}

TEST(Witness, ZeroWhenPrototypesEqualData) {
    Rng rng(23);
    const auto X = random_points(10, 2, rng);
    for (const auto& x : X) EXPECT_NEAR(witness(x, X, X, {1.0}), 0.0, 1e-15);
}

TEST(Witness, SignReflectsDensityGap) {
    const std::vector<std::vector<double>> X{{0.0}, {0.1}, {-0.1}};
    const std::vector<std::vector<double>> Z{{50.0}};
    EXPECT_GT(witness({0.0}, X, Z, {1.0}), 0.0);
    EXPECT_LT(witness({50.0}, X, Z, {1.0}), 0.0);
}

TEST(Witness, FourPointFixtureAgainstOracle) {
    const std::vector<std::vector<double>> X{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}, {0.0, 2.0}};
    const std::vector<std::vector<double>> Z{X[0], X[2]};
    const std::vector<double> q{0.5, 0.5};
    EXPECT_NEAR(witness(q, X, Z, {0.8}), witness_oracle(q, X, Z, 0.8), 1e-12);
}

TEST(SelectPrototypes, AllPointsGiveZeroMmd) {
    Rng rng(31);
    const auto X = random_points(7, 2, rng);
    const auto idx = select_prototypes(X, X.size(), {1.0});
    EXPECT_EQ(idx.size(), X.size());
    std::vector<std::vector<double>> Z;
    for (std::size_t i : idx) Z.push_back(X[i]);
    EXPECT_NEAR(mmd_squared(Z, X, {1.0}), 0.0, 1e-12);
}

TEST(SelectPrototypes, SinglePrototypeMatchesExhaustiveArgmin) {
    Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto X = random_points(5, 2, rng);
        const double gamma = rng.uniform(0.2, 1.5);
        const auto idx = select_prototypes(X, 1, {gamma});
        ASSERT_EQ(idx.size(), 1u);

        std::size_t best = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < X.size(); ++i) {
            const double v = mmd_squared_oracle({X[i]}, X, gamma);
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        EXPECT_EQ(idx[0], best);
    }
}

TEST(SelectPrototypes, GreedyPairBoundedByExhaustiveBest) {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto X = random_points(6, 2, rng);
        const double gamma = rng.uniform(0.2, 1.5);
        const auto idx = select_prototypes(X, 2, {gamma});
        const double greedy = mmd_squared_oracle({X[idx[0]], X[idx[1]]}, X, gamma);

        double exhaustive = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = i + 1; j < X.size(); ++j)
                exhaustive = std::min(exhaustive, mmd_squared_oracle({X[i], X[j]}, X, gamma));
        EXPECT_GE(greedy, exhaustive - 1e-12);
    }
}

TEST(SelectPrototypes, GreedyMmdNonIncreasingInM) {
    Rng rng(43);
    const auto X = random_points(12, 2, rng);
    const double gamma = 0.6;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m <= X.size(); ++m) {
        const auto idx = select_prototypes(X, m, {gamma});
        std::vector<std::vector<double>> Z;
        for (std::size_t i : idx) Z.push_back(X[i]);
        const double v = mmd_squared(Z, X, {gamma});
        EXPECT_LE(v, prev + 1e-12);
        prev = v;
    }
}

TEST(SelectCriticisms, EdgeCasesAndExhaustiveMatch) {
    Rng rng(47);
    const auto X = random_points(6, 2, rng);
    const auto protos = select_prototypes(X, 2, {1.0});
    EXPECT_TRUE(select_criticisms(X, protos, 0, {1.0}).empty());

    // c = 1 matches the exhaustive argmax of |witness| over non-prototypes
    std::vector<std::vector<double>> Z;
    for (std::size_t i : protos) Z.push_back(X[i]);
    double best_v = -1.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (i == protos[0] || i == protos[1]) continue;
        const double v = std::abs(witness_oracle(X[i], X, Z, 1.0));
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    const auto crit = select_criticisms(X, protos, 1, {1.0});
    ASSERT_EQ(crit.size(), 1u);
    EXPECT_EQ(crit[0], best);

    // requesting more criticisms than points remain: all returned + warning
    std::vector<std::string> warnings;
    const auto all = select_criticisms(X, protos, 10, {1.0}, &warnings);
    EXPECT_EQ(all.size(), 4u);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(SelectCriticisms, DegenerateTieReturnsLowestIndices) {
    // duplicated points: prototype density equals data density -> witness 0
    const std::vector<std::vector<double>> X{{0.0}, {1.0}, {0.0}, {1.0}};
    const std::vector<std::size_t> protos{0, 1};
    const auto crit = select_criticisms(X, protos, 2, {1.0});
    EXPECT_EQ(crit, (std::vector<std::size_t>{2, 3}));
}

TEST(RepresentativeSet, BudgetArithmetic) {
    Rng rng(53);
    // one cluster of 100 points, share 20% -> 20 reps = 16 prototypes + 4 criticisms
    const auto X = random_points(100, 2, rng);
    std::vector<int> labels(100, 0);
    const auto set = build_representative_set(X, labels, 1, 0.20);
    ASSERT_EQ(set.clusters.size(), 1u);
    EXPECT_EQ(set.clusters[0].prototype_rows.size(), 16u);
    EXPECT_EQ(set.clusters[0].criticism_rows.size(), 4u);

    // cluster of 5, share 20% -> single prototype
    const auto tiny = build_representative_set(random_points(5, 2, rng), std::vector<int>(5, 0), 1,
                                               0.20);
    EXPECT_EQ(tiny.clusters[0].prototype_rows.size(), 1u);
    EXPECT_TRUE(tiny.clusters[0].criticism_rows.empty());

    // share 1.0 -> every point is a representative
    const auto full = build_representative_set(random_points(10, 2, rng), std::vector<int>(10, 0),
                                               1, 1.0);
    EXPECT_EQ(full.total_size(), 10u);
}

TEST(RepresentativeSet, DisjointPerClusterAndNoiseExcluded) {
    Rng rng(59);
    auto X = random_points(60, 2, rng);
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) labels.push_back(i < 30 ? 0 : (i < 55 ? 1 : kNoise));
    const auto set = build_representative_set(X, labels, 2, 0.3);
    ASSERT_EQ(set.clusters.size(), 2u);
    for (const auto& cluster : set.clusters) {
        std::set<std::size_t> seen;
        for (std::size_t r : cluster.prototype_rows) {
            EXPECT_TRUE(seen.insert(r).second);
            EXPECT_EQ(labels[r], cluster.cluster_id);
        }
        for (std::size_t r : cluster.criticism_rows) {
            EXPECT_TRUE(seen.insert(r).second);
            EXPECT_EQ(labels[r], cluster.cluster_id);
        }
    }
}

TEST(RepresentativeSet, ReproducibleAcrossCalls) {
    const auto ds = make_blobs({{0.0, 0.0}, {8.0, 8.0}}, 1.5, 40, 61);
    const auto X = numeric_matrix(ds);
    std::vector<int> labels;
    for (int i = 0; i < 80; ++i) labels.push_back(i < 40 ? 0 : 1);
    const auto a = build_representative_set(X, labels, 2, 0.2);
    const auto b = build_representative_set(X, labels, 2, 0.2);
    ASSERT_EQ(a.clusters.size(), b.clusters.size());
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        EXPECT_EQ(a.clusters[i].prototype_rows, b.clusters[i].prototype_rows);
        EXPECT_EQ(a.clusters[i].criticism_rows, b.clusters[i].criticism_rows);
    }
    EXPECT_DOUBLE_EQ(a.gamma, b.gamma);
}

TEST(MedianHeuristic, MatchesHandComputation) {
    // pairwise distances of {0, 1, 3}: 1, 3, 2 -> median 2 -> gamma 1/8
    const std::vector<std::vector<double>> pts{{0.0}, {1.0}, {3.0}};
    EXPECT_DOUBLE_EQ(median_heuristic_gamma(pts), 1.0 / 8.0);
    // degenerate: all points identical
    EXPECT_DOUBLE_EQ(median_heuristic_gamma({{1.0}, {1.0}}), 1.0);
}
