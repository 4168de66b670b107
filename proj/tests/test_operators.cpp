#include <gtest/gtest.h>

#include <cmath>

#include "qevo/operators.hpp"
#include "qevo/problems.hpp"

using namespace qevo;

namespace {

const std::vector<std::pair<double, double>> kUnit = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};

std::vector<Solution> make_pool(const ProblemSpec& spec, std::size_t count, Rng& rng) {
    std::vector<Solution> pool;
    std::vector<double> x(spec.n);
    for (std::size_t i = 0; i < count; ++i) {
        for (int j = 0; j < spec.n; ++j) x[j] = rng.uniform01();
        pool.push_back(evaluate(spec, x));
    }
    return pool;
}

}  // namespace

TEST(Sbx, IdenticalParentsGiveIdenticalChildren) {
    OperatorParams params;
    Rng rng(1);
    const std::vector<double> p = {0.3, 0.6, 0.9};
    const auto [c1, c2] = sbx_crossover(p, p, params, kUnit, rng);
    EXPECT_EQ(c1, p);
    EXPECT_EQ(c2, p);
}

TEST(Sbx, ZeroCrossoverProbabilityCopiesParents) {
    OperatorParams params;
    params.pc = 0.0;
    Rng rng(2);
    const std::vector<double> p1 = {0.2, 0.4, 0.6};
    const std::vector<double> p2 = {0.8, 0.5, 0.1};
    const auto [c1, c2] = sbx_crossover(p1, p2, params, kUnit, rng);
    EXPECT_EQ(c1, p1);
    EXPECT_EQ(c2, p2);
}

TEST(Sbx, MeanPreservingOverManyTrials) {
    OperatorParams params;
    Rng rng(3);
    const std::vector<double> p1 = {0.4};
    const std::vector<double> p2 = {0.6};
    const std::vector<std::pair<double, double>> bounds = {{0.0, 1.0}};
    const int trials = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto [c1, c2] = sbx_crossover(p1, p2, params, bounds, rng);
        const double s = c1[0] + c2[0];
        sum += s;
        sumsq += s * s;
    }
    const double mean = sum / trials;
    const double var = sumsq / trials - mean * mean;
    const double stderr3 = 3.0 * std::sqrt(std::max(var, 0.0) / trials);
    EXPECT_NEAR(mean, p1[0] + p2[0], std::max(stderr3, 1e-6));
}

TEST(Sbx, MismatchedLengthsThrow) {
    OperatorParams params;
    Rng rng(4);
    EXPECT_THROW(sbx_crossover({0.1}, {0.1, 0.2}, params, kUnit, rng), std::invalid_argument);
}

TEST(PolynomialMutation, ZeroProbabilityIsIdentity) {
    OperatorParams params;
    params.pm = 0.0;
    Rng rng(5);
    const std::vector<double> x = {0.25, 0.5, 0.75};
    EXPECT_EQ(polynomial_mutation(x, params, kUnit, rng), x);
}

TEST(PolynomialMutation, GeneAtLowerBoundStaysInBounds) {
    OperatorParams params;
    params.pm = 1.0;
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        const auto y = polynomial_mutation({0.0, 0.0, 0.0}, params, kUnit, rng);
        for (double v : y) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(PolynomialMutation, EmpiricalFrequencyMatchesPm) {
    const int n = 10;
    OperatorParams params = OperatorParams::for_dimension(n);
    const std::vector<std::pair<double, double>> bounds(n, {0.0, 1.0});
    const std::vector<double> x(n, 0.5);
    Rng rng(7);
    const int trials = 10000;
    long mutated = 0;
    for (int i = 0; i < trials; ++i) {
        const auto y = polynomial_mutation(x, params, bounds, rng);
        for (int j = 0; j < n; ++j)
            if (y[static_cast<std::size_t>(j)] != 0.5) ++mutated;
    }
    const double freq = static_cast<double>(mutated) / (static_cast<double>(trials) * n);
    const double p = params.pm;
    const double stderr3 = 3.0 * std::sqrt(p * (1 - p) / (static_cast<double>(trials) * n));
    // mu = 0.5 draws produce a zero move, so the observed rate can sit a hair low
    EXPECT_NEAR(freq, p, stderr3 + 1e-3);
}

TEST(DeVariation, EqualDifferencePairIsIdentityBeforeMutation) {
    OperatorParams params;
    params.pm = 0.0;
    Rng rng(8);
    const std::vector<double> parent = {0.2, 0.5, 0.8};
    const std::vector<double> a = {0.4, 0.4, 0.4};
    const auto child = de_variation(parent, a, a, params, kUnit, rng);
    EXPECT_EQ(child, parent);
}

TEST(DeVariation, HandArithmetic) {
    OperatorParams params;
    params.pm = 0.0;
    params.F = 0.5;
    params.CR = 1.0;
    Rng rng(9);
    const std::vector<std::pair<double, double>> bounds = {{0.0, 1.0}};
    const auto child = de_variation({0.4}, {0.8}, {0.2}, params, bounds, rng);
    ASSERT_EQ(child.size(), 1u);
    EXPECT_DOUBLE_EQ(child[0], 0.7);
}

TEST(DeVariation, FullCrossoverPerturbsEveryGene) {
    OperatorParams params;
    params.pm = 0.0;
    params.CR = 1.0;
    Rng rng(10);
    const std::vector<double> parent = {0.5, 0.5, 0.5};
    const std::vector<double> a = {0.6, 0.7, 0.8};
    const std::vector<double> b = {0.5, 0.5, 0.5};
    const auto child = de_variation(parent, a, b, params, kUnit, rng);
    for (std::size_t j = 0; j < 3; ++j)
        EXPECT_DOUBLE_EQ(child[j], parent[j] + 0.5 * (a[j] - b[j]));
}

TEST(DeVariation, AtLeastOneGeneCrossesAtZeroCr) {
    OperatorParams params;
    params.pm = 0.0;
    params.CR = 0.0;
    Rng rng(11);
    const std::vector<double> parent = {0.5, 0.5, 0.5};
    const std::vector<double> a = {0.7, 0.7, 0.7};
    const std::vector<double> b = {0.3, 0.3, 0.3};
    for (int i = 0; i < 100; ++i) {
        const auto child = de_variation(parent, a, b, params, kUnit, rng);
        int changed = 0;
        for (std::size_t j = 0; j < 3; ++j)
            if (child[j] != parent[j]) ++changed;
        EXPECT_EQ(changed, 1);
    }
}

TEST(GenerateOffspring, GaCountContract) {
    const auto spec = make_problem("CP1", 5);
    Rng rng(12);
    const auto pool = make_pool(spec, 4, rng);
    const auto params = OperatorParams::for_dimension(spec.n);
    const auto out = generate_offspring({1, OperatorId::Label::GA}, pool, spec, params, rng);
    EXPECT_EQ(out.size(), 4u);
}

TEST(GenerateOffspring, GaOddPoolWrapsAndTruncates) {
    const auto spec = make_problem("CP1", 5);
    Rng rng(13);
    const auto pool = make_pool(spec, 5, rng);
    const auto params = OperatorParams::for_dimension(spec.n);
    const auto out = generate_offspring({1, OperatorId::Label::GA}, pool, spec, params, rng);
    EXPECT_EQ(out.size(), 5u);
}

TEST(GenerateOffspring, DeCountContract) {
    const auto spec = make_problem("CP1", 5);
    Rng rng(14);
    const auto pool = make_pool(spec, 3, rng);
    const auto params = OperatorParams::for_dimension(spec.n);
    const auto out = generate_offspring({2, OperatorId::Label::DE}, pool, spec, params, rng);
    EXPECT_EQ(out.size(), 3u);
}

TEST(GenerateOffspring, PoolTooSmallThrows) {
    const auto spec = make_problem("CP1", 5);
    Rng rng(15);
    const auto params = OperatorParams::for_dimension(spec.n);
    const auto pool1 = make_pool(spec, 1, rng);
    EXPECT_THROW(generate_offspring({1, OperatorId::Label::GA}, pool1, spec, params, rng),
                 std::invalid_argument);
    const auto pool2 = make_pool(spec, 2, rng);
    EXPECT_THROW(generate_offspring({2, OperatorId::Label::DE}, pool2, spec, params, rng),
                 std::invalid_argument);
}

TEST(GenerateOffspring, OutputsAlwaysWithinBounds) {
    const auto spec = make_problem("CP4", 8);
    const auto params = OperatorParams::for_dimension(spec.n);
    Rng rng(16);
    // ~1e5 offspring genes across both operators
    for (int trial = 0; trial < 700; ++trial) {
        const auto pool = make_pool(spec, 10, rng);
        const auto op = (trial % 2 == 0) ? OperatorId{1, OperatorId::Label::GA}
                                         : OperatorId{2, OperatorId::Label::DE};
        for (const auto& child : generate_offspring(op, pool, spec, params, rng)) {
            for (double v : child) {
                ASSERT_GE(v, 0.0);
                ASSERT_LE(v, 1.0);
            }
        }
    }
}

TEST(GenerateOffspring, SeededRngGivesIdenticalOffspring) {
    const auto spec = make_problem("CP2", 6);
    const auto params = OperatorParams::for_dimension(spec.n);
    auto run_once = [&]() {
        Rng rng(99);
        const auto pool = make_pool(spec, 8, rng);
        auto ga = generate_offspring({1, OperatorId::Label::GA}, pool, spec, params, rng);
        auto de = generate_offspring({2, OperatorId::Label::DE}, pool, spec, params, rng);
        ga.insert(ga.end(), de.begin(), de.end());
        return ga;
    };
    EXPECT_EQ(run_once(), run_once());
}

TEST(OperatorParams, ValidationRejectsBadValues) {
    OperatorParams params;
    params.pc = 1.5;
    EXPECT_THROW(params.validate(), std::invalid_argument);
    params = OperatorParams{};
    params.eta_m = 0.0;
    EXPECT_THROW(params.validate(), std::invalid_argument);
}
