#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qevo/core.hpp"
#include "qevo/rng.hpp"

namespace qevo {

// A candidate variation operator (an action in the selection model).
// Indices are 1-based and unique within the action set.
struct OperatorId {
    enum class Label { GA, DE };
    int index = 1;
    Label label = Label::GA;

    bool operator==(const OperatorId&) const = default;
};

inline std::vector<OperatorId> default_action_set() {
    return {{1, OperatorId::Label::GA}, {2, OperatorId::Label::DE}};
}

inline std::string operator_name(OperatorId::Label label) {
    return label == OperatorId::Label::GA ? "GA" : "DE";
}

// Variation parameters. Defaults follow the usual SBX/PM/DE settings:
// pc = 1, eta_c = 20, pm = 1/n, eta_m = 20, F = 0.5, CR = 1.
struct OperatorParams {
    double pc = 1.0;     // SBX crossover probability
    double eta_c = 20.0; // SBX distribution index
    double pm = 0.1;     // per-gene mutation probability, set to 1/n by callers
    double eta_m = 20.0; // mutation distribution index
    double F = 0.5;      // DE scale factor
    double CR = 1.0;     // DE crossover rate

    void validate() const {
        auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!prob(pc) || !prob(pm) || !prob(CR))
            throw std::invalid_argument("OperatorParams: probabilities must lie in [0,1]");
        if (!(eta_c > 0) || !(eta_m > 0))
            throw std::invalid_argument("OperatorParams: distribution indices must be > 0");
    }

    static OperatorParams for_dimension(int n) {
        OperatorParams params;
        params.pm = 1.0 / static_cast<double>(n);
        return params;
    }
};

// Simulated binary crossover (Deb & Agrawal 1995). Per gene the spread
// factor beta is drawn from the polynomial density, negated with probability
// 1/2 and reset to 1 with probability 1/2, giving the usual mean-preserving
// child pair (p1+p2)/2 +- beta*(p1-p2)/2. With probability 1-pc the parents
// pass through unchanged.
inline std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    const std::vector<double>& p1, const std::vector<double>& p2, const OperatorParams& params,
    const std::vector<std::pair<double, double>>& bounds, Rng& rng) {
    if (p1.size() != p2.size())
        throw std::invalid_argument("sbx_crossover: parent lengths differ");
    std::vector<double> c1 = p1;
    std::vector<double> c2 = p2;
    if (rng.uniform01() > params.pc)
        return {std::move(c1), std::move(c2)};
    for (std::size_t j = 0; j < p1.size(); ++j) {
        const double mu = rng.uniform01();
        double beta = (mu <= 0.5) ? std::pow(2.0 * mu, 1.0 / (params.eta_c + 1.0))
                                  : std::pow(2.0 - 2.0 * mu, -1.0 / (params.eta_c + 1.0));
        if (rng.uniform01() < 0.5) beta = -beta;
        if (rng.uniform01() < 0.5) beta = 1.0;
        const double mean = 0.5 * (p1[j] + p2[j]);
        const double half_diff = 0.5 * (p1[j] - p2[j]);
        c1[j] = mean + beta * half_diff;
        c2[j] = mean - beta * half_diff;
    }
    return {clamp_to_bounds(std::move(c1), bounds), clamp_to_bounds(std::move(c2), bounds)};
}

// Polynomial mutation (Deb), bounded variant: the perturbation shrinks near
// the box edges so mutated genes stay inside the bounds.
inline std::vector<double> polynomial_mutation(std::vector<double> x, const OperatorParams& params,
                                               const std::vector<std::pair<double, double>>& bounds,
                                               Rng& rng) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (rng.uniform01() >= params.pm) continue;
        const double lo = bounds[j].first;
        const double hi = bounds[j].second;
        const double range = hi - lo;
        const double mu = rng.uniform01();
        double delta;
        if (mu <= 0.5) {
            const double d1 = (x[j] - lo) / range;
            const double inner = 2.0 * mu + (1.0 - 2.0 * mu) * std::pow(1.0 - d1, params.eta_m + 1.0);
            delta = std::pow(inner, 1.0 / (params.eta_m + 1.0)) - 1.0;
        } else {
            const double d2 = (hi - x[j]) / range;
            const double inner =
                2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * std::pow(1.0 - d2, params.eta_m + 1.0);
            delta = 1.0 - std::pow(inner, 1.0 / (params.eta_m + 1.0));
        }
        x[j] += delta * range;
    }
    return clamp_to_bounds(std::move(x), bounds);
}

// DE variation against the parent: child_j = parent_j + F*(a_j - b_j) with
// probability CR per gene (one random gene always crosses), then polynomial
// mutation and clamping.
inline std::vector<double> de_variation(const std::vector<double>& parent,
                                        const std::vector<double>& a, const std::vector<double>& b,
                                        const OperatorParams& params,
                                        const std::vector<std::pair<double, double>>& bounds,
                                        Rng& rng) {
    if (a.size() != parent.size() || b.size() != parent.size())
        throw std::invalid_argument("de_variation: vector lengths differ");
    std::vector<double> child = parent;
    const auto j_rand = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(parent.size()) - 1));
    for (std::size_t j = 0; j < parent.size(); ++j) {
        const bool cross = rng.uniform01() < params.CR;
        if (cross || j == j_rand) child[j] = parent[j] + params.F * (a[j] - b[j]);
    }
    return polynomial_mutation(std::move(child), params, bounds, rng);
}

// Generates one offspring decision vector per mating-pool member.
// GA pairs consecutive pool entries (wrapping for odd pools) through SBX and
// mutates both children; DE treats every member as a parent with two distinct
// other members as the difference pair.
inline std::vector<std::vector<double>> generate_offspring(const OperatorId& op,
                                                           const std::vector<Solution>& pool,
                                                           const ProblemSpec& spec,
                                                           const OperatorParams& params, Rng& rng) {
    params.validate();
    const std::size_t size = pool.size();
    std::vector<std::vector<double>> out;
    out.reserve(size + 1);
    if (op.label == OperatorId::Label::GA) {
        if (size < 2) throw std::invalid_argument("generate_offspring: GA needs a pool of >= 2");
        for (std::size_t i = 0; out.size() < size; i += 2) {
            const auto& p1 = pool[i % size].x;
            const auto& p2 = pool[(i + 1) % size].x;
            auto [c1, c2] = sbx_crossover(p1, p2, params, spec.bounds, rng);
            out.push_back(polynomial_mutation(std::move(c1), params, spec.bounds, rng));
            out.push_back(polynomial_mutation(std::move(c2), params, spec.bounds, rng));
        }
        out.resize(size);
    } else {
        if (size < 3) throw std::invalid_argument("generate_offspring: DE needs a pool of >= 3");
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t a, b;
            do {
                a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(size) - 1));
            } while (a == i);
            do {
                b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(size) - 1));
            } while (b == i || b == a);
            out.push_back(de_variation(pool[i].x, pool[a].x, pool[b].x, params, spec.bounds, rng));
        }
    }
    return out;
}

}  // namespace qevo
