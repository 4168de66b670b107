#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qevo {

// Raw evaluator output: objective values plus untransformed constraint values.
// Inequalities are feasible when g_i <= 0, equalities when h_j = 0.
struct RawEvaluation {
    std::vector<double> objectives;
    std::vector<double> inequality;
    std::vector<double> equality;
};

// Definition of a constrained multi-objective problem:
//   minimize f_1..f_m(x)  s.t.  g_1..g_p(x) <= 0,  h_{p+1}..h_q(x) = 0,
// with box bounds on each decision variable. Equalities are relaxed to
// |h_j| <= sigma when computing violations.
struct ProblemSpec {
    std::string name;
    int n = 0;  // decision variables
    int m = 0;  // objectives
    int p = 0;  // inequality constraints
    int q = 0;  // total constraints (inequality + equality)
    std::vector<std::pair<double, double>> bounds;  // per-variable (lower, upper)
    double sigma = 1e-4;  // equality relaxation tolerance
    std::function<RawEvaluation(const std::vector<double>&)> evaluator;

    // Optional reduced parameterization for grid oracles: builds a decision
    // vector realizing (x1, d) when the objectives and constraints depend on
    // x_2..x_n only through a scalar distance term d in [0, max_distance].
    std::function<std::vector<double>(double, double)> reduced_preimage;
    double max_distance = 0.0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("ProblemSpec: n must be >= 1");
        if (m < 2) throw std::invalid_argument("ProblemSpec: m must be >= 2");
        if (p < 0 || q < p) throw std::invalid_argument("ProblemSpec: need q >= p >= 0");
        if (static_cast<int>(bounds.size()) != n)
            throw std::invalid_argument("ProblemSpec: bounds size must equal n");
        for (const auto& [lo, hi] : bounds)
            if (!(lo < hi)) throw std::invalid_argument("ProblemSpec: lower bound must be < upper");
        if (!(sigma > 0)) throw std::invalid_argument("ProblemSpec: sigma must be > 0");
        if (!evaluator) throw std::invalid_argument("ProblemSpec: evaluator not set");
    }
};

// An evaluated candidate: decision vector, objectives and its constraint
// violations (per constraint and total).
struct Solution {
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> cv_per;
    double cv = 0.0;
};

struct Population {
    std::vector<Solution> members;
    int capacity = 0;

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
};

// Thrown when an evaluation produces a non-finite value; carries the decision
// vector that triggered it.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, std::vector<double> x)
        : std::runtime_error(what), x_(std::move(x)) {}
    const std::vector<double>& decision_vector() const { return x_; }

private:
    std::vector<double> x_;
};

inline std::vector<double> clamp_to_bounds(std::vector<double> x,
                                           const std::vector<std::pair<double, double>>& bounds) {
    for (std::size_t i = 0; i < x.size() && i < bounds.size(); ++i) {
        if (x[i] < bounds[i].first) x[i] = bounds[i].first;
        if (x[i] > bounds[i].second) x[i] = bounds[i].second;
    }
    return x;
}

// Per-constraint violation degrees and their sum. Inequalities contribute
// max(0, g_j); equalities contribute max(0, |h_j| - sigma).
inline std::pair<std::vector<double>, double> constraint_violation(const ProblemSpec& spec,
                                                                   const std::vector<double>& g,
                                                                   const std::vector<double>& h) {
    if (static_cast<int>(g.size()) != spec.p)
        throw std::invalid_argument("constraint_violation: expected " + std::to_string(spec.p) +
                                    " inequality values, got " + std::to_string(g.size()));
    if (static_cast<int>(h.size()) != spec.q - spec.p)
        throw std::invalid_argument("constraint_violation: expected " +
                                    std::to_string(spec.q - spec.p) + " equality values, got " +
                                    std::to_string(h.size()));
    std::vector<double> per;
    per.reserve(g.size() + h.size());
    double total = 0.0;
    for (double gj : g) {
        if (!std::isfinite(gj)) throw EvaluationError("non-finite inequality constraint value", {});
        const double v = std::max(0.0, gj);
        per.push_back(v);
        total += v;
    }
    for (double hj : h) {
        if (!std::isfinite(hj)) throw EvaluationError("non-finite equality constraint value", {});
        const double v = std::max(0.0, std::abs(hj) - spec.sigma);
        per.push_back(v);
        total += v;
    }
    return {std::move(per), total};
}

// Evaluates a decision vector. Out-of-bounds inputs are repaired by clamping
// before the evaluator runs.
inline Solution evaluate(const ProblemSpec& spec, std::vector<double> x) {
    if (static_cast<int>(x.size()) != spec.n)
        throw std::invalid_argument("evaluate: decision vector has wrong dimension");
    x = clamp_to_bounds(std::move(x), spec.bounds);
    RawEvaluation raw = spec.evaluator(x);
    if (static_cast<int>(raw.objectives.size()) != spec.m)
        throw EvaluationError("evaluator returned wrong number of objectives", x);
    for (double fj : raw.objectives)
        if (!std::isfinite(fj)) throw EvaluationError("non-finite objective value", x);
    Solution s;
    s.x = std::move(x);
    s.f = std::move(raw.objectives);
    try {
        auto [per, total] = constraint_violation(spec, raw.inequality, raw.equality);
        s.cv_per = std::move(per);
        s.cv = total;
    } catch (const EvaluationError& e) {
        throw EvaluationError(e.what(), s.x);
    }
    return s;
}

// Feasibility is an exact zero test on the total violation.
inline bool is_feasible(const Solution& s) { return s.cv == 0.0; }

}  // namespace qevo
