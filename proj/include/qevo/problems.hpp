#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qevo/core.hpp"
#include "qevo/indicators.hpp"

namespace qevo {

// A set of mutually nondominated feasible objective vectors used as the
// comparison target for quality indicators.
struct ReferenceFront {
    enum class Source { analytic, grid_oracle };
    std::vector<std::vector<double>> points;
    Source source = Source::analytic;
};

// Built-in bi-objective suite on x in [0,1]^n with the shared shape
//   f1 = x1 * (1 + d),  f2 = (1 - x1) * (1 + d),  d = sum_{i>=2} x_i,
// so the unconstrained front is f1 + f2 = 1 at d = 0. Each problem adds one
// constraint pattern:
//   CP1  edge-cut:        f1 >= 0.2            front = {(t,1-t) : t in [0.2,1]}
//   CP2  disconnected:    |f1 - 0.5| >= 0.1    front gap over f1 in (0.4,0.6)
//   CP3  equality:        CP1 plus x2 = x3     front as CP1
//   CP4  boundary-front:  f1 + f2 >= 1.5       front = 1.5*(t,1-t), t in [0,1]
inline ProblemSpec make_problem(const std::string& name, int n) {
    if (n < 2) throw std::invalid_argument("make_problem: n must be >= 2");
    if (name == "CP3" && n < 3) throw std::invalid_argument("make_problem: CP3 needs n >= 3");

    ProblemSpec spec;
    spec.name = name;
    spec.n = n;
    spec.m = 2;
    spec.bounds.assign(n, {0.0, 1.0});
    spec.sigma = 1e-4;
    spec.max_distance = static_cast<double>(n - 1);
    if (name == "CP3") {
        // equal fill keeps the x2 = x3 equality satisfied exactly
        spec.reduced_preimage = [n](double x1, double d) {
            std::vector<double> x(n, d / static_cast<double>(n - 1));
            x[0] = x1;
            return x;
        };
    } else {
        // greedy fill: exact tail sum whenever d itself is representable
        spec.reduced_preimage = [n](double x1, double d) {
            std::vector<double> x(n, 0.0);
            x[0] = x1;
            for (int i = 1; i < n && d > 0.0; ++i) {
                x[i] = std::min(d, 1.0);
                d -= x[i];
            }
            return x;
        };
    }

    auto distance = [](const std::vector<double>& x) {
        double d = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) d += x[i];
        return d;
    };
    auto shape = [](const std::vector<double>& x, double d) {
        return std::vector<double>{x[0] * (1.0 + d), (1.0 - x[0]) * (1.0 + d)};
    };

    if (name == "CP1") {
        spec.p = 1;
        spec.q = 1;
        spec.evaluator = [distance, shape](const std::vector<double>& x) {
            auto f = shape(x, distance(x));
            return RawEvaluation{f, {0.2 - f[0]}, {}};
        };
    } else if (name == "CP2") {
        spec.p = 1;
        spec.q = 1;
        spec.evaluator = [distance, shape](const std::vector<double>& x) {
            auto f = shape(x, distance(x));
            // 0.01 - (f1 - 0.5)^2 in factored form, exact at f1 = 0.4 and 0.6
            return RawEvaluation{f, {(0.4 - f[0]) * (f[0] - 0.6)}, {}};
        };
    } else if (name == "CP3") {
        spec.p = 1;
        spec.q = 2;
        spec.evaluator = [distance, shape](const std::vector<double>& x) {
            auto f = shape(x, distance(x));
            return RawEvaluation{f, {0.2 - f[0]}, {x[1] - x[2]}};
        };
    } else if (name == "CP4") {
        spec.p = 1;
        spec.q = 1;
        spec.evaluator = [distance, shape](const std::vector<double>& x) {
            const double d = distance(x);
            auto f = shape(x, d);
            // 1.5 - (f1 + f2) with the algebraic identity f1 + f2 = 1 + d,
            // exact at the d = 0.5 front
            return RawEvaluation{f, {0.5 - d}, {}};
        };
    } else {
        throw std::invalid_argument("make_problem: unknown problem '" + name + "'");
    }
    spec.validate();
    return spec;
}

inline const std::vector<std::string>& builtin_problem_names() {
    static const std::vector<std::string> names = {"CP1", "CP2", "CP3", "CP4"};
    return names;
}

// Closed-form constrained Pareto front, sampled uniformly in the front
// parameter t. Only defined for the built-in suite.
inline ReferenceFront analytic_front(const ProblemSpec& spec, int resolution) {
    if (resolution < 2) throw std::invalid_argument("analytic_front: resolution must be >= 2");
    ReferenceFront front;
    front.source = ReferenceFront::Source::analytic;
    front.points.reserve(static_cast<std::size_t>(resolution));
    const double step = 1.0 / static_cast<double>(resolution - 1);
    if (spec.name == "CP1" || spec.name == "CP3") {
        for (int i = 0; i < resolution; ++i) {
            const double t = 0.2 + 0.8 * (static_cast<double>(i) * step);
            front.points.push_back({t, 1.0 - t});
        }
    } else if (spec.name == "CP2") {
        // two segments, t in [0,0.4] and [0.6,1]; walk the total arc length
        for (int i = 0; i < resolution; ++i) {
            const double u = 0.8 * (static_cast<double>(i) * step);
            const double t = (u <= 0.4) ? u : u + 0.2;
            front.points.push_back({t, 1.0 - t});
        }
    } else if (spec.name == "CP4") {
        for (int i = 0; i < resolution; ++i) {
            const double t = static_cast<double>(i) * step;
            front.points.push_back({1.5 * t, 1.5 * (1.0 - t)});
        }
    } else {
        throw std::invalid_argument("analytic_front: no analytic front for '" + spec.name + "'");
    }
    return front;
}

// Reference front by exhaustive grid enumeration: evaluate a grid, keep the
// feasible solutions, and filter their objective vectors to the nondominated
// set. Problems declaring a reduced preimage are enumerated over (x1, d)
// only; otherwise the full n-dimensional grid is walked, subject to a budget.
inline ReferenceFront grid_oracle_front(const ProblemSpec& spec, int points_per_dim,
                                        std::size_t budget = 20'000'000) {
    if (points_per_dim < 2)
        throw std::invalid_argument("grid_oracle_front: points_per_dim must be >= 2");
    std::vector<std::vector<double>> feasible;
    const double step = 1.0 / static_cast<double>(points_per_dim - 1);

    if (spec.reduced_preimage) {
        for (int i = 0; i < points_per_dim; ++i) {
            const double x1 = spec.bounds[0].first +
                              (spec.bounds[0].second - spec.bounds[0].first) * i * step;
            for (int j = 0; j < points_per_dim; ++j) {
                const double d = spec.max_distance * j * step;
                Solution s = evaluate(spec, spec.reduced_preimage(x1, d));
                if (is_feasible(s)) feasible.push_back(s.f);
            }
        }
    } else {
        double total = 1.0;
        for (int i = 0; i < spec.n; ++i) total *= static_cast<double>(points_per_dim);
        if (total > static_cast<double>(budget))
            throw std::runtime_error("grid_oracle_front: grid budget exceeded");
        std::vector<int> idx(spec.n, 0);
        std::vector<double> x(spec.n);
        while (true) {
            for (int i = 0; i < spec.n; ++i)
                x[i] = spec.bounds[i].first +
                       (spec.bounds[i].second - spec.bounds[i].first) * idx[i] * step;
            Solution s = evaluate(spec, x);
            if (is_feasible(s)) feasible.push_back(s.f);
            int carry = spec.n - 1;
            while (carry >= 0 && ++idx[carry] == points_per_dim) idx[carry--] = 0;
            if (carry < 0) break;
        }
    }

    ReferenceFront front;
    front.source = ReferenceFront::Source::grid_oracle;
    front.points = nondominated_subset(std::move(feasible));
    return front;
}

}  // namespace qevo
