#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qevo/core.hpp"
#include "qevo/indicators.hpp"
#include "qevo/rng.hpp"

namespace qevo {

enum class Dominance { First, Second, None };

// Constrained-dominance principle: feasible beats infeasible, less violation
// beats more, and Pareto dominance decides between feasible solutions.
inline Dominance cdp_compare(const Solution& s1, const Solution& s2) {
    const bool f1 = s1.cv == 0.0;
    const bool f2 = s2.cv == 0.0;
    if (f1 && !f2) return Dominance::First;
    if (!f1 && f2) return Dominance::Second;
    if (!f1 && !f2) {
        if (s1.cv < s2.cv) return Dominance::First;
        if (s2.cv < s1.cv) return Dominance::Second;
        return Dominance::None;
    }
    if (dominates(s1.f, s2.f)) return Dominance::First;
    if (dominates(s2.f, s1.f)) return Dominance::Second;
    return Dominance::None;
}

// Fast nondominated sort (Deb et al. 2002) under cdp_compare. Returns fronts
// as index sets, best front first; every member lands in exactly one front.
inline std::vector<std::vector<std::size_t>> nondominated_sort(const Population& pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            switch (cdp_compare(pop.members[i], pop.members[j])) {
                case Dominance::First:
                    dominated[i].push_back(j);
                    ++count[j];
                    break;
                case Dominance::Second:
                    dominated[j].push_back(i);
                    ++count[i];
                    break;
                case Dominance::None:
                    break;
            }
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        current = std::move(next);
    }
    return fronts;
}

// Crowding distance of a front given its objective vectors. Boundary points
// get infinity; interior points sum the normalized neighbor gaps per
// objective.
inline std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front) {
    if (front.empty()) throw std::invalid_argument("crowding_distance: empty front");
    const std::size_t n = front.size();
    const std::size_t m = front.front().size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < m; ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][j] < front[b][j]; });
        const double span = front[order.back()][j] - front[order.front()][j];
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        if (span <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (front[order[k + 1]][j] - front[order[k - 1]][j]) / span;
    }
    return dist;
}

// NSGA-II style survival: rank the union, fill whole fronts, and break the
// last front by descending crowding distance (stable, so ties keep their
// union order).
inline Population environmental_selection(const Population& pop,
                                          const std::vector<Solution>& offspring, int capacity) {
    const auto n = static_cast<std::size_t>(capacity);
    Population unioned;
    unioned.capacity = capacity;
    unioned.members = pop.members;
    unioned.members.insert(unioned.members.end(), offspring.begin(), offspring.end());
    if (unioned.size() < n)
        throw std::invalid_argument("environmental_selection: fewer candidates than capacity");

    Population next;
    next.capacity = capacity;
    next.members.reserve(n);
    for (const auto& front : nondominated_sort(unioned)) {
        if (next.size() + front.size() <= n) {
            for (std::size_t i : front) next.members.push_back(unioned.members[i]);
            if (next.size() == n) break;
            continue;
        }
        std::vector<std::vector<double>> objs;
        objs.reserve(front.size());
        for (std::size_t i : front) objs.push_back(unioned.members[i].f);
        const auto dist = crowding_distance(objs);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        for (std::size_t k = 0; next.size() < n; ++k)
            next.members.push_back(unioned.members[front[order[k]]]);
        break;
    }
    return next;
}

namespace detail {

// Front rank and crowding distance per member, the sort keys for tournaments.
struct RankedPopulation {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;

    explicit RankedPopulation(const Population& pop)
        : rank(pop.size(), 0), crowding(pop.size(), 0.0) {
        const auto fronts = nondominated_sort(pop);
        for (std::size_t r = 0; r < fronts.size(); ++r) {
            const auto& front = fronts[r];
            std::vector<std::vector<double>> objs;
            objs.reserve(front.size());
            for (std::size_t i : front) objs.push_back(pop.members[i].f);
            const auto dist = crowding_distance(objs);
            for (std::size_t k = 0; k < front.size(); ++k) {
                rank[front[k]] = r;
                crowding[front[k]] = dist[k];
            }
        }
    }

    // true when a is strictly the better tournament entrant
    bool better(std::size_t a, std::size_t b) const {
        if (rank[a] != rank[b]) return rank[a] < rank[b];
        return crowding[a] > crowding[b];
    }
};

}  // namespace detail

// Binary tournaments on (front rank, crowding distance); ties keep the first
// entrant drawn.
inline std::vector<Solution> mating_selection(const Population& pop, int count, Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("mating_selection: empty population");
    const detail::RankedPopulation ranked(pop);
    const auto last = static_cast<std::int64_t>(pop.size()) - 1;
    std::vector<Solution> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const auto a = static_cast<std::size_t>(rng.uniform_int(0, last));
        const auto b = static_cast<std::size_t>(rng.uniform_int(0, last));
        pool.push_back(pop.members[ranked.better(b, a) ? b : a]);
    }
    return pool;
}

// Host algorithm hooks the selection framework drives: initialization,
// mating selection, environmental selection, and the population reported for
// state assessment (multi-population hosts pick one).
class HostCmoea {
public:
    virtual ~HostCmoea() = default;
    virtual void initialize(const ProblemSpec& spec, int capacity, Rng& rng) = 0;
    virtual std::vector<Solution> mating_selection(int count, Rng& rng) = 0;
    virtual void environmental_selection(const std::vector<Solution>& offspring) = 0;
    virtual const Population& reporting_population() const = 0;
};

// Reference host: NSGA-II with the constrained-dominance principle as its
// constraint-handling technique.
class CdpNsga2 : public HostCmoea {
public:
    void initialize(const ProblemSpec& spec, int capacity, Rng& rng) override {
        pop_.members.clear();
        pop_.capacity = capacity;
        pop_.members.reserve(static_cast<std::size_t>(capacity));
        std::vector<double> x(spec.n);
        for (int i = 0; i < capacity; ++i) {
            for (int j = 0; j < spec.n; ++j)
                x[j] = rng.uniform(spec.bounds[j].first, spec.bounds[j].second);
            pop_.members.push_back(evaluate(spec, x));
        }
    }

    std::vector<Solution> mating_selection(int count, Rng& rng) override {
        return qevo::mating_selection(pop_, count, rng);
    }

    void environmental_selection(const std::vector<Solution>& offspring) override {
        pop_ = qevo::environmental_selection(pop_, offspring, pop_.capacity);
    }

    const Population& reporting_population() const override { return pop_; }

private:
    Population pop_;
};

}  // namespace qevo
