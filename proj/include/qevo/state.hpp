#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qevo/core.hpp"
#include "qevo/indicators.hpp"
#include "qevo/rng.hpp"

namespace qevo {

// Summary of a population used as the learning state. All three components
// are oriented so that smaller is better.
struct PopulationState {
    double con = 0.0;  // average objective sum
    double fea = 0.0;  // average total constraint violation
    double div = 0.0;  // inverse of the summed objective spread

    double sum() const { return con + fea + div; }
    bool operator==(const PopulationState&) const = default;
};

// Objective-space state of a population: con averages the raw (unnormalized)
// objective sums, fea averages the constraint violation, and div inverts the
// summed per-objective spread. A collapsed population would divide by zero,
// so the spread is floored at 1e-12 (capping div at 1e12).
namespace detail {

// Order-independent sum: sorting first makes the reduction bitwise identical
// for any permutation of the inputs.
inline double stable_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

}  // namespace detail

inline PopulationState assess_state(const Population& pop) {
    if (pop.empty()) throw std::invalid_argument("assess_state: empty population");
    const auto n = static_cast<double>(pop.size());
    const std::size_t m = pop.members.front().f.size();
    std::vector<double> objective_sums, violations;
    objective_sums.reserve(pop.size());
    violations.reserve(pop.size());
    std::vector<double> fmin(m, std::numeric_limits<double>::infinity());
    std::vector<double> fmax(m, -std::numeric_limits<double>::infinity());
    for (const auto& sol : pop.members) {
        double fsum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            fsum += sol.f[j];
            fmin[j] = std::min(fmin[j], sol.f[j]);
            fmax[j] = std::max(fmax[j], sol.f[j]);
        }
        objective_sums.push_back(fsum);
        violations.push_back(sol.cv);
    }
    PopulationState s;
    s.con = detail::stable_sum(std::move(objective_sums)) / n;
    s.fea = detail::stable_sum(std::move(violations)) / n;
    double spread = 0.0;
    for (std::size_t j = 0; j < m; ++j) spread += fmax[j] - fmin[j];
    s.div = 1.0 / std::max(spread, 1e-12);
    return s;
}

// Reward = decrease of the state component sum between two generations.
inline double compute_reward(const PopulationState& s, const PopulationState& s_next) {
    return s.sum() - s_next.sum();
}

// One transition: state, chosen operator index, reward, next state. Flattens
// to the 8 columns (con, fea, div, op, r, con', fea', div').
struct Record {
    PopulationState s;
    int op = 1;
    double r = 0.0;
    PopulationState s_next;

    std::array<double, 8> columns() const {
        return {s.con, s.fea, s.div, static_cast<double>(op), r, s_next.con, s_next.fea,
                s_next.div};
    }
};

// Bounded FIFO queue of records. Oldest entries are evicted once the maximum
// size is reached; rs_ep is the fill level required before the first
// training session.
class ExperienceReplay {
public:
    ExperienceReplay(std::size_t max_size, std::size_t required_size)
        : max_size_(max_size), required_size_(required_size) {
        if (max_size_ == 0) throw std::invalid_argument("ExperienceReplay: max size must be > 0");
    }

    void push(Record record) {
        queue_.push_back(std::move(record));
        if (queue_.size() > max_size_) queue_.pop_front();
    }

    // Uniform sample of `count` records without replacement.
    std::vector<Record> sample(std::size_t count, Rng& rng) const {
        if (count > queue_.size())
            throw std::invalid_argument("ExperienceReplay: not enough records to sample");
        std::vector<std::size_t> idx(queue_.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<Record> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const auto pick = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(idx.size()) - 1));
            std::swap(idx[i], idx[pick]);
            out.push_back(queue_[idx[i]]);
        }
        return out;
    }

    std::size_t size() const { return queue_.size(); }
    std::size_t max_size() const { return max_size_; }
    std::size_t required_size() const { return required_size_; }
    bool ready() const { return queue_.size() >= required_size_; }
    const std::deque<Record>& records() const { return queue_; }

private:
    std::deque<Record> queue_;
    std::size_t max_size_;
    std::size_t required_size_;
};

// Indicator-based state assessment (ablation variant): convergence becomes
// 1 - HV/box(0, ref), diversity becomes Schott's spacing, feasibility stays
// the average violation. All components keep the smaller-is-better
// orientation, so the reward definition carries over unchanged. Exact HV
// restricts this assessor to two objectives; objectives are assumed
// nonnegative so the reference box is anchored at the origin.
inline PopulationState indicator_state(const Population& pop, const std::vector<double>& ref_point) {
    if (pop.empty()) throw std::invalid_argument("indicator_state: empty population");
    if (ref_point.size() != 2 || pop.members.front().f.size() != 2)
        throw std::invalid_argument("indicator_state: exact HV requires two objectives");
    std::vector<std::vector<double>> objs;
    objs.reserve(pop.size());
    std::vector<double> violations;
    violations.reserve(pop.size());
    for (const auto& sol : pop.members) {
        objs.push_back(sol.f);
        violations.push_back(sol.cv);
    }
    const double fea = detail::stable_sum(std::move(violations)) / static_cast<double>(pop.size());
    double box = 1.0;
    for (double r : ref_point) box *= std::max(r, 1e-12);
    PopulationState s;
    s.con = 1.0 - hypervolume_2d(objs, ref_point) / box;
    s.fea = fea;
    s.div = spacing(objs);
    return s;
}

}  // namespace qevo
