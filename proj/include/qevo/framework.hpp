#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qevo/core.hpp"
#include "qevo/host.hpp"
#include "qevo/indicators.hpp"
#include "qevo/operators.hpp"
#include "qevo/qnet.hpp"
#include "qevo/rng.hpp"
#include "qevo/state.hpp"

namespace qevo {

enum class PolicyMode { Drl, Random, Fixed };

// How the operator is chosen each generation: learned (epsilon-greedy on the
// Q-network), uniform random, or a fixed operator.
struct SelectionPolicy {
    PolicyMode mode = PolicyMode::Drl;
    double epsilon = 0.9;  // probability of the greedy branch
    std::vector<OperatorId> actions = default_action_set();
    OperatorId fixed_op = {1, OperatorId::Label::GA};

    void validate() const {
        if (epsilon < 0.0 || epsilon > 1.0)
            throw std::invalid_argument("SelectionPolicy: epsilon must lie in [0,1]");
        if (actions.empty()) throw std::invalid_argument("SelectionPolicy: empty action set");
        if (mode == PolicyMode::Fixed &&
            (fixed_op.index < 1 || fixed_op.index > static_cast<int>(actions.size())))
            throw std::invalid_argument("SelectionPolicy: fixed operator outside the action set");
    }
};

enum class StateAssessor { Objective, Indicator };

struct RunConfig {
    int population_size = 40;
    int generations = 200;
    std::uint64_t seed = 1;
    SelectionPolicy policy;
    TrainHyper hyper;
    std::size_t ms_ep = 1000;     // replay capacity
    std::size_t rs_ep = 50;       // replay fill level required before training
    std::size_t s_tr = 100;       // records sampled per training session
    int update_period = 50;       // generations between retraining sessions
    OperatorParams op_params;     // pm should be set to 1/n by the caller
    StateAssessor assessor = StateAssessor::Objective;
    std::vector<double> indicator_ref = {1.1, 1.1};  // HV reference for the ablation assessor

    void validate() const {
        if (population_size < 4) throw std::invalid_argument("RunConfig: population size must be >= 4");
        if (generations < 1) throw std::invalid_argument("RunConfig: generations must be >= 1");
        if (update_period < 1) throw std::invalid_argument("RunConfig: update period must be >= 1");
        if (ms_ep == 0 || rs_ep == 0 || s_tr == 0)
            throw std::invalid_argument("RunConfig: replay sizes must be positive");
        policy.validate();
        hyper.validate();
        op_params.validate();
    }
};

struct TraceRow {
    int gen = 0;
    PopulationState s;      // state the selection saw
    int op = 0;             // selected operator index
    double reward = 0.0;
    PopulationState s_next; // state after environmental selection
    double igd_plus = std::numeric_limits<double>::quiet_NaN();
    double hv = std::numeric_limits<double>::quiet_NaN();
};

struct RunResult {
    Population final_population;
    std::vector<TraceRow> trace;
    std::vector<int> operator_usage;  // indexed by operator index - 1
    int training_sessions = 0;
    std::size_t final_replay_size = 0;
};

// Reference data for the per-generation indicator columns: the front to
// measure IGD+ against and the ideal/nadir scaling plus reference point for
// the reported hypervolume.
struct IndicatorContext {
    std::vector<std::vector<double>> reference;
    std::vector<double> ideal;
    std::vector<double> nadir;
    std::vector<double> ref_point;

    static IndicatorContext from_front(const std::vector<std::vector<double>>& front,
                                       double ref_coord = 1.1) {
        if (front.empty()) throw std::invalid_argument("IndicatorContext: empty front");
        const std::size_t m = front.front().size();
        IndicatorContext ctx;
        ctx.reference = front;
        ctx.ideal.assign(m, std::numeric_limits<double>::infinity());
        ctx.nadir.assign(m, -std::numeric_limits<double>::infinity());
        for (const auto& pt : front)
            for (std::size_t j = 0; j < m; ++j) {
                ctx.ideal[j] = std::min(ctx.ideal[j], pt[j]);
                ctx.nadir[j] = std::max(ctx.nadir[j], pt[j]);
            }
        ctx.ref_point.assign(m, ref_coord);
        return ctx;
    }
};

inline bool should_update_network(int gen, int update_period) {
    return gen % update_period == 0;
}

struct SelectionDecision {
    OperatorId op;
    bool greedy = false;
};

// Operator selection. Fixed returns its operator; Random and an untrained
// DRL policy pick uniformly; a trained DRL policy takes the Q-argmax with
// probability epsilon (ties to the lowest index) and explores uniformly
// otherwise.
inline SelectionDecision select_operator_detail(const QNetwork* net, const NormStats* norm,
                                                const PopulationState& s,
                                                const SelectionPolicy& policy, Rng& rng) {
    policy.validate();
    if (policy.mode == PolicyMode::Fixed) return {policy.fixed_op, false};
    const auto k = static_cast<std::int64_t>(policy.actions.size());
    if (policy.mode == PolicyMode::Drl && net != nullptr && norm != nullptr) {
        const double u = rng.uniform01();
        if (u <= policy.epsilon) {
            const auto s_norm = norm->normalize_state_clamped(s);
            std::size_t best = 0;
            double best_q = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < policy.actions.size(); ++i) {
                const double q =
                    forward(*net, s_norm, norm->encode_action(policy.actions[i].index));
                if (q > best_q) {
                    best_q = q;
                    best = i;
                }
            }
            return {policy.actions[best], true};
        }
    }
    return {policy.actions[static_cast<std::size_t>(rng.uniform_int(0, k - 1))], false};
}

inline OperatorId select_operator(const QNetwork* net, const NormStats* norm,
                                  const PopulationState& s, const SelectionPolicy& policy,
                                  Rng& rng) {
    return select_operator_detail(net, norm, s, policy, rng).op;
}

namespace detail {

inline std::pair<double, double> trace_indicators(const Population& pop,
                                                  const IndicatorContext* ctx) {
    if (ctx == nullptr)
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    std::vector<std::vector<double>> feasible;
    for (const auto& sol : pop.members)
        if (is_feasible(sol)) feasible.push_back(sol.f);
    auto front = nondominated_subset(std::move(feasible));
    if (front.empty()) return {100.0, 0.0};  // no-feasible sentinel
    const double igd = igd_plus(front, ctx->reference);
    for (auto& pt : front)
        for (std::size_t j = 0; j < pt.size(); ++j) {
            const double span = std::max(ctx->nadir[j] - ctx->ideal[j], 1e-12);
            pt[j] = (pt[j] - ctx->ideal[j]) / span;
        }
    return {igd, hypervolume_2d(front, ctx->ref_point)};
}

}  // namespace detail

// One full run of the selection framework around a host CMOEA. Per
// generation: select an operator for the current state, draw a mating pool
// from the host, generate and evaluate offspring, let the host select
// survivors, then record the state transition and reward. A DRL policy
// trains its network once the replay holds rs_ep records and retrains every
// update_period generations.
inline RunResult run(HostCmoea& host, const ProblemSpec& spec, const RunConfig& cfg,
                     const IndicatorContext* ctx = nullptr) {
    cfg.validate();
    spec.validate();
    Rng rng(cfg.seed);
    host.initialize(spec, cfg.population_size, rng);

    const auto assess = [&](const Population& pop) {
        return cfg.assessor == StateAssessor::Objective ? assess_state(pop)
                                                        : indicator_state(pop, cfg.indicator_ref);
    };

    const auto action_count = static_cast<int>(cfg.policy.actions.size());
    ExperienceReplay replay(cfg.ms_ep, cfg.rs_ep);
    std::optional<QNetwork> net;
    std::optional<NormStats> norm;
    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(cfg.generations));
    result.operator_usage.assign(cfg.policy.actions.size(), 0);

    const auto train_now = [&]() {
        const std::size_t count = std::min(cfg.s_tr, replay.size());
        auto session = train_session(*net, replay.sample(count, rng), action_count, cfg.hyper);
        net = std::move(session.net);
        norm = session.norm;
        ++result.training_sessions;
    };

    PopulationState s_prev = assess(host.reporting_population());
    for (int gen = 1; gen <= cfg.generations; ++gen) {
        if (cfg.policy.mode == PolicyMode::Drl && !net.has_value() && replay.ready()) {
            net = init_network(rng);
            train_now();
        }
        const auto decision = select_operator_detail(net ? &*net : nullptr, norm ? &*norm : nullptr,
                                                     s_prev, cfg.policy, rng);
        const auto pool = host.mating_selection(cfg.population_size, rng);
        const auto offspring_x = generate_offspring(decision.op, pool, spec, cfg.op_params, rng);
        std::vector<Solution> offspring;
        offspring.reserve(offspring_x.size());
        for (const auto& x : offspring_x) offspring.push_back(evaluate(spec, x));
        host.environmental_selection(offspring);

        const PopulationState s_new = assess(host.reporting_population());
        const double reward = compute_reward(s_prev, s_new);
        replay.push({s_prev, decision.op.index, reward, s_new});

        const auto [igd, hv] = detail::trace_indicators(host.reporting_population(), ctx);
        result.trace.push_back({gen, s_prev, decision.op.index, reward, s_new, igd, hv});
        ++result.operator_usage[static_cast<std::size_t>(decision.op.index - 1)];
        s_prev = s_new;

        if (cfg.policy.mode == PolicyMode::Drl && net.has_value() &&
            should_update_network(gen, cfg.update_period))
            train_now();
    }
    result.final_population = host.reporting_population();
    result.final_replay_size = replay.size();
    return result;
}

}  // namespace qevo
