#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qevo/rng.hpp"
#include "qevo/state.hpp"

namespace qevo {

// Value network mapping a normalized (state, action) 4-vector to a scalar
// Q-value: two ReLU hidden layers of 40 units and a linear output. Hidden
// biases start at 0.1, the output bias at 0. Dimensions are kept flexible so
// tests can build tiny hand-checkable nets.
struct QNetwork {
    int in = 4;
    int h1 = 40;
    int h2 = 40;
    std::vector<double> w1, b1;  // h1 x in, h1
    std::vector<double> w2, b2;  // h2 x h1, h2
    std::vector<double> w3;      // h2
    double b3 = 0.0;

    QNetwork() = default;
    QNetwork(int in_dim, int hidden1, int hidden2) : in(in_dim), h1(hidden1), h2(hidden2) {
        w1.assign(static_cast<std::size_t>(h1) * in, 0.0);
        b1.assign(h1, 0.1);
        w2.assign(static_cast<std::size_t>(h2) * h1, 0.0);
        b2.assign(h2, 0.1);
        w3.assign(h2, 0.0);
        b3 = 0.0;
    }

    std::size_t parameter_count() const {
        return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + 1;
    }
};

// Weights uniform in [-0.5, 0.5] scaled by 1/sqrt(fan_in); biases fixed at
// 0.1 (hidden) and 0 (output).
inline QNetwork init_network(Rng& rng, int in_dim = 4, int hidden1 = 40, int hidden2 = 40) {
    QNetwork net(in_dim, hidden1, hidden2);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden1));
    const double s3 = 1.0 / std::sqrt(static_cast<double>(hidden2));
    for (auto& w : net.w1) w = rng.uniform(-0.5, 0.5) * s1;
    for (auto& w : net.w2) w = rng.uniform(-0.5, 0.5) * s2;
    for (auto& w : net.w3) w = rng.uniform(-0.5, 0.5) * s3;
    return net;
}

namespace detail {

// Forward pass keeping pre-activations for backprop and kink detection.
struct ForwardTrace {
    std::vector<double> z1, a1, z2, a2;
    double q = 0.0;
};

inline ForwardTrace forward_trace(const QNetwork& net, const std::vector<double>& input) {
    ForwardTrace t;
    t.z1.resize(net.h1);
    t.a1.resize(net.h1);
    t.z2.resize(net.h2);
    t.a2.resize(net.h2);
    for (int i = 0; i < net.h1; ++i) {
        double z = net.b1[i];
        const double* row = net.w1.data() + static_cast<std::size_t>(i) * net.in;
        for (int j = 0; j < net.in; ++j) z += row[j] * input[j];
        t.z1[i] = z;
        t.a1[i] = z > 0.0 ? z : 0.0;
    }
    for (int i = 0; i < net.h2; ++i) {
        double z = net.b2[i];
        const double* row = net.w2.data() + static_cast<std::size_t>(i) * net.h1;
        for (int j = 0; j < net.h1; ++j) z += row[j] * t.a1[j];
        t.z2[i] = z;
        t.a2[i] = z > 0.0 ? z : 0.0;
    }
    double q = net.b3;
    for (int i = 0; i < net.h2; ++i) q += net.w3[i] * t.a2[i];
    t.q = q;
    return t;
}

}  // namespace detail

inline double forward(const QNetwork& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.in)
        throw std::invalid_argument("forward: input dimension mismatch");
    return detail::forward_trace(net, input).q;
}

// Q(s, a): the 3-component normalized state and the scalar action encoding
// concatenated into the 4-vector input.
inline double forward(const QNetwork& net, const std::array<double, 3>& s_norm, double a_norm) {
    return forward(net, std::vector<double>{s_norm[0], s_norm[1], s_norm[2], a_norm});
}

// Column-wise min/max of the 8 record columns (con, fea, div, op, r, con',
// fea', div'). The operator column is pinned to [1, k] so the action encoding
// (index-1)/(k-1) stays identical between training and prediction.
struct NormStats {
    std::array<double, 8> mn{};
    std::array<double, 8> mx{};

    static NormStats from_records(const std::vector<Record>& records, int action_count) {
        if (records.empty()) throw std::invalid_argument("NormStats: no records");
        NormStats stats;
        stats.mn.fill(std::numeric_limits<double>::infinity());
        stats.mx.fill(-std::numeric_limits<double>::infinity());
        for (const auto& rec : records) {
            const auto cols = rec.columns();
            for (std::size_t c = 0; c < 8; ++c) {
                stats.mn[c] = std::min(stats.mn[c], cols[c]);
                stats.mx[c] = std::max(stats.mx[c], cols[c]);
            }
        }
        stats.mn[3] = 1.0;
        stats.mx[3] = static_cast<double>(action_count);
        return stats;
    }

    // Degenerate columns (max == min) map to the constant 0.5.
    double normalize(std::size_t col, double v) const {
        const double range = mx[col] - mn[col];
        if (range == 0.0) return 0.5;
        return (v - mn[col]) / range;
    }

    double denormalize(std::size_t col, double v) const {
        const double range = mx[col] - mn[col];
        if (range == 0.0) return mn[col];
        return mn[col] + v * range;
    }

    double encode_action(int index) const { return normalize(3, static_cast<double>(index)); }

    // Prediction-time state normalization, clamped to [0,1] since live states
    // can drift outside the training ranges.
    std::array<double, 3> normalize_state_clamped(const PopulationState& s) const {
        auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
        return {clamp01(normalize(0, s.con)), clamp01(normalize(1, s.fea)),
                clamp01(normalize(2, s.div))};
    }
};

// Min-max normalized training data: network inputs (s, a), rewards, and next
// states, each column scaled by its own statistics.
struct TrainingBatch {
    std::vector<std::array<double, 4>> inputs;
    std::vector<double> rewards;
    std::vector<std::array<double, 3>> next_states;

    std::size_t size() const { return inputs.size(); }
};

inline TrainingBatch make_training_batch(const std::vector<Record>& records,
                                         const NormStats& stats) {
    TrainingBatch batch;
    batch.inputs.reserve(records.size());
    batch.rewards.reserve(records.size());
    batch.next_states.reserve(records.size());
    for (const auto& rec : records) {
        const auto cols = rec.columns();
        batch.inputs.push_back({stats.normalize(0, cols[0]), stats.normalize(1, cols[1]),
                                stats.normalize(2, cols[2]), stats.normalize(3, cols[3])});
        batch.rewards.push_back(stats.normalize(4, cols[4]));
        batch.next_states.push_back(
            {stats.normalize(5, cols[5]), stats.normalize(6, cols[6]), stats.normalize(7, cols[7])});
    }
    return batch;
}

// Q-learning targets q_t = r_t + gamma * max_a' Q(s_{t+1}, a'), evaluated
// once against the pre-session network snapshot. The max runs over the k
// action encodings.
inline std::vector<double> compute_targets(const QNetwork& net, const TrainingBatch& batch,
                                           const NormStats& stats, double gamma, int action_count) {
    std::vector<double> targets;
    targets.reserve(batch.size());
    std::vector<double> input(4);
    for (std::size_t t = 0; t < batch.size(); ++t) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 1; a <= action_count; ++a) {
            input[0] = batch.next_states[t][0];
            input[1] = batch.next_states[t][1];
            input[2] = batch.next_states[t][2];
            input[3] = stats.encode_action(a);
            best = std::max(best, forward(net, input));
        }
        targets.push_back(batch.rewards[t] + gamma * best);
    }
    return targets;
}

// Mean squared error of the network outputs against fixed targets.
inline double batch_loss(const QNetwork& net, const TrainingBatch& batch,
                         const std::vector<double>& targets) {
    double loss = 0.0;
    std::vector<double> input(4);
    for (std::size_t t = 0; t < batch.size(); ++t) {
        input.assign(batch.inputs[t].begin(), batch.inputs[t].end());
        const double e = forward(net, input) - targets[t];
        loss += e * e;
    }
    return loss / static_cast<double>(batch.size());
}

struct TrainHyper {
    double lr0 = 0.01;      // initial learning rate
    double decay = 1e-4;    // inverse-time decay: lr_t = lr0 / (1 + decay*t)
    int max_iters = 80000;  // gradient-descent iterations per session
    double gamma = 0.9;     // discount factor

    void validate() const {
        if (!(lr0 > 0)) throw std::invalid_argument("TrainHyper: lr0 must be > 0");
        if (decay < 0) throw std::invalid_argument("TrainHyper: decay must be >= 0");
        if (max_iters < 1) throw std::invalid_argument("TrainHyper: max_iters must be >= 1");
        if (gamma < 0.0 || gamma >= 1.0)
            throw std::invalid_argument("TrainHyper: gamma must lie in [0, 1)");
    }
};

namespace detail {

struct Gradients {
    std::vector<double> w1, b1, w2, b2, w3;
    double b3 = 0.0;

    explicit Gradients(const QNetwork& net)
        : w1(net.w1.size(), 0.0),
          b1(net.b1.size(), 0.0),
          w2(net.w2.size(), 0.0),
          b2(net.b2.size(), 0.0),
          w3(net.w3.size(), 0.0) {}
};

// Accumulates the gradient of (q - target)^2 * weight into g.
inline void accumulate_sample_gradient(const QNetwork& net, const ForwardTrace& t,
                                       const std::vector<double>& input, double target,
                                       double weight, Gradients& g) {
    const double dq = 2.0 * (t.q - target) * weight;
    g.b3 += dq;
    std::vector<double> da2(net.h2);
    for (int i = 0; i < net.h2; ++i) {
        g.w3[i] += dq * t.a2[i];
        da2[i] = dq * net.w3[i];
    }
    std::vector<double> da1(net.h1, 0.0);
    for (int i = 0; i < net.h2; ++i) {
        if (t.z2[i] <= 0.0) continue;
        const double dz = da2[i];
        g.b2[i] += dz;
        double* grow = g.w2.data() + static_cast<std::size_t>(i) * net.h1;
        const double* wrow = net.w2.data() + static_cast<std::size_t>(i) * net.h1;
        for (int j = 0; j < net.h1; ++j) {
            grow[j] += dz * t.a1[j];
            da1[j] += dz * wrow[j];
        }
    }
    for (int i = 0; i < net.h1; ++i) {
        if (t.z1[i] <= 0.0) continue;
        const double dz = da1[i];
        g.b1[i] += dz;
        double* grow = g.w1.data() + static_cast<std::size_t>(i) * net.in;
        for (int j = 0; j < net.in; ++j) grow[j] += dz * input[j];
    }
}

inline void apply_step(QNetwork& net, const Gradients& g, double lr) {
    for (std::size_t i = 0; i < net.w1.size(); ++i) net.w1[i] -= lr * g.w1[i];
    for (std::size_t i = 0; i < net.b1.size(); ++i) net.b1[i] -= lr * g.b1[i];
    for (std::size_t i = 0; i < net.w2.size(); ++i) net.w2[i] -= lr * g.w2[i];
    for (std::size_t i = 0; i < net.b2.size(); ++i) net.b2[i] -= lr * g.b2[i];
    for (std::size_t i = 0; i < net.w3.size(); ++i) net.w3[i] -= lr * g.w3[i];
    net.b3 -= lr * g.b3;
}

}  // namespace detail

struct TrainResult {
    QNetwork net;
    NormStats norm;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

// One training session: min-max normalize the sampled records, compute the
// targets from the incoming network snapshot, then run full-batch gradient
// descent on the squared error with lr_t = lr0 / (1 + decay*t).
inline TrainResult train_session(QNetwork net, const std::vector<Record>& records,
                                 int action_count, const TrainHyper& hyper) {
    hyper.validate();
    if (records.empty()) throw std::invalid_argument("train_session: no records");
    const NormStats stats = NormStats::from_records(records, action_count);
    const TrainingBatch batch = make_training_batch(records, stats);
    const std::vector<double> targets = compute_targets(net, batch, stats, hyper.gamma, action_count);

    TrainResult result;
    result.norm = stats;
    result.initial_loss = batch_loss(net, batch, targets);

    const double inv_b = 1.0 / static_cast<double>(batch.size());
    std::vector<double> input(4);
    for (int iter = 0; iter < hyper.max_iters; ++iter) {
        const double lr = hyper.lr0 / (1.0 + hyper.decay * static_cast<double>(iter));
        detail::Gradients grads(net);
        for (std::size_t t = 0; t < batch.size(); ++t) {
            input.assign(batch.inputs[t].begin(), batch.inputs[t].end());
            const auto trace = detail::forward_trace(net, input);
            detail::accumulate_sample_gradient(net, trace, input, targets[t], inv_b, grads);
        }
        detail::apply_step(net, grads, lr);
    }

    result.final_loss = batch_loss(net, batch, targets);
    result.net = std::move(net);
    return result;
}

// Compares the analytic gradient of (q - target)^2 against central finite
// differences over every parameter and returns the largest relative error.
// Parameters whose perturbation flips a ReLU pre-activation sign are skipped;
// the finite difference straddles the kink there and measures nothing.
inline double gradient_check(const QNetwork& net, const std::vector<double>& input, double target,
                             double h = 1e-5) {
    if (static_cast<int>(input.size()) != net.in)
        throw std::invalid_argument("gradient_check: input dimension mismatch");
    detail::Gradients analytic(net);
    const auto trace = detail::forward_trace(net, input);
    detail::accumulate_sample_gradient(net, trace, input, target, 1.0, analytic);

    QNetwork work = net;
    auto loss_at = [&](std::vector<bool>* signs) {
        const auto t = detail::forward_trace(work, input);
        if (signs) {
            signs->clear();
            for (double z : t.z1) signs->push_back(z > 0.0);
            for (double z : t.z2) signs->push_back(z > 0.0);
        }
        const double e = t.q - target;
        return e * e;
    };

    double max_rel = 0.0;
    std::vector<bool> signs_plus, signs_minus;
    auto check_param = [&](double* p, double analytic_grad) {
        const double saved = *p;
        *p = saved + h;
        const double lp = loss_at(&signs_plus);
        *p = saved - h;
        const double lm = loss_at(&signs_minus);
        *p = saved;
        if (signs_plus != signs_minus) return;  // crossed a ReLU kink
        const double numeric = (lp - lm) / (2.0 * h);
        const double denom = std::max({std::abs(analytic_grad), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, std::abs(analytic_grad - numeric) / denom);
    };

    for (std::size_t i = 0; i < work.w1.size(); ++i) check_param(&work.w1[i], analytic.w1[i]);
    for (std::size_t i = 0; i < work.b1.size(); ++i) check_param(&work.b1[i], analytic.b1[i]);
    for (std::size_t i = 0; i < work.w2.size(); ++i) check_param(&work.w2[i], analytic.w2[i]);
    for (std::size_t i = 0; i < work.b2.size(); ++i) check_param(&work.b2[i], analytic.b2[i]);
    for (std::size_t i = 0; i < work.w3.size(); ++i) check_param(&work.w3[i], analytic.w3[i]);
    check_param(&work.b3, analytic.b3);
    return max_rel;
}

// Debug dump: one layer per block, row-major, 9 significant digits.
inline void dump_weights(const QNetwork& net, std::ostream& os) {
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        os << buf;
    };
    auto block = [&](const char* name, const std::vector<double>& vals, int cols) {
        os << "# " << name << "\n";
        for (std::size_t i = 0; i < vals.size(); ++i) {
            emit(vals[i]);
            os << (((i + 1) % static_cast<std::size_t>(cols) == 0) ? '\n' : ' ');
        }
        if (vals.size() % static_cast<std::size_t>(cols) != 0) os << '\n';
    };
    block("w1", net.w1, net.in);
    block("b1", net.b1, net.h1);
    block("w2", net.w2, net.h1);
    block("b2", net.b2, net.h2);
    block("w3", net.w3, net.h2);
    os << "# b3\n";
    emit(net.b3);
    os << '\n';
}

}  // namespace qevo
