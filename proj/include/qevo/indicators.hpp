#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qevo/rng.hpp"

namespace qevo {

// a weakly dominates b (minimization): a <= b in every objective, < in one.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strictly = true;
    }
    return strictly;
}

// Nondominated subset of a point set, duplicates removed. Input order does
// not affect the result: points are sorted lexicographically first.
inline std::vector<std::vector<double>> nondominated_subset(std::vector<std::vector<double>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<std::vector<double>> out;
    for (const auto& cand : pts) {
        bool dominated = false;
        for (const auto& other : pts) {
            if (dominates(other, cand)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(cand);
    }
    return out;
}

// IGD+ (Ishibuchi et al.): mean over reference points of the dominance-
// clamped distance d+(a, r) = sqrt(sum_j max(a_j - r_j, 0)^2) to the nearest
// approximation point. Lower is better; 0 means every reference point is
// weakly dominated.
inline double igd_plus(const std::vector<std::vector<double>>& approx,
                       const std::vector<std::vector<double>>& reference) {
    if (approx.empty() || reference.empty())
        throw std::invalid_argument("igd_plus: empty input set");
    const std::size_t m = reference.front().size();
    double sum = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approx) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double diff = std::max(a[j] - r[j], 0.0);
                d2 += diff * diff;
            }
            best = std::min(best, d2);
        }
        sum += std::sqrt(best);
    }
    return sum / static_cast<double>(reference.size());
}

// Exact 2-D hypervolume by dimension sweep. Only points strictly inside the
// reference box contribute; an empty contributing set gives 0.
inline double hypervolume_2d(const std::vector<std::vector<double>>& points,
                             const std::vector<double>& ref_point) {
    if (ref_point.size() != 2)
        throw std::invalid_argument("hypervolume_2d: reference point must be 2-D");
    std::vector<std::pair<double, double>> inside;
    for (const auto& pt : points)
        if (pt[0] < ref_point[0] && pt[1] < ref_point[1]) inside.emplace_back(pt[0], pt[1]);
    if (inside.empty()) return 0.0;
    std::sort(inside.begin(), inside.end());
    double volume = 0.0;
    double prev_f2 = ref_point[1];
    for (const auto& [f1, f2] : inside) {
        if (f2 >= prev_f2) continue;  // dominated within the sweep
        volume += (ref_point[0] - f1) * (prev_f2 - f2);
        prev_f2 = f2;
    }
    return volume;
}

// Monte Carlo estimate of the dominated volume inside the box spanned by the
// ideal point of the set and the reference point. Works for any m; serves as
// an oracle for hypervolume_2d and as the m > 2 fallback.
inline double hypervolume_mc(const std::vector<std::vector<double>>& points,
                             const std::vector<double>& ref_point, std::size_t samples, Rng& rng) {
    if (samples < 1) throw std::invalid_argument("hypervolume_mc: samples must be >= 1");
    const std::size_t m = ref_point.size();
    std::vector<std::vector<double>> inside;
    for (const auto& pt : points) {
        bool ok = true;
        for (std::size_t j = 0; j < m; ++j)
            if (pt[j] >= ref_point[j]) ok = false;
        if (ok) inside.push_back(pt);
    }
    if (inside.empty()) return 0.0;
    std::vector<double> ideal(m, std::numeric_limits<double>::infinity());
    for (const auto& pt : inside)
        for (std::size_t j = 0; j < m; ++j) ideal[j] = std::min(ideal[j], pt[j]);
    double box = 1.0;
    for (std::size_t j = 0; j < m; ++j) box *= ref_point[j] - ideal[j];
    if (box <= 0.0) return 0.0;
    std::size_t hits = 0;
    std::vector<double> sample(m);
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t j = 0; j < m; ++j) sample[j] = rng.uniform(ideal[j], ref_point[j]);
        for (const auto& pt : inside) {
            bool dom = true;
            for (std::size_t j = 0; j < m; ++j)
                if (pt[j] > sample[j]) {
                    dom = false;
                    break;
                }
            if (dom) {
                ++hits;
                break;
            }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

// Schott's spacing: standard deviation (n-1 denominator) of the Manhattan
// distance from each point to its nearest neighbor. A single point gives 0.
inline double spacing(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("spacing: empty input set");
    const std::size_t n = points.size();
    if (n == 1) return 0.0;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            double d = 0.0;
            for (std::size_t j = 0; j < points[i].size(); ++j)
                d += std::abs(points[i][j] - points[k][j]);
            nearest[i] = std::min(nearest[i], d);
        }
    }
    // sorting makes the statistic independent of input order, bit for bit
    std::sort(nearest.begin(), nearest.end());
    double mean = 0.0;
    for (double d : nearest) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : nearest) ss += (mean - d) * (mean - d);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace qevo
