#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "qevo/config.hpp"
#include "qevo/csv.hpp"
#include "qevo/framework.hpp"
#include "qevo/problems.hpp"

namespace qevo {

struct RunOutcome {
    std::string problem;
    std::string policy;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double final_igd_plus = std::numeric_limits<double>::quiet_NaN();
    double final_hv = std::numeric_limits<double>::quiet_NaN();
    std::string trace_path;
    std::string front_path;
};

struct CellStats {
    std::string problem;
    std::string policy;
    int runs = 0;
    int failures = 0;
    double median_igd_plus = std::numeric_limits<double>::quiet_NaN();
    double iqr_igd_plus = std::numeric_limits<double>::quiet_NaN();
    double median_hv = std::numeric_limits<double>::quiet_NaN();
    double iqr_hv = std::numeric_limits<double>::quiet_NaN();
    double rank_igd_plus = 0.0;
    double rank_hv = 0.0;
};

struct PolicyRank {
    std::string policy;
    double avg_rank_igd_plus = 0.0;
    double avg_rank_hv = 0.0;
};

struct SuiteSummary {
    std::vector<RunOutcome> runs;
    std::vector<CellStats> cells;
    std::vector<PolicyRank> policy_ranks;
    std::string summary_path;
    std::string ranks_path;
};

namespace detail {

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

// 1-based competition ranks with ties averaged; NaN sorts last.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto keyed = [&](std::size_t i) {
        return std::isnan(values[i]) ? std::numeric_limits<double>::infinity() : values[i];
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keyed(a) < keyed(b); });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && keyed(order[j + 1]) == keyed(order[i])) ++j;
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

inline std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == ' ') c = '_';
    return s;
}

inline void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    std::vector<CsvRow> rows;
    rows.reserve(trace.size());
    for (const auto& row : trace)
        rows.push_back({static_cast<long long>(row.gen), row.s.con, row.s.fea, row.s.div,
                        static_cast<long long>(row.op), row.reward, row.igd_plus, row.hv});
    write_csv(path, {"gen", "con", "fea", "div", "op", "reward", "igd_plus", "hv"}, rows);
}

inline void write_front_csv(const std::string& path, const Population& pop) {
    std::vector<std::vector<double>> feasible;
    for (const auto& sol : pop.members)
        if (is_feasible(sol)) feasible.push_back(sol.f);
    const auto front = nondominated_subset(std::move(feasible));
    std::vector<CsvRow> rows;
    rows.reserve(front.size());
    for (const auto& pt : front) rows.push_back({pt[0], pt[1]});
    write_csv(path, {"f1", "f2"}, rows);
}

}  // namespace detail

// Executes one (problem, policy, seed) cell of a suite and writes its trace
// and final-front files.
inline RunOutcome execute_run(const SuiteConfig& suite, const std::string& problem,
                              const std::string& policy, std::uint64_t seed) {
    RunOutcome outcome;
    outcome.problem = problem;
    outcome.policy = policy;
    outcome.seed = seed;
    std::filesystem::create_directories(suite.out_dir);
    const std::string stem = problem + "_" + detail::sanitize(policy) + "_s" + std::to_string(seed);
    outcome.trace_path = (std::filesystem::path(suite.out_dir) / (stem + "_trace.csv")).string();
    outcome.front_path = (std::filesystem::path(suite.out_dir) / (stem + "_front.csv")).string();
    try {
        ProblemSpec spec = make_problem(problem, suite.n);
        spec.sigma = suite.sigma;
        const auto front = analytic_front(spec, suite.front_resolution);
        const auto ctx = IndicatorContext::from_front(front.points);
        CdpNsga2 host;
        const RunConfig cfg = suite.run_config(policy, seed, suite.n);
        const RunResult result = run(host, spec, cfg, &ctx);
        detail::write_trace_csv(outcome.trace_path, result.trace);
        detail::write_front_csv(outcome.front_path, result.final_population);
        outcome.final_igd_plus = result.trace.back().igd_plus;
        outcome.final_hv = result.trace.back().hv;
        outcome.ok = true;
    } catch (const std::exception& e) {
        outcome.error = e.what();
    }
    return outcome;
}

// Runs every (problem x policy x seed) combination, writes per-run CSVs plus
// summary.csv and ranks.csv, and returns the aggregated statistics. Runs are
// independent, so they are dispatched to a small worker pool; outputs are a
// pure function of the configuration.
inline SuiteSummary run_suite(const SuiteConfig& suite) {
    suite.validate();
    std::filesystem::create_directories(suite.out_dir);

    struct Job {
        std::string problem, policy;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& problem : suite.problems)
        for (const auto& policy : suite.policies)
            for (const auto seed : suite.seeds) jobs.push_back({problem, policy, seed});

    SuiteSummary summary;
    summary.runs.resize(jobs.size());
    unsigned workers = suite.threads > 0 ? static_cast<unsigned>(suite.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            summary.runs[i] = execute_run(suite, jobs[i].problem, jobs[i].policy, jobs[i].seed);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // per-(problem, policy) medians and IQRs
    for (const auto& problem : suite.problems) {
        for (const auto& policy : suite.policies) {
            CellStats cell;
            cell.problem = problem;
            cell.policy = policy;
            std::vector<double> igds, hvs;
            for (const auto& r : summary.runs) {
                if (r.problem != problem || r.policy != policy) continue;
                ++cell.runs;
                if (!r.ok) {
                    ++cell.failures;
                    continue;
                }
                igds.push_back(r.final_igd_plus);
                hvs.push_back(r.final_hv);
            }
            cell.median_igd_plus = detail::quantile(igds, 0.5);
            cell.iqr_igd_plus = detail::quantile(igds, 0.75) - detail::quantile(igds, 0.25);
            cell.median_hv = detail::quantile(hvs, 0.5);
            cell.iqr_hv = detail::quantile(hvs, 0.75) - detail::quantile(hvs, 0.25);
            summary.cells.push_back(std::move(cell));
        }
    }

    // within-problem ranks (IGD+ and -HV ascending), then averages per policy
    const std::size_t n_policies = suite.policies.size();
    std::vector<double> igd_rank_sum(n_policies, 0.0), hv_rank_sum(n_policies, 0.0);
    for (std::size_t pi = 0; pi < suite.problems.size(); ++pi) {
        std::vector<double> igd_medians(n_policies), neg_hv_medians(n_policies);
        for (std::size_t li = 0; li < n_policies; ++li) {
            auto& cell = summary.cells[pi * n_policies + li];
            igd_medians[li] = cell.median_igd_plus;
            neg_hv_medians[li] = std::isnan(cell.median_hv)
                                     ? std::numeric_limits<double>::quiet_NaN()
                                     : -cell.median_hv;
        }
        const auto igd_ranks = detail::average_ranks(igd_medians);
        const auto hv_ranks = detail::average_ranks(neg_hv_medians);
        for (std::size_t li = 0; li < n_policies; ++li) {
            summary.cells[pi * n_policies + li].rank_igd_plus = igd_ranks[li];
            summary.cells[pi * n_policies + li].rank_hv = hv_ranks[li];
            igd_rank_sum[li] += igd_ranks[li];
            hv_rank_sum[li] += hv_ranks[li];
        }
    }
    const auto n_problems = static_cast<double>(suite.problems.size());
    for (std::size_t li = 0; li < n_policies; ++li)
        summary.policy_ranks.push_back(
            {suite.policies[li], igd_rank_sum[li] / n_problems, hv_rank_sum[li] / n_problems});

    summary.summary_path = (std::filesystem::path(suite.out_dir) / "summary.csv").string();
    std::vector<CsvRow> cell_rows;
    for (const auto& c : summary.cells)
        cell_rows.push_back({c.problem, c.policy, static_cast<long long>(c.runs),
                             static_cast<long long>(c.failures), c.median_igd_plus, c.iqr_igd_plus,
                             c.median_hv, c.iqr_hv, c.rank_igd_plus, c.rank_hv});
    write_csv(summary.summary_path,
              {"problem", "policy", "runs", "failures", "median_igd_plus", "iqr_igd_plus",
               "median_hv", "iqr_hv", "rank_igd_plus", "rank_hv"},
              cell_rows);

    summary.ranks_path = (std::filesystem::path(suite.out_dir) / "ranks.csv").string();
    std::vector<CsvRow> rank_rows;
    for (const auto& pr : summary.policy_ranks)
        rank_rows.push_back({pr.policy, pr.avg_rank_igd_plus, pr.avg_rank_hv});
    write_csv(summary.ranks_path, {"policy", "avg_rank_igd_plus", "avg_rank_hv"}, rank_rows);
    return summary;
}

}  // namespace qevo
