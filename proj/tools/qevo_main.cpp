// Command-line harness: single runs, batch suites, reference-front export,
// and a gradient self-check for the Q-network.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qevo/qevo.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& problem, const std::string& policy, int pop, int gens,
            std::uint64_t seed, const std::string& config_path, const std::string& out_dir) {
    qevo::SuiteConfig suite;
    if (!config_path.empty()) suite = qevo::parse_config(read_file(config_path));
    if (pop > 0) suite.population = pop;
    if (gens > 0) suite.generations = gens;
    suite.out_dir = out_dir;

    const auto outcome = qevo::execute_run(suite, problem, policy, seed);
    if (!outcome.ok) {
        std::cerr << "run failed: " << outcome.error << "\n";
        return 1;
    }
    std::cout << problem << " " << policy << " seed=" << seed
              << " igd_plus=" << qevo::format_real(outcome.final_igd_plus)
              << " hv=" << qevo::format_real(outcome.final_hv) << "\n"
              << "trace: " << outcome.trace_path << "\n"
              << "front: " << outcome.front_path << "\n";
    return 0;
}

int cmd_suite(const std::string& config_path, const std::string& out_override) {
    qevo::SuiteConfig suite;
    if (!config_path.empty()) suite = qevo::parse_config(read_file(config_path));
    if (!out_override.empty()) suite.out_dir = out_override;

    const auto summary = qevo::run_suite(suite);
    int failures = 0;
    for (const auto& r : summary.runs)
        if (!r.ok) {
            ++failures;
            std::cerr << "failed: " << r.problem << " " << r.policy << " seed=" << r.seed << ": "
                      << r.error << "\n";
        }
    std::printf("%-6s %-10s %12s %12s %6s\n", "prob", "policy", "med_igd+", "med_hv", "rank");
    for (const auto& c : summary.cells)
        std::printf("%-6s %-10s %12s %12s %6.2f\n", c.problem.c_str(), c.policy.c_str(),
                    qevo::format_real(c.median_igd_plus).c_str(),
                    qevo::format_real(c.median_hv).c_str(), c.rank_igd_plus);
    std::printf("\naverage IGD+ rank across problems (lower is better):\n");
    for (const auto& pr : summary.policy_ranks)
        std::printf("  %-10s %.4f\n", pr.policy.c_str(), pr.avg_rank_igd_plus);
    std::printf("\nsummary: %s\nranks:   %s\n", summary.summary_path.c_str(),
                summary.ranks_path.c_str());
    return failures == 0 ? 0 : 1;
}

int cmd_oracle(const std::string& problem, int n, int resolution, int grid,
               const std::string& out_path) {
    const auto spec = qevo::make_problem(problem, n);
    qevo::ReferenceFront front;
    if (grid > 0)
        front = qevo::grid_oracle_front(spec, grid);
    else
        front = qevo::analytic_front(spec, resolution);
    std::vector<qevo::CsvRow> rows;
    rows.reserve(front.points.size());
    for (const auto& pt : front.points) rows.push_back({pt[0], pt[1]});
    qevo::write_csv(out_path, {"f1", "f2"}, rows);
    std::cout << "wrote " << front.points.size() << " points to " << out_path << "\n";
    return 0;
}

int cmd_gradcheck(int trials, std::uint64_t seed, const std::string& dump_path) {
    qevo::Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto net = qevo::init_network(rng);
        std::vector<double> input(4);
        for (auto& v : input) v = rng.uniform01();
        const double target = rng.uniform(-1.0, 1.0);
        const double err = qevo::gradient_check(net, input, target);
        worst = std::max(worst, err);
        std::printf("trial %2d: max relative error %.3e\n", i + 1, err);
        if (!dump_path.empty() && i == 0) {
            std::ofstream os(dump_path);
            qevo::dump_weights(net, os);
        }
    }
    const bool ok = worst < 1e-4;
    std::printf("worst over %d trials: %.3e -> %s\n", trials, worst, ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep-Q-learning assisted operator selection for constrained "
                 "multi-objective evolutionary algorithms"};
    app.require_subcommand(1);

    std::string problem = "CP1";
    std::string policy = "drl";
    std::string host = "cnsga2";
    std::string config_path;
    std::string out = "out";
    int pop = 0;
    int gens = 0;
    std::uint64_t seed = 1;

    auto* run = app.add_subcommand("run", "execute a single run");
    run->add_option("--problem", problem, "built-in problem name")->capture_default_str();
    run->add_option("--policy", policy, "drl|random|fixed:ga|fixed:de")->capture_default_str();
    run->add_option("--host", host, "host CMOEA")->capture_default_str();
    run->add_option("--pop", pop, "population size");
    run->add_option("--gens", gens, "generation budget");
    run->add_option("--seed", seed, "random seed")->capture_default_str();
    run->add_option("--config", config_path, "config file with further knobs");
    run->add_option("--out", out, "output directory")->capture_default_str();

    auto* suite = app.add_subcommand("suite", "execute a batch of runs");
    suite->add_option("--config", config_path, "config file");
    std::string suite_out;
    suite->add_option("--out", suite_out, "output directory override");

    auto* oracle = app.add_subcommand("oracle", "write a reference front as CSV");
    int resolution = 1000;
    int grid = 0;
    std::string oracle_out = "front.csv";
    int oracle_n = 10;
    oracle->add_option("--problem", problem, "built-in problem name")->capture_default_str();
    oracle->add_option("--n", oracle_n, "decision dimension")->capture_default_str();
    oracle->add_option("--resolution", resolution, "analytic front resolution")
        ->capture_default_str();
    oracle->add_option("--grid", grid, "points per dim for the grid oracle (0 = analytic)");
    oracle->add_option("--out", oracle_out, "output CSV path")->capture_default_str();

    auto* gradcheck = app.add_subcommand("gradcheck", "verify backpropagation gradients");
    int trials = 10;
    std::string dump_path;
    gradcheck->add_option("--trials", trials, "number of random configurations")
        ->capture_default_str();
    gradcheck->add_option("--seed", seed, "random seed")->capture_default_str();
    gradcheck->add_option("--dump", dump_path, "dump first network's weights to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (host != "cnsga2") throw std::runtime_error("unknown host '" + host + "'");
        if (run->parsed()) return cmd_run(problem, policy, pop, gens, seed, config_path, out);
        if (suite->parsed()) return cmd_suite(config_path, suite_out);
        if (oracle->parsed()) return cmd_oracle(problem, oracle_n, resolution, grid, oracle_out);
        if (gradcheck->parsed()) return cmd_gradcheck(trials, seed, dump_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
