#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qevo/framework.hpp"
#include "qevo/problems.hpp"

namespace qevo {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Textual policy descriptor: drl | random | fixed:ga | fixed:de.
inline SelectionPolicy parse_policy(const std::string& label, double epsilon) {
    SelectionPolicy policy;
    policy.epsilon = epsilon;
    if (label == "drl") {
        policy.mode = PolicyMode::Drl;
    } else if (label == "random") {
        policy.mode = PolicyMode::Random;
    } else if (label == "fixed:ga") {
        policy.mode = PolicyMode::Fixed;
        policy.fixed_op = {1, OperatorId::Label::GA};
    } else if (label == "fixed:de") {
        policy.mode = PolicyMode::Fixed;
        policy.fixed_op = {2, OperatorId::Label::DE};
    } else {
        throw std::invalid_argument("unknown policy '" + label + "'");
    }
    return policy;
}

// Batch-experiment configuration with desk-scale defaults: the full built-in
// suite, all four policies, seeds 1..10, N = 40 over 200 generations, and
// training sessions capped at 2000 iterations.
struct SuiteConfig {
    std::vector<std::string> problems = builtin_problem_names();
    std::vector<std::string> policies = {"drl", "random", "fixed:ga", "fixed:de"};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int n = 10;
    int population = 40;
    int generations = 200;
    std::string out_dir = "out";
    std::string host = "cnsga2";
    double epsilon = 0.9;
    double gamma = 0.9;
    std::size_t ms_ep = 1000;
    std::size_t rs_ep = 50;
    std::size_t s_tr = 100;
    int update_period = 50;
    double lr = 0.01;
    double lr_decay = 1e-4;
    int train_iters = 2000;
    double sigma = 1e-4;
    std::string assessor = "objective";  // objective | indicator
    double indicator_ref = 1.1;
    int front_resolution = 1000;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const {
        if (problems.empty()) throw std::invalid_argument("problems list is empty");
        if (policies.empty()) throw std::invalid_argument("policies list is empty");
        if (seeds.empty()) throw std::invalid_argument("seeds list is empty");
        for (std::size_t i = 0; i < seeds.size(); ++i)
            for (std::size_t j = i + 1; j < seeds.size(); ++j)
                if (seeds[i] == seeds[j]) throw std::invalid_argument("seeds must be distinct");
        for (const auto& p : policies) parse_policy(p, epsilon);
        if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon out of [0,1]");
        if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma out of [0,1)");
        if (assessor != "objective" && assessor != "indicator")
            throw std::invalid_argument("assessor must be 'objective' or 'indicator'");
        if (host != "cnsga2") throw std::invalid_argument("unknown host '" + host + "'");
        if (n < 2 || population < 4 || generations < 1 || update_period < 1 ||
            front_resolution < 2 || train_iters < 1)
            throw std::invalid_argument("size parameter out of range");
        if (!(lr > 0) || lr_decay < 0 || !(sigma > 0) || !(indicator_ref > 0))
            throw std::invalid_argument("numeric parameter out of range");
        if (ms_ep == 0 || rs_ep == 0 || s_tr == 0)
            throw std::invalid_argument("replay sizes must be positive");
        if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    }

    RunConfig run_config(const std::string& policy_label, std::uint64_t seed,
                         int dimension) const {
        RunConfig cfg;
        cfg.population_size = population;
        cfg.generations = generations;
        cfg.seed = seed;
        cfg.policy = parse_policy(policy_label, epsilon);
        cfg.hyper.lr0 = lr;
        cfg.hyper.decay = lr_decay;
        cfg.hyper.max_iters = train_iters;
        cfg.hyper.gamma = gamma;
        cfg.ms_ep = ms_ep;
        cfg.rs_ep = rs_ep;
        cfg.s_tr = s_tr;
        cfg.update_period = update_period;
        cfg.op_params = OperatorParams::for_dimension(dimension);
        cfg.assessor = assessor == "indicator" ? StateAssessor::Indicator : StateAssessor::Objective;
        cfg.indicator_ref = {indicator_ref, indicator_ref};
        return cfg;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& s, int line) {
    std::istringstream is(s);
    T v{};
    is >> v;
    if (is.fail() || !is.eof()) throw ConfigError(line, "malformed value '" + s + "'");
    return v;
}

}  // namespace detail

// Parses the line-oriented `key = value` format: UTF-8 text, '#' comments,
// comma-separated lists. Unknown keys and malformed or out-of-range values
// raise ConfigError with the offending line number.
inline SuiteConfig parse_config(const std::string& text) {
    SuiteConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");

        try {
            if (key == "problems") {
                cfg.problems = detail::split_list(value);
            } else if (key == "policies") {
                cfg.policies = detail::split_list(value);
            } else if (key == "seeds") {
                cfg.seeds.clear();
                for (const auto& item : detail::split_list(value))
                    cfg.seeds.push_back(detail::parse_number<std::uint64_t>(item, line_no));
            } else if (key == "n") {
                cfg.n = detail::parse_number<int>(value, line_no);
            } else if (key == "pop") {
                cfg.population = detail::parse_number<int>(value, line_no);
            } else if (key == "gens") {
                cfg.generations = detail::parse_number<int>(value, line_no);
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "host") {
                cfg.host = value;
            } else if (key == "epsilon") {
                cfg.epsilon = detail::parse_number<double>(value, line_no);
            } else if (key == "gamma") {
                cfg.gamma = detail::parse_number<double>(value, line_no);
            } else if (key == "ms_ep") {
                cfg.ms_ep = detail::parse_number<std::size_t>(value, line_no);
            } else if (key == "rs_ep") {
                cfg.rs_ep = detail::parse_number<std::size_t>(value, line_no);
            } else if (key == "s_tr") {
                cfg.s_tr = detail::parse_number<std::size_t>(value, line_no);
            } else if (key == "update_period") {
                cfg.update_period = detail::parse_number<int>(value, line_no);
            } else if (key == "lr") {
                cfg.lr = detail::parse_number<double>(value, line_no);
            } else if (key == "lr_decay") {
                cfg.lr_decay = detail::parse_number<double>(value, line_no);
            } else if (key == "train_iters") {
                cfg.train_iters = detail::parse_number<int>(value, line_no);
            } else if (key == "sigma") {
                cfg.sigma = detail::parse_number<double>(value, line_no);
            } else if (key == "assessor") {
                cfg.assessor = value;
            } else if (key == "indicator_ref") {
                cfg.indicator_ref = detail::parse_number<double>(value, line_no);
            } else if (key == "front_resolution") {
                cfg.front_resolution = detail::parse_number<int>(value, line_no);
            } else if (key == "threads") {
                cfg.threads = detail::parse_number<int>(value, line_no);
            } else {
                throw ConfigError(line_no, "unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(line_no, e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(line_no, e.what());
    }
    return cfg;
}

}  // namespace qevo
