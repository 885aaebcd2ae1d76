#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fairpic/cost.hpp"
#include "fairpic/solver.hpp"
#include "fairpic/types.hpp"

namespace fairpic {

enum class PolicyKind { multi_group_pic, homogeneous_pic, uncontrolled };

PolicyKind parse_policy(std::string_view name);
std::string_view policy_name(PolicyKind kind);

/// Single-group model used by the homogeneous baseline.
struct SingleGroupModel {
    ModelParams params;
    double weight = 1.0;
};

struct ExperimentConfig {
    ModelParams model;
    EpidemicState initial;
    Eigen::VectorXd weights;
    double eta = 0.0;
    double lambda = 0.01;
    SingleGroupModel single;
    SolverConfig solver;
    PolicyKind policy = PolicyKind::multi_group_pic;
    int replications = 1;
    std::uint64_t seed = 0;
    std::vector<double> etas{0.0, 0.01, 0.02, 0.05, 0.08};
    std::filesystem::path output = "out";

    std::size_t groups() const { return model.groups(); }
    CostConfig cost() const { return cost_with_eta(eta); }
    CostConfig cost_with_eta(double eta_value) const;
    CostConfig single_cost() const;

    /// Re-checks every invariant; throws ConfigError.
    void validate() const;
};

/// Parses the sectioned key-value format ([model], [cost], [solver], [experiment]).
/// Unknown sections or keys, malformed numbers and missing required keys throw ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The three-group case study (upper, middle, lower income) with its single-group model.
ExperimentConfig default_config();

}  // namespace fairpic
