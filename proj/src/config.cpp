#include "fairpic/config.hpp"

#include <charconv>
#include <fstream>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "fairpic/error.hpp"

namespace fairpic {

namespace pt = boost::property_tree;

PolicyKind parse_policy(std::string_view name) {
    if (name == "multi-group-pic") return PolicyKind::multi_group_pic;
    if (name == "homogeneous-pic") return PolicyKind::homogeneous_pic;
    if (name == "uncontrolled") return PolicyKind::uncontrolled;
    throw ConfigError(fmt::format("unknown policy '{}'", name));
}

std::string_view policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::multi_group_pic: return "multi-group-pic";
        case PolicyKind::homogeneous_pic: return "homogeneous-pic";
        case PolicyKind::uncontrolled: return "uncontrolled";
    }
    return "?";
}

CostConfig ExperimentConfig::cost_with_eta(double eta_value) const {
    return CostConfig(weights, eta_value, lambda, model.noise_variance());
}

CostConfig ExperimentConfig::single_cost() const {
    Eigen::VectorXd w(1);
    w[0] = single.weight;
    return CostConfig(w, 0.0, lambda, single.params.noise_variance());
}

void ExperimentConfig::validate() const {
    model.validate();
    single.params.validate();
    if (single.params.groups() != 1) throw ConfigError("single-group model must have exactly one group");
    if (initial.size() != groups()) {
        throw ConfigError(fmt::format("initial state has {} groups, model has {}", initial.size(), groups()));
    }
    initial.validate();
    if (weights.size() != static_cast<Eigen::Index>(groups())) {
        throw ConfigError(fmt::format("weights must have {} entries", groups()));
    }
    // Checks eta, lambda, weights and noise variances.
    (void)cost();
    (void)single_cost();
    for (double e : etas) {
        if (!(e >= 0.0)) throw ConfigError("eta list entries must be nonnegative");
    }
    solver.validate();
    if (replications < 1) throw ConfigError("replications must be at least 1");
}

namespace {

double parse_number(std::string_view token, std::string_view key) {
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    // Fractions such as 2/3 are accepted so that rational table values can be stated exactly.
    if (const auto slash = token.find('/'); slash != std::string_view::npos) {
        const double num = parse_number(token.substr(0, slash), key);
        const double den = parse_number(token.substr(slash + 1), key);
        if (den == 0.0) throw ConfigError(fmt::format("{}: division by zero", key));
        return num / den;
    }
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, token));
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_list(std::string_view text, std::string_view key) {
    std::vector<double> out;
    for (auto tok : split(text, ',')) out.push_back(parse_number(tok, key));
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

bool parse_bool(std::string_view text, std::string_view key) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

// Tracks which keys of a section were consumed so leftovers can be reported.
class Section {
public:
    Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
        if (auto child = root.get_child_optional(name_)) {
            for (const auto& [key, node] : *child) {
                if (!node.empty()) throw ConfigError(fmt::format("[{}] {}: nested values are not allowed", name_, key));
                values_[key] = node.data();
            }
        }
    }

    std::optional<std::string> get(const std::string& key) {
        used_.insert(key);
        if (auto it = values_.find(key); it != values_.end()) return it->second;
        return std::nullopt;
    }

    std::string require(const std::string& key) {
        if (auto v = get(key)) return *v;
        throw ConfigError(fmt::format("[{}] missing required key '{}'", name_, key));
    }

    std::string qualified(const std::string& key) const { return fmt::format("{}.{}", name_, key); }

    void reject_unknown() const {
        for (const auto& [key, _] : values_) {
            if (!used_.contains(key)) throw ConfigError(fmt::format("[{}] unknown key '{}'", name_, key));
        }
    }

private:
    std::string name_;
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

Eigen::MatrixXd parse_matrix(std::string_view text, std::string_view key) {
    const auto rows = split(text, ';');
    std::vector<std::vector<double>> parsed;
    for (auto row : rows) parsed.push_back(parse_list(row, key));
    const auto n = parsed.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (parsed[r].size() != n) throw ConfigError(fmt::format("{}: matrix must be square ({} rows)", key, n));
        for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parsed[r][c];
    }
    return m;
}

EpidemicState parse_state(std::string_view text, std::string_view key) {
    EpidemicState s;
    for (auto group : split(text, ';')) {
        const auto v = parse_list(group, key);
        if (v.size() != 4) throw ConfigError(fmt::format("{}: each group needs S, I, R, D", key));
        s.groups.push_back({v[0], v[1], v[2], v[3]});
    }
    return s;
}

double mean_of(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.mean(); }

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree root;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("malformed config: {}", e.message()));
    }
    static const std::set<std::string> known{"model", "cost", "solver", "experiment"};
    for (const auto& [name, node] : root) {
        if (!known.contains(name)) throw ConfigError(fmt::format("unknown section [{}]", name));
    }

    ExperimentConfig cfg;
    Section model(root, "model");
    cfg.model.beta = parse_matrix(model.require("beta"), model.qualified("beta"));
    auto vec = [](Section& s, const std::string& key) { return to_vector(parse_list(s.require(key), s.qualified(key))); };
    cfg.model.gamma = vec(model, "gamma");
    cfg.model.delta = vec(model, "delta");
    cfg.model.sigma_v = vec(model, "sigma_v");
    cfg.model.sigma_l = vec(model, "sigma_l");
    cfg.initial = parse_state(model.require("initial_state"), model.qualified("initial_state"));

    // The single-group baseline defaults to averaged group parameters.
    auto scalar_or = [](Section& s, const std::string& key, double fallback) {
        auto v = s.get(key);
        return v ? parse_number(*v, s.qualified(key)) : fallback;
    };
    auto single_vec = [](double x) { return Eigen::VectorXd::Constant(1, x); };
    const double mean_beta = cfg.model.beta.size() == 0 ? 0.0 : cfg.model.beta.diagonal().mean();
    cfg.single.params.beta = Eigen::MatrixXd::Constant(1, 1, scalar_or(model, "single_beta", mean_beta));
    cfg.single.params.gamma = single_vec(scalar_or(model, "single_gamma", mean_of(cfg.model.gamma)));
    cfg.single.params.delta = single_vec(scalar_or(model, "single_delta", mean_of(cfg.model.delta)));
    cfg.single.params.sigma_v = single_vec(scalar_or(model, "single_sigma_v", mean_of(cfg.model.sigma_v)));
    cfg.single.params.sigma_l = single_vec(scalar_or(model, "single_sigma_l", mean_of(cfg.model.sigma_l)));
    model.reject_unknown();

    Section cost(root, "cost");
    cfg.weights = vec(cost, "weights");
    cfg.eta = scalar_or(cost, "eta", 0.0);
    cfg.lambda = scalar_or(cost, "lambda", 0.01);
    cfg.single.weight = scalar_or(cost, "single_weight", mean_of(cfg.weights));
    cost.reject_unknown();

    Section solver(root, "solver");
    const double samples = parse_number(solver.require("samples"), solver.qualified("samples"));
    if (samples != std::floor(samples) || samples < 1 || samples > 1e9) throw ConfigError("solver.samples must be a positive integer");
    cfg.solver.samples = static_cast<int>(samples);
    cfg.solver.grid = TimeGrid(parse_number(solver.require("horizon"), solver.qualified("horizon")),
                               parse_number(solver.require("dt"), solver.qualified("dt")));
    cfg.solver.epsilon_actuation = scalar_or(solver, "epsilon_actuation", 1e-6);
    if (auto v = solver.get("clamp_controls")) cfg.solver.clamp_controls = parse_bool(*v, solver.qualified("clamp_controls"));
    cfg.solver.u_max = scalar_or(solver, "u_max", 1.0);
    solver.reject_unknown();

    Section experiment(root, "experiment");
    if (auto v = experiment.get("policy")) cfg.policy = parse_policy(*v);
    const double reps = scalar_or(experiment, "replications", 1.0);
    if (reps != std::floor(reps) || reps < 1 || reps > 1e9) throw ConfigError("experiment.replications must be a positive integer");
    cfg.replications = static_cast<int>(reps);
    if (auto v = experiment.get("seed")) {
        const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), cfg.seed);
        if (ec != std::errc{} || ptr != v->data() + v->size()) throw ConfigError("experiment.seed must be an unsigned integer");
    }
    if (auto v = experiment.get("etas")) cfg.etas = parse_list(*v, experiment.qualified("etas"));
    if (auto v = experiment.get("output")) cfg.output = *v;
    experiment.reject_unknown();

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.model.beta = Eigen::Vector3d(0.2, 0.2, 0.3).asDiagonal();
    cfg.model.gamma = Eigen::Vector3d(0.1, 0.1, 0.1);
    cfg.model.delta = Eigen::Vector3d(0.03, 0.03, 0.05);
    cfg.model.sigma_v = Eigen::Vector3d::Constant(0.01);
    cfg.model.sigma_l = Eigen::Vector3d::Constant(0.01);
    cfg.initial.groups.assign(3, Compartments{0.99, 0.01, 0.0, 0.0});
    cfg.weights = Eigen::Vector3d(2.0, 1.0, 2.0 / 3.0);
    cfg.single.params.beta = Eigen::MatrixXd::Constant(1, 1, 0.23);
    cfg.single.params.gamma = Eigen::VectorXd::Constant(1, 0.1);
    cfg.single.params.delta = Eigen::VectorXd::Constant(1, 0.03);
    cfg.single.params.sigma_v = Eigen::VectorXd::Constant(1, 0.01);
    cfg.single.params.sigma_l = Eigen::VectorXd::Constant(1, 0.01);
    cfg.single.weight = 1.2;
    cfg.solver.samples = 1000;
    cfg.solver.grid = TimeGrid(180.0, 1.0);
    cfg.replications = 500;
    cfg.seed = 42;
    return cfg;
}

}  // namespace fairpic
