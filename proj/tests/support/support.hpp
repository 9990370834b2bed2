#pragma once

// Shared fixtures for the unit and acceptance suites: corpus access, an
// exhaustive value-iteration oracle, and random model generators.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rlml/core.hpp"
#include "rlml/rng.hpp"
#include "rlml/textio.hpp"

namespace rlml::testing {

inline std::string models_dir() { return RLML_MODELS_DIR; }
inline std::string golden_dir() { return RLML_GOLDEN_DIR; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Model load_corpus(const std::string& file) {
  return parse_model(read_text(models_dir() + "/" + file));
}

inline EnvironmentSpec path_finding_env() {
  EnvironmentSpec env;
  env.states = {"A", "B", "C", "D", "E", "F"};
  env.actions = {{1, 3}, {0, 2, 4}, {2}, {0, 4}, {1, 3, 5}, {2, 4}};
  env.rewards = Matrix(6, std::vector<double>(6, 0.0));
  env.rewards[1][2] = 100;
  env.rewards[5][2] = 100;
  env.terminal_states = {"C"};
  return env;
}

inline Hyperparameters default_hyperparameters() {
  Hyperparameters hp;
  hp.alpha = 0.1;
  hp.gamma = 0.9;
  hp.epsilon = 0.1;
  hp.total_episodes = 1000;
  return hp;
}

inline RlmlModel path_finding_model() {
  RlmlModel m;
  m.name = "PathFinding";
  m.environment = path_finding_env();
  m.agent = {AlgorithmKind::QLearning, default_hyperparameters()};
  return m;
}

// Optimal action values of a deterministic environment, computed directly
// from the raw spec by value iteration. qstar[s][k] is the value of taking
// actions[s][k].
struct Oracle {
  std::vector<double> v;
  std::vector<std::vector<double>> qstar;
  double residual = 0;

  // Positions of actions[s] whose value is within `tol` of the best.
  std::vector<std::size_t> optimal_set(std::size_t s, double tol = 1e-9) const {
    double best = -INFINITY;
    for (double q : qstar[s]) best = std::max(best, q);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < qstar[s].size(); ++k) {
      if (qstar[s][k] >= best - tol) out.push_back(k);
    }
    return out;
  }
};

inline Oracle value_iteration(const EnvironmentSpec& env, double gamma,
                              double tolerance = 1e-10) {
  const std::size_t n = env.states.size();
  std::vector<bool> terminal(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& t : env.terminal_states) terminal[s] = terminal[s] || t == env.states[s];
  }
  Oracle o;
  o.v.assign(n, 0.0);
  o.qstar.assign(n, {});
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double residual = 0;
    std::vector<double> next(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      o.qstar[s].clear();
      if (terminal[s]) continue;
      double best = -INFINITY;
      for (auto t : env.actions[s]) {
        double q = env.rewards[s][t] + (terminal[t] ? 0.0 : gamma * o.v[t]);
        o.qstar[s].push_back(q);
        best = std::max(best, q);
      }
      next[s] = best;
      residual = std::max(residual, std::abs(best - o.v[s]));
    }
    o.v = next;
    o.residual = residual;
    if (residual < tolerance) break;
  }
  return o;
}

// Deterministic environment with 3..6 states, 1..2 terminal states, every
// non-terminal state with at least one successor, and sparse rewards drawn
// from [-10, 100].
inline EnvironmentSpec random_environment(Rng& rng) {
  const std::size_t n = 3 + rng.below(4);
  EnvironmentSpec env;
  for (std::size_t s = 0; s < n; ++s) env.states.push_back("S" + std::to_string(s));
  const std::size_t terminals = 1 + rng.below(2);
  std::vector<bool> terminal(n, false);
  while (env.terminal_states.size() < terminals) {
    std::size_t t = rng.below(n);
    if (!terminal[t]) {
      terminal[t] = true;
      env.terminal_states.push_back(env.states[t]);
    }
  }
  env.rewards = Matrix(n, std::vector<double>(n, 0.0));
  env.actions.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (terminal[s]) continue;
    for (std::size_t t = 0; t < n; ++t) {
      if (rng.uniform() < 0.5) env.actions[s].push_back(static_cast<std::int64_t>(t));
    }
    if (env.actions[s].empty()) env.actions[s].push_back(static_cast<std::int64_t>(rng.below(n)));
    for (auto t : env.actions[s]) {
      if (rng.uniform() < 0.3) env.rewards[s][t] = std::round(-10 + 110 * rng.uniform());
    }
  }
  return env;
}

inline Hyperparameters random_hyperparameters(Rng& rng, AlgorithmKind kind) {
  Hyperparameters hp;
  hp.alpha = 0.01 + 0.99 * rng.uniform();
  hp.gamma = rng.uniform();
  hp.epsilon = rng.uniform();
  hp.total_episodes = 1 + static_cast<std::int64_t>(rng.below(100000));
  if (kind == AlgorithmKind::ActorCritic && rng.uniform() < 0.5) {
    hp.beta = 0.5 + 0.5 * rng.uniform();
  }
  return hp;
}

// A valid model of either kind with random names and values.
inline Model random_model(Rng& rng) {
  EnvironmentSpec env = random_environment(rng);
  auto agent = [&] {
    AlgorithmKind kind = kAllAlgorithms[rng.below(4)];
    return AgentSpec{kind, random_hyperparameters(rng, kind)};
  };
  std::string name = "Model_" + std::to_string(rng.below(1000000));
  if (rng.uniform() < 0.5) return RlmlModel{name, env, agent(), InlineSource{}};
  ComparatorModel m{name, env, {}, InlineSource{}};
  std::size_t count = 2 + rng.below(3);
  for (std::size_t k = 0; k < count; ++k) m.agents.push_back(agent());
  return m;
}

}  // namespace rlml::testing
