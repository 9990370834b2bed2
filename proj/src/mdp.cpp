#include "rlml/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace rlml {

std::optional<StateIndex> Mdp::index_of(std::string_view name) const {
  for (StateIndex s = 0; s < names_.size(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

double Mdp::max_abs_reward() const {
  double best = 0;
  for (const auto& row : reward_) {
    for (double v : row) best = std::max(best, std::abs(v));
  }
  return best;
}

StateIndex Mdp::reset(Rng& rng) const {
  if (starts_.empty()) throw NoStartState("every state is terminal");
  return starts_[rng.below(starts_.size())];
}

StepResult Mdp::step(StateIndex s, std::size_t action) const {
  if (s >= n_states()) {
    throw InvalidAction("state index " + std::to_string(s) + " out of range");
  }
  if (terminal_[s]) {
    throw InvalidAction("cannot act from terminal state '" + names_[s] + "'");
  }
  if (action >= allowed_[s].size()) {
    throw InvalidAction("state '" + names_[s] + "' has no action " +
                        std::to_string(action));
  }
  StateIndex next = allowed_[s][action];
  return {next, reward_[s][next], static_cast<bool>(terminal_[next])};
}

Mdp compile(const EnvironmentSpec& env) {
  const std::size_t n = env.states.size();
  if (n == 0) throw CompileError("environment has no states");

  Mdp mdp;
  std::map<std::string, StateIndex> index;
  for (StateIndex s = 0; s < n; ++s) {
    if (!index.emplace(env.states[s], s).second) {
      throw CompileError("duplicate state '" + env.states[s] + "'");
    }
  }
  mdp.names_ = env.states;

  mdp.terminal_.assign(n, false);
  for (const std::string& t : env.terminal_states) {
    auto it = index.find(t);
    if (it == index.end()) throw CompileError("unknown terminal state '" + t + "'");
    mdp.terminal_[it->second] = true;
  }

  if (env.actions.size() != n) throw CompileError("actions must have one row per state");
  mdp.allowed_.resize(n);
  for (StateIndex s = 0; s < n; ++s) {
    std::set<std::int64_t> seen;
    for (std::int64_t i : env.actions[s]) {
      if (i < 0 || static_cast<std::size_t>(i) >= n) {
        throw CompileError("action index " + std::to_string(i) + " out of range");
      }
      if (!seen.insert(i).second) {
        throw CompileError("duplicate action index " + std::to_string(i));
      }
      mdp.allowed_[s].push_back(static_cast<StateIndex>(i));
    }
    if (mdp.allowed_[s].empty() && !mdp.terminal_[s]) {
      throw CompileError("non-terminal state '" + env.states[s] + "' has no actions");
    }
  }

  if (env.rewards.size() != n) throw CompileError("rewards must have one row per state");
  for (const auto& row : env.rewards) {
    if (row.size() != n) throw CompileError("rewards must be an n x n matrix");
    for (double v : row) {
      if (!std::isfinite(v)) throw CompileError("rewards must be finite");
    }
  }
  mdp.reward_ = env.rewards;

  for (StateIndex s = 0; s < n; ++s) {
    if (!mdp.terminal_[s]) mdp.starts_.push_back(s);
  }
  mdp.step_cap_only_ = env.terminal_states.empty();
  return mdp;
}

}  // namespace rlml
