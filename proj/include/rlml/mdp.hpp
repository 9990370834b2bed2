#pragma once

// Compiled environment: a deterministic tabular MDP where an action is a
// position in the current state's successor list.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlml/core.hpp"
#include "rlml/rng.hpp"

namespace rlml {

using StateIndex = std::size_t;

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// reset() on an MDP whose states are all terminal.
class NoStartState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  StateIndex next;
  double reward;
  bool done;

  bool operator==(const StepResult&) const = default;
};

class Mdp {
 public:
  std::size_t n_states() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(StateIndex s) const { return names_.at(s); }
  std::optional<StateIndex> index_of(std::string_view name) const;

  const std::vector<StateIndex>& allowed(StateIndex s) const { return allowed_.at(s); }
  double reward(StateIndex from, StateIndex to) const { return reward_[from][to]; }
  const Matrix& rewards() const { return reward_; }
  bool terminal(StateIndex s) const { return terminal_.at(s); }
  const std::vector<StateIndex>& start_states() const { return starts_; }
  // True when no state is terminal and episodes end only at the step cap.
  bool step_cap_only() const { return step_cap_only_; }

  // 100 * n_states.
  std::size_t step_cap() const { return 100 * n_states(); }

  // Largest |reward| cell.
  double max_abs_reward() const;

  // Uniform draw over non-terminal states.
  StateIndex reset(Rng& rng) const;

  // `action` is a position in allowed(s).
  StepResult step(StateIndex s, std::size_t action) const;

  bool operator==(const Mdp&) const = default;

 private:
  friend Mdp compile(const EnvironmentSpec& env);

  std::vector<std::string> names_;
  std::vector<std::vector<StateIndex>> allowed_;
  Matrix reward_;
  std::vector<bool> terminal_;
  std::vector<StateIndex> starts_;
  bool step_cap_only_ = false;
};

// Throws CompileError if the environment is structurally unusable
// (see validate_environment).
Mdp compile(const EnvironmentSpec& env);

}  // namespace rlml
