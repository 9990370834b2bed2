#include "rlml/validator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rlml {

std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::StatesFormat: return "StatesFormat";
    case DiagnosticCode::DuplicateState: return "DuplicateState";
    case DiagnosticCode::ActionsShape: return "ActionsShape";
    case DiagnosticCode::ActionIndexRange: return "ActionIndexRange";
    case DiagnosticCode::RewardsShape: return "RewardsShape";
    case DiagnosticCode::TerminalNotSubset: return "TerminalNotSubset";
    case DiagnosticCode::EmptyActionNonTerminal: return "EmptyActionNonTerminal";
    case DiagnosticCode::HyperparamRange: return "HyperparamRange";
    case DiagnosticCode::NoTerminalStates: return "NoTerminalStates";
  }
  return "?";
}

std::string render(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "ERROR " : "WARNING ";
  out += to_string(d.code);
  out += " at " + d.location + ": " + d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

namespace {

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

bool valid_state_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

void append(std::vector<Diagnostic>& out, std::vector<Diagnostic> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()),
             std::make_move_iterator(more.end()));
}

}  // namespace

std::vector<Diagnostic> validate_states(const std::vector<std::string>& states) {
  std::vector<Diagnostic> out;
  if (states.empty()) {
    out.push_back({DiagnosticCode::StatesFormat, Severity::Error,
                   "at least one state is required", "states"});
    return out;
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!valid_state_name(states[i])) {
      out.push_back({DiagnosticCode::StatesFormat, Severity::Error,
                     "state name '" + states[i] +
                         "' must consist of letters, digits and '_'",
                     at("states", i)});
    } else if (!seen.insert(states[i]).second) {
      out.push_back({DiagnosticCode::DuplicateState, Severity::Error,
                     "state '" + states[i] + "' is declared more than once",
                     at("states", i)});
    }
  }
  return out;
}

std::vector<Diagnostic> validate_actions(
    const std::vector<std::string>& states,
    const std::vector<std::vector<std::int64_t>>& actions) {
  std::vector<Diagnostic> out;
  const auto n = static_cast<std::int64_t>(states.size());
  if (actions.size() != states.size()) {
    out.push_back({DiagnosticCode::ActionsShape, Severity::Error,
                   "expected " + std::to_string(states.size()) +
                       " action rows (one per state), found " +
                       std::to_string(actions.size()),
                   "actions"});
  }
  for (std::size_t r = 0; r < actions.size(); ++r) {
    std::set<std::int64_t> seen;
    for (std::int64_t index : actions[r]) {
      if (index < 0 || index >= n) {
        out.push_back({DiagnosticCode::ActionIndexRange, Severity::Error,
                       "state index " + std::to_string(index) +
                           " is outside [0, " + std::to_string(n) + ")",
                       at("actions", r)});
      } else if (!seen.insert(index).second) {
        out.push_back({DiagnosticCode::ActionsShape, Severity::Error,
                       "state index " + std::to_string(index) +
                           " is listed more than once",
                       at("actions", r)});
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate_rewards(const std::vector<std::string>& states,
                                         const Matrix& rewards) {
  std::vector<Diagnostic> out;
  if (rewards.size() != states.size()) {
    out.push_back({DiagnosticCode::RewardsShape, Severity::Error,
                   "expected " + std::to_string(states.size()) +
                       " reward rows (one per state), found " +
                       std::to_string(rewards.size()),
                   "rewards"});
  }
  for (std::size_t r = 0; r < rewards.size(); ++r) {
    if (rewards[r].size() != states.size()) {
      out.push_back({DiagnosticCode::RewardsShape, Severity::Error,
                     "expected " + std::to_string(states.size()) +
                         " values (one per state), found " +
                         std::to_string(rewards[r].size()),
                     at("rewards", r)});
      continue;
    }
    for (std::size_t c = 0; c < rewards[r].size(); ++c) {
      if (!std::isfinite(rewards[r][c])) {
        out.push_back({DiagnosticCode::RewardsShape, Severity::Error,
                       "reward must be a finite number",
                       at(at("rewards", r), c)});
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate_terminals(
    const std::vector<std::string>& states,
    const std::vector<std::string>& terminals) {
  std::vector<Diagnostic> out;
  if (terminals.empty()) {
    out.push_back({DiagnosticCode::NoTerminalStates, Severity::Warning,
                   "no terminal states; episodes end only at the step cap",
                   "terminal_states"});
    return out;
  }
  const std::set<std::string> known(states.begin(), states.end());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (!known.count(terminals[i])) {
      out.push_back({DiagnosticCode::TerminalNotSubset, Severity::Error,
                     "terminal state '" + terminals[i] + "' is not a declared state",
                     at("terminal_states", i)});
    } else if (!seen.insert(terminals[i]).second) {
      out.push_back({DiagnosticCode::TerminalNotSubset, Severity::Error,
                     "terminal state '" + terminals[i] + "' is listed more than once",
                     at("terminal_states", i)});
    }
  }
  if (!known.empty() && seen.size() == known.size()) {
    out.push_back({DiagnosticCode::TerminalNotSubset, Severity::Error,
                   "every state is terminal; at least one start state is required",
                   "terminal_states"});
  }
  return out;
}

std::vector<Diagnostic> validate_hyperparameters(
    const Hyperparameters& hp, const std::string& location_prefix) {
  std::vector<Diagnostic> out;
  auto check = [&](bool ok, const char* key, const std::string& range) {
    if (!ok) {
      out.push_back({DiagnosticCode::HyperparamRange, Severity::Error,
                     std::string(key) + " must be in " + range,
                     location_prefix + "." + key});
    }
  };
  // Written so that NaN fails every check.
  check(hp.alpha > 0 && hp.alpha <= 1, "alpha", "(0, 1]");
  check(hp.gamma >= 0 && hp.gamma <= 1, "gamma", "[0, 1]");
  check(hp.epsilon >= 0 && hp.epsilon <= 1, "epsilon", "[0, 1]");
  if (hp.total_episodes < 1) {
    out.push_back({DiagnosticCode::HyperparamRange, Severity::Error,
                   "total_episodes must be at least 1",
                   location_prefix + ".total_episodes"});
  }
  if (hp.beta) check(*hp.beta > 0 && *hp.beta <= 1, "beta", "(0, 1]");
  return out;
}

std::vector<Diagnostic> validate_environment(const EnvironmentSpec& env) {
  std::vector<Diagnostic> out = validate_states(env.states);
  append(out, validate_actions(env.states, env.actions));
  append(out, validate_rewards(env.states, env.rewards));
  append(out, validate_terminals(env.states, env.terminal_states));

  const std::set<std::string> terminal(env.terminal_states.begin(),
                                       env.terminal_states.end());
  const std::size_t rows = std::min(env.actions.size(), env.states.size());
  for (std::size_t s = 0; s < rows; ++s) {
    if (env.actions[s].empty() && !terminal.count(env.states[s])) {
      out.push_back({DiagnosticCode::EmptyActionNonTerminal, Severity::Error,
                     "non-terminal state '" + env.states[s] + "' has no actions",
                     at("actions", s)});
    }
  }
  return out;
}

std::vector<Diagnostic> validate_model(const Model& model) {
  std::vector<Diagnostic> out = validate_environment(model_environment(model));
  if (const auto* single = std::get_if<RlmlModel>(&model)) {
    append(out, validate_hyperparameters(single->agent.hyperparameters, "agent"));
  } else {
    const auto& agents = std::get<ComparatorModel>(model).agents;
    for (std::size_t k = 0; k < agents.size(); ++k) {
      append(out, validate_hyperparameters(agents[k].hyperparameters,
                                           at("agents", k)));
    }
  }
  return out;
}

}  // namespace rlml
