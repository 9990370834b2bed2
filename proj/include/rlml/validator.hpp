#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rlml/core.hpp"

namespace rlml {

enum class DiagnosticCode {
  StatesFormat,
  DuplicateState,
  ActionsShape,
  ActionIndexRange,
  RewardsShape,
  TerminalNotSubset,
  EmptyActionNonTerminal,
  HyperparamRange,
  NoTerminalStates,  // warning only
};

enum class Severity { Error, Warning };

struct Diagnostic {
  DiagnosticCode code;
  Severity severity = Severity::Error;
  std::string message;
  std::string location;  // e.g. "actions[2]"

  bool operator==(const Diagnostic&) const = default;
};

std::string_view to_string(DiagnosticCode code);

// `ERROR <code> at <location>: <message>` (or `WARNING ...`).
std::string render(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

std::vector<Diagnostic> validate_states(const std::vector<std::string>& states);

std::vector<Diagnostic> validate_actions(
    const std::vector<std::string>& states,
    const std::vector<std::vector<std::int64_t>>& actions);

std::vector<Diagnostic> validate_rewards(const std::vector<std::string>& states,
                                         const Matrix& rewards);

std::vector<Diagnostic> validate_terminals(
    const std::vector<std::string>& states,
    const std::vector<std::string>& terminals);

// `location_prefix` names the agent, e.g. "agent" or "agents[1]".
std::vector<Diagnostic> validate_hyperparameters(
    const Hyperparameters& hp, const std::string& location_prefix);

// The four environment checks plus the dead-state check, in document order.
std::vector<Diagnostic> validate_environment(const EnvironmentSpec& env);

// Environment checks followed by every agent's hyperparameters. No
// error-level diagnostics means the model can be compiled and trained.
std::vector<Diagnostic> validate_model(const Model& model);

}  // namespace rlml
