#pragma once

// Domain types shared by every stage of the toolchain: the authored model
// (environment + agents), hyperparameters, and the environment fingerprint
// that binds a saved model to the data it was trained on.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rlml {

using Matrix = std::vector<std::vector<double>>;

enum class AlgorithmKind { QLearning, SARSA, ActorCritic, MonteCarlo };

inline constexpr AlgorithmKind kAllAlgorithms[] = {
    AlgorithmKind::QLearning, AlgorithmKind::SARSA, AlgorithmKind::ActorCritic,
    AlgorithmKind::MonteCarlo};

std::string_view to_string(AlgorithmKind kind);
std::optional<AlgorithmKind> parse_algorithm(std::string_view name);

struct Hyperparameters {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon = 0.1;
  std::int64_t total_episodes = 1000;
  // Critic learning rate; only meaningful for ActorCritic.
  std::optional<double> beta;

  double critic_rate() const { return beta.value_or(alpha); }

  bool operator==(const Hyperparameters&) const = default;
};

struct AgentSpec {
  AlgorithmKind algorithm = AlgorithmKind::QLearning;
  Hyperparameters hyperparameters;

  bool operator==(const AgentSpec&) const = default;
};

// Raw environment exactly as authored. Nothing is checked here; see
// validator.hpp.
struct EnvironmentSpec {
  std::vector<std::string> states;
  // actions[s] lists the indices of the states reachable from s.
  std::vector<std::vector<std::int64_t>> actions;
  // rewards[s][t] is received when moving from s to t.
  Matrix rewards;
  std::vector<std::string> terminal_states;

  bool operator==(const EnvironmentSpec&) const = default;
};

struct InlineSource {
  bool operator==(const InlineSource&) const = default;
};
struct FileSource {
  std::string path;
  bool operator==(const FileSource&) const = default;
};
using InputSource = std::variant<InlineSource, FileSource>;

struct RlmlModel {
  std::string name;
  EnvironmentSpec environment;
  AgentSpec agent;
  InputSource input_source = InlineSource{};

  bool operator==(const RlmlModel&) const = default;
};

struct ComparatorModel {
  std::string name;
  EnvironmentSpec environment;
  std::vector<AgentSpec> agents;
  InputSource input_source = InlineSource{};

  bool operator==(const ComparatorModel&) const = default;
};

using Model = std::variant<RlmlModel, ComparatorModel>;

const std::string& model_name(const Model& m);
const EnvironmentSpec& model_environment(const Model& m);
EnvironmentSpec& model_environment(Model& m);
const InputSource& model_input_source(const Model& m);
std::vector<AgentSpec> model_agents(const Model& m);

bool is_identifier(std::string_view text);

// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

struct EnvironmentFingerprint {
  std::uint64_t hash = 0;

  std::string hex() const;
  static std::optional<EnvironmentFingerprint> from_hex(std::string_view text);

  bool operator==(const EnvironmentFingerprint&) const = default;
};

// Canonical text the fingerprint digests. One `key=value` line each for
// states, actions, rewards, terminals, alpha, gamma, epsilon and beta
// (effective critic rate). total_episodes is left out so a saved model can be
// trained further. List items are joined with ',' and matrix rows with ';'.
// Numbers use format_number.
std::string canonical_form(const EnvironmentSpec& env,
                           const Hyperparameters& hp);

// 64-bit FNV-1a over canonical_form(env, hp).
EnvironmentFingerprint fingerprint(const EnvironmentSpec& env,
                                   const Hyperparameters& hp);

}  // namespace rlml
