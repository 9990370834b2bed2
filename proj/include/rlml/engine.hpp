#pragma once

// Tabular model-free learners over a compiled Mdp.
//
// Every table is n_states x n_states: cell [s][t] holds the value of moving
// from s to t and is only meaningful when t is in allowed(s). Rows of
// terminal states are never written.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rlml/core.hpp"
#include "rlml/mdp.hpp"
#include "rlml/rng.hpp"

namespace rlml {

struct QTable {
  Matrix q;
  // First-visit counts; populated by Monte Carlo only.
  Matrix visits;

  bool operator==(const QTable&) const = default;
};

struct ActorCriticTables {
  std::vector<double> v;  // state values
  Matrix h;               // action preferences

  bool operator==(const ActorCriticTables&) const = default;
};

using Tables = std::variant<QTable, ActorCriticTables>;

Tables initial_tables(AlgorithmKind algorithm, const Mdp& mdp);

// Throws std::invalid_argument when `tables` does not fit `mdp` or
// `algorithm`.
void check_tables(const Tables& tables, AlgorithmKind algorithm, const Mdp& mdp);

// policy[s] is the chosen successor of s; empty for terminal states.
using Policy = std::vector<std::optional<StateIndex>>;

struct TrainOutcome {
  AlgorithmKind algorithm = AlgorithmKind::QLearning;
  Tables tables;
  Policy policy;
  // Discounted return from the start state, one per episode.
  std::vector<double> episode_returns;
  std::size_t steps_total = 0;
  std::string result_text;

  bool operator==(const TrainOutcome&) const = default;
};

// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

// One uniform() draw decides between exploring (uniform over positions)
// and exploiting (argmax). Exploring takes a second draw.
std::size_t epsilon_greedy(std::span<const double> values, double epsilon, Rng& rng);

std::vector<double> softmax(std::span<const double> preferences);

// One uniform() draw, inverse-CDF over `probabilities`.
std::size_t sample(std::span<const double> probabilities, Rng& rng);

// table[s][t] for each t in allowed(s).
std::vector<double> allowed_values(const Matrix& table, const Mdp& mdp, StateIndex s);

// q[s][next] += alpha * (reward + gamma * max_t q[next][t] - q[s][next]),
// where the max is 0 when `done`.
void q_learning_update(QTable& table, const Mdp& mdp, StateIndex s, StateIndex next,
                       double reward, bool done, const Hyperparameters& hp);

// On-policy target q[next][next_choice]; 0 when next_choice is empty
// (transition into a terminal state).
void sarsa_update(QTable& table, StateIndex s, StateIndex next, double reward,
                  std::optional<StateIndex> next_choice, const Hyperparameters& hp);

// One-step actor-critic. `action` is the position taken in allowed(s).
// Returns the TD error.
double actor_critic_update(ActorCriticTables& tables, const Mdp& mdp, StateIndex s,
                           std::size_t action, StateIndex next, double reward,
                           bool done, const Hyperparameters& hp);

struct Transition {
  StateIndex state;
  StateIndex next;
  double reward;
};

// First-visit incremental-mean update from one complete episode.
void monte_carlo_update(QTable& table, std::span<const Transition> episode,
                        double gamma);

// Trains `agent.hyperparameters.total_episodes` episodes. When `initial`
// is given, training continues from those tables.
TrainOutcome train(const Mdp& mdp, const AgentSpec& agent, std::uint64_t seed,
                   std::optional<Tables> initial = std::nullopt);

TrainOutcome train_q_learning(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed);
TrainOutcome train_sarsa(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed);
TrainOutcome train_actor_critic(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed);
TrainOutcome train_monte_carlo(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed);

// Greedy over q (or h for actor-critic); ties go to the lowest position.
Policy derive_policy(const Tables& tables, const Mdp& mdp);

// Visited states from `start` until a terminal state or `cap` steps.
std::vector<StateIndex> rollout(const Mdp& mdp, const Policy& policy, StateIndex start,
                                std::size_t cap);

// Names joined with " -> ".
std::string format_path(const Mdp& mdp, const std::vector<StateIndex>& path);

// Q-Table:                     (Preferences: for actor-critic)
// A: [0.00, 90.00, ...]
//
// Policy:
// A -> B
std::string render_result(const TrainOutcome& outcome, const Mdp& mdp);

}  // namespace rlml
