#include "rlml/engine.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rlml {

namespace {

Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

#ifndef NDEBUG
bool within_bound(const Tables& tables, const Mdp& mdp, double gamma) {
  const auto* q = std::get_if<QTable>(&tables);
  if (!q || gamma >= 1) return true;
  const double bound = mdp.max_abs_reward() / (1 - gamma) * (1 + 1e-12);
  for (const auto& row : q->q) {
    for (double v : row) {
      if (std::abs(v) > bound) return false;
    }
  }
  return true;
}
#endif

void check_matrix(const Matrix& m, std::size_t n, const char* what) {
  if (m.size() != n) throw std::invalid_argument(std::string(what) + " has wrong row count");
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument(std::string(what) + " is not square");
  }
}

struct EpisodeResult {
  double discounted_return = 0;
  std::size_t steps = 0;
};

class ReturnAccumulator {
 public:
  explicit ReturnAccumulator(double gamma) : gamma_(gamma) {}
  void add(double reward) {
    total_ += discount_ * reward;
    discount_ *= gamma_;
  }
  double total() const { return total_; }

 private:
  double gamma_;
  double total_ = 0;
  double discount_ = 1;
};

EpisodeResult q_learning_episode(QTable& t, const Mdp& mdp, const Hyperparameters& hp,
                                 Rng& rng) {
  ReturnAccumulator g(hp.gamma);
  std::size_t steps = 0;
  StateIndex s = mdp.reset(rng);
  while (steps < mdp.step_cap()) {
    auto values = allowed_values(t.q, mdp, s);
    std::size_t a = epsilon_greedy(values, hp.epsilon, rng);
    StepResult r = mdp.step(s, a);
    q_learning_update(t, mdp, s, r.next, r.reward, r.done, hp);
    g.add(r.reward);
    ++steps;
    s = r.next;
    if (r.done) break;
  }
  return {g.total(), steps};
}

EpisodeResult sarsa_episode(QTable& t, const Mdp& mdp, const Hyperparameters& hp,
                            Rng& rng) {
  ReturnAccumulator g(hp.gamma);
  std::size_t steps = 0;
  StateIndex s = mdp.reset(rng);
  std::size_t a = epsilon_greedy(allowed_values(t.q, mdp, s), hp.epsilon, rng);
  while (steps < mdp.step_cap()) {
    StepResult r = mdp.step(s, a);
    std::optional<StateIndex> next_choice;
    std::size_t next_a = 0;
    if (!r.done) {
      next_a = epsilon_greedy(allowed_values(t.q, mdp, r.next), hp.epsilon, rng);
      next_choice = mdp.allowed(r.next)[next_a];
    }
    sarsa_update(t, s, r.next, r.reward, next_choice, hp);
    g.add(r.reward);
    ++steps;
    s = r.next;
    a = next_a;
    if (r.done) break;
  }
  return {g.total(), steps};
}

EpisodeResult actor_critic_episode(ActorCriticTables& t, const Mdp& mdp,
                                   const Hyperparameters& hp, Rng& rng) {
  ReturnAccumulator g(hp.gamma);
  std::size_t steps = 0;
  StateIndex s = mdp.reset(rng);
  while (steps < mdp.step_cap()) {
    auto probs = softmax(allowed_values(t.h, mdp, s));
    std::size_t a = sample(probs, rng);
    StepResult r = mdp.step(s, a);
    actor_critic_update(t, mdp, s, a, r.next, r.reward, r.done, hp);
    g.add(r.reward);
    ++steps;
    s = r.next;
    if (r.done) break;
  }
  return {g.total(), steps};
}

EpisodeResult monte_carlo_episode(QTable& t, const Mdp& mdp, const Hyperparameters& hp,
                                  Rng& rng) {
  ReturnAccumulator g(hp.gamma);
  std::vector<Transition> episode;
  StateIndex s = mdp.reset(rng);
  while (episode.size() < mdp.step_cap()) {
    std::size_t a = epsilon_greedy(allowed_values(t.q, mdp, s), hp.epsilon, rng);
    StepResult r = mdp.step(s, a);
    episode.push_back({s, r.next, r.reward});
    g.add(r.reward);
    s = r.next;
    if (r.done) break;
  }
  monte_carlo_update(t, episode, hp.gamma);
  return {g.total(), episode.size()};
}

}  // namespace

Tables initial_tables(AlgorithmKind algorithm, const Mdp& mdp) {
  const std::size_t n = mdp.n_states();
  switch (algorithm) {
    case AlgorithmKind::ActorCritic:
      return ActorCriticTables{std::vector<double>(n, 0.0), zeros(n)};
    case AlgorithmKind::MonteCarlo:
      return QTable{zeros(n), zeros(n)};
    case AlgorithmKind::QLearning:
    case AlgorithmKind::SARSA:
      break;
  }
  return QTable{zeros(n), {}};
}

void check_tables(const Tables& tables, AlgorithmKind algorithm, const Mdp& mdp) {
  const std::size_t n = mdp.n_states();
  if (algorithm == AlgorithmKind::ActorCritic) {
    const auto* ac = std::get_if<ActorCriticTables>(&tables);
    if (!ac) throw std::invalid_argument("ActorCritic needs value and preference tables");
    if (ac->v.size() != n) throw std::invalid_argument("value table has wrong size");
    check_matrix(ac->h, n, "preference table");
    return;
  }
  const auto* q = std::get_if<QTable>(&tables);
  if (!q) throw std::invalid_argument(std::string(to_string(algorithm)) + " needs a Q-table");
  check_matrix(q->q, n, "Q-table");
  if (algorithm == AlgorithmKind::MonteCarlo) check_matrix(q->visits, n, "visit counts");
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t epsilon_greedy(std::span<const double> values, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return rng.below(values.size());
  return argmax(values);
}

std::vector<double> softmax(std::span<const double> preferences) {
  std::vector<double> out(preferences.size());
  if (preferences.empty()) return out;
  const double top = preferences[argmax(preferences)];
  double total = 0;
  for (std::size_t i = 0; i < preferences.size(); ++i) {
    out[i] = std::exp(preferences[i] - top);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

std::size_t sample(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  return probabilities.size() - 1;
}

std::vector<double> allowed_values(const Matrix& table, const Mdp& mdp, StateIndex s) {
  const auto& allowed = mdp.allowed(s);
  std::vector<double> out;
  out.reserve(allowed.size());
  for (StateIndex t : allowed) out.push_back(table[s][t]);
  return out;
}

void q_learning_update(QTable& table, const Mdp& mdp, StateIndex s, StateIndex next,
                       double reward, bool done, const Hyperparameters& hp) {
  double best_next = 0;
  if (!done) {
    auto values = allowed_values(table.q, mdp, next);
    best_next = values[argmax(values)];
  }
  double& cell = table.q[s][next];
  cell += hp.alpha * (reward + hp.gamma * best_next - cell);
}

void sarsa_update(QTable& table, StateIndex s, StateIndex next, double reward,
                  std::optional<StateIndex> next_choice, const Hyperparameters& hp) {
  const double next_value = next_choice ? table.q[next][*next_choice] : 0.0;
  double& cell = table.q[s][next];
  cell += hp.alpha * (reward + hp.gamma * next_value - cell);
}

double actor_critic_update(ActorCriticTables& tables, const Mdp& mdp, StateIndex s,
                           std::size_t action, StateIndex next, double reward,
                           bool done, const Hyperparameters& hp) {
  const double next_value = done ? 0.0 : tables.v[next];
  const double delta = reward + hp.gamma * next_value - tables.v[s];
  tables.v[s] += hp.critic_rate() * delta;

  const auto& allowed = mdp.allowed(s);
  const auto probs = softmax(allowed_values(tables.h, mdp, s));
  for (std::size_t b = 0; b < allowed.size(); ++b) {
    const double grad = (b == action ? 1.0 : 0.0) - probs[b];
    tables.h[s][allowed[b]] += hp.alpha * delta * grad;
  }
  return delta;
}

void monte_carlo_update(QTable& table, std::span<const Transition> episode,
                        double gamma) {
  if (table.visits.size() != table.q.size()) {
    table.visits.assign(table.q.size(), std::vector<double>(table.q.size(), 0.0));
  }
  // first[t] is true when (state, next) at step t has not occurred earlier.
  std::vector<bool> first(episode.size(), true);
  for (std::size_t t = 0; t < episode.size(); ++t) {
    for (std::size_t u = 0; u < t; ++u) {
      if (episode[u].state == episode[t].state && episode[u].next == episode[t].next) {
        first[t] = false;
        break;
      }
    }
  }
  double g = 0;
  for (std::size_t t = episode.size(); t-- > 0;) {
    const Transition& step = episode[t];
    g = step.reward + gamma * g;
    if (!first[t]) continue;
    double& count = table.visits[step.state][step.next];
    count += 1;
    double& cell = table.q[step.state][step.next];
    cell += (g - cell) / count;
  }
}

TrainOutcome train(const Mdp& mdp, const AgentSpec& agent, std::uint64_t seed,
                   std::optional<Tables> initial) {
  const Hyperparameters& hp = agent.hyperparameters;
  TrainOutcome out;
  out.algorithm = agent.algorithm;
  if (initial) {
    check_tables(*initial, agent.algorithm, mdp);
    out.tables = std::move(*initial);
  } else {
    out.tables = initial_tables(agent.algorithm, mdp);
  }
  Rng rng(seed);
  const auto episodes = hp.total_episodes > 0 ? static_cast<std::size_t>(hp.total_episodes) : 0;
  out.episode_returns.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    EpisodeResult r;
    switch (agent.algorithm) {
      case AlgorithmKind::QLearning:
        r = q_learning_episode(std::get<QTable>(out.tables), mdp, hp, rng);
        break;
      case AlgorithmKind::SARSA:
        r = sarsa_episode(std::get<QTable>(out.tables), mdp, hp, rng);
        break;
      case AlgorithmKind::ActorCritic:
        r = actor_critic_episode(std::get<ActorCriticTables>(out.tables), mdp, hp, rng);
        break;
      case AlgorithmKind::MonteCarlo:
        r = monte_carlo_episode(std::get<QTable>(out.tables), mdp, hp, rng);
        break;
    }
    assert(within_bound(out.tables, mdp, hp.gamma));
    out.episode_returns.push_back(r.discounted_return);
    out.steps_total += r.steps;
  }
  out.policy = derive_policy(out.tables, mdp);
  out.result_text = render_result(out, mdp);
  return out;
}

TrainOutcome train_q_learning(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed) {
  return train(mdp, {AlgorithmKind::QLearning, hp}, seed);
}

TrainOutcome train_sarsa(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed) {
  return train(mdp, {AlgorithmKind::SARSA, hp}, seed);
}

TrainOutcome train_actor_critic(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed) {
  return train(mdp, {AlgorithmKind::ActorCritic, hp}, seed);
}

TrainOutcome train_monte_carlo(const Mdp& mdp, const Hyperparameters& hp, std::uint64_t seed) {
  return train(mdp, {AlgorithmKind::MonteCarlo, hp}, seed);
}

Policy derive_policy(const Tables& tables, const Mdp& mdp) {
  const Matrix& table = std::holds_alternative<QTable>(tables)
                            ? std::get<QTable>(tables).q
                            : std::get<ActorCriticTables>(tables).h;
  Policy policy(mdp.n_states());
  for (StateIndex s = 0; s < mdp.n_states(); ++s) {
    if (mdp.terminal(s)) continue;
    policy[s] = mdp.allowed(s)[argmax(allowed_values(table, mdp, s))];
  }
  return policy;
}

std::vector<StateIndex> rollout(const Mdp& mdp, const Policy& policy, StateIndex start,
                                std::size_t cap) {
  std::vector<StateIndex> path{start};
  StateIndex s = start;
  for (std::size_t step = 0; step < cap; ++step) {
    if (mdp.terminal(s) || !policy.at(s)) break;
    s = *policy[s];
    path.push_back(s);
  }
  return path;
}

std::string format_path(const Mdp& mdp, const std::vector<StateIndex>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += " -> ";
    out += mdp.name(path[i]);
  }
  return out;
}

std::string render_result(const TrainOutcome& outcome, const Mdp& mdp) {
  const bool ac = std::holds_alternative<ActorCriticTables>(outcome.tables);
  const Matrix& table = ac ? std::get<ActorCriticTables>(outcome.tables).h
                           : std::get<QTable>(outcome.tables).q;
  std::string out = ac ? "Preferences:\n" : "Q-Table:\n";
  char buf[64];
  for (StateIndex s = 0; s < mdp.n_states(); ++s) {
    out += mdp.name(s) + ": [";
    for (StateIndex t = 0; t < mdp.n_states(); ++t) {
      if (t) out += ", ";
      std::snprintf(buf, sizeof buf, "%.2f", table[s][t]);
      out += buf;
    }
    out += "]\n";
  }
  out += "\nPolicy:\n";
  for (StateIndex s = 0; s < mdp.n_states(); ++s) {
    if (mdp.terminal(s) || !outcome.policy.at(s)) continue;
    out += mdp.name(s) + " -> " + mdp.name(*outcome.policy[s]) + "\n";
  }
  return out;
}

}  // namespace rlml
