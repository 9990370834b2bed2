#include <gtest/gtest.h>

#include <cmath>

#include "rlml/engine.hpp"
#include "support/support.hpp"

using namespace rlml;
using namespace rlml::testing;

namespace {

constexpr StateIndex A = 0, B = 1, C = 2, D = 3, E = 4;

const Matrix& values(const Tables& t) {
  if (const auto* q = std::get_if<QTable>(&t)) return q->q;
  return std::get<ActorCriticTables>(t).h;
}

}  // namespace

TEST(Argmax, LowestIndexWinsTies) {
  EXPECT_EQ(argmax(std::vector<double>{1, 3, 3, 2}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{0, 0, 0}), 0u);
  EXPECT_EQ(argmax(std::vector<double>{-5, -1}), 1u);
}

TEST(EpsilonGreedy, FullExplorationIsUniform) {
  Rng rng(3);
  std::vector<double> v{5, 1, 1, 1};
  std::vector<int> counts(4);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[epsilon_greedy(v, 1.0, rng)];
  for (int c : counts) EXPECT_NEAR(c / double(n), 0.25, 0.02);
}

TEST(EpsilonGreedy, NoExplorationIsGreedy) {
  Rng rng(3);
  std::vector<double> v{1, 5, 5};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(epsilon_greedy(v, 0.0, rng), 1u);
}

TEST(Softmax, Normalized) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> prefs(1 + rng.below(6));
    for (double& p : prefs) p = (rng.uniform() - 0.5) * 2000;
    auto probs = softmax(prefs);
    double total = 0;
    for (double p : probs) {
      EXPECT_GE(p, 0.0);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  auto even = softmax(std::vector<double>{0, 0});
  EXPECT_DOUBLE_EQ(even[0], 0.5);
}

TEST(Sample, InverseCdf) {
  Rng rng(4);
  std::vector<double> probs{0.2, 0.0, 0.8};
  std::vector<int> counts(3);
  for (int i = 0; i < 10000; ++i) ++counts[sample(probs, rng)];
  EXPECT_EQ(counts[1], 0);
  EXPECT_NEAR(counts[0] / 10000.0, 0.2, 0.02);
}

TEST(QLearningUpdate, HandEvaluated) {
  Mdp mdp = compile(path_finding_env());
  auto table = std::get<QTable>(initial_tables(AlgorithmKind::QLearning, mdp));
  auto hp = default_hyperparameters();
  q_learning_update(table, mdp, B, C, 100, true, hp);
  EXPECT_DOUBLE_EQ(table.q[B][C], 10.0);
  // A -> B bootstraps from max(q[B][A], q[B][C], q[B][E]) = 10.
  q_learning_update(table, mdp, A, B, 0, false, hp);
  EXPECT_DOUBLE_EQ(table.q[A][B], 0.1 * 0.9 * 10.0);
}

TEST(SarsaUpdate, HandEvaluated) {
  auto hp = default_hyperparameters();
  QTable table{Matrix(6, std::vector<double>(6, 0.0)), {}};
  table.q[B][C] = 10;
  table.q[B][E] = 50;
  sarsa_update(table, A, B, 0, C, hp);
  EXPECT_DOUBLE_EQ(table.q[A][B], 0.1 * 0.9 * 10.0);
  sarsa_update(table, B, C, 100, std::nullopt, hp);
  EXPECT_DOUBLE_EQ(table.q[B][C], 10 + 0.1 * (100 - 10));
}

TEST(ActorCriticUpdate, HandEvaluated) {
  Mdp mdp = compile(path_finding_env());
  auto t = std::get<ActorCriticTables>(initial_tables(AlgorithmKind::ActorCritic, mdp));
  auto hp = default_hyperparameters();
  // From B take position 1 (C): delta = 100, uniform policy over 3 moves.
  double delta = actor_critic_update(t, mdp, B, 1, C, 100, true, hp);
  EXPECT_DOUBLE_EQ(delta, 100);
  EXPECT_DOUBLE_EQ(t.v[B], 10);
  EXPECT_NEAR(t.h[B][C], 0.1 * 100 * (1 - 1.0 / 3), 1e-12);
  EXPECT_NEAR(t.h[B][A], -0.1 * 100 / 3, 1e-12);
  EXPECT_NEAR(t.h[B][E], -0.1 * 100 / 3, 1e-12);
  // Separate critic rate.
  hp.beta = 0.5;
  auto u = std::get<ActorCriticTables>(initial_tables(AlgorithmKind::ActorCritic, mdp));
  actor_critic_update(u, mdp, B, 1, C, 100, true, hp);
  EXPECT_DOUBLE_EQ(u.v[B], 50);
}

TEST(MonteCarloUpdate, IncrementalMean) {
  QTable table{Matrix(6, std::vector<double>(6, 0.0)), Matrix(6, std::vector<double>(6, 0.0))};
  std::vector<Transition> first{{B, C, 100}};
  std::vector<Transition> second{{B, C, 50}};
  monte_carlo_update(table, first, 0.9);
  EXPECT_DOUBLE_EQ(table.q[B][C], 100);
  monte_carlo_update(table, second, 0.9);
  EXPECT_DOUBLE_EQ(table.q[B][C], 75);
  EXPECT_DOUBLE_EQ(table.visits[B][C], 2);
}

TEST(MonteCarloUpdate, FirstVisitOnly) {
  QTable table{Matrix(6, std::vector<double>(6, 0.0)), Matrix(6, std::vector<double>(6, 0.0))};
  std::vector<Transition> episode{{A, B, 0}, {B, A, 0}, {A, B, 0}, {B, C, 100}};
  monte_carlo_update(table, episode, 0.9);
  EXPECT_DOUBLE_EQ(table.q[B][C], 100);
  EXPECT_NEAR(table.q[B][A], 81, 1e-12);
  EXPECT_NEAR(table.q[A][B], 72.9, 1e-12);
  EXPECT_DOUBLE_EQ(table.visits[A][B], 1);
}

class AllAlgorithms : public ::testing::TestWithParam<AlgorithmKind> {};

TEST_P(AllAlgorithms, Deterministic) {
  Mdp mdp = compile(path_finding_env());
  AgentSpec agent{GetParam(), default_hyperparameters()};
  EXPECT_EQ(train(mdp, agent, 17), train(mdp, agent, 17));
}

TEST_P(AllAlgorithms, InvariantsOnRandomEnvironments) {
  Rng gen(77);
  for (int i = 0; i < 30; ++i) {
    EnvironmentSpec env = random_environment(gen);
    Mdp mdp = compile(env);
    Hyperparameters hp;
    hp.alpha = 0.3;
    hp.gamma = 0.9;
    hp.epsilon = 0.3;
    hp.total_episodes = 300;
    auto out = train(mdp, {GetParam(), hp}, i);
    const Matrix& table = values(out.tables);
    const double bound = mdp.max_abs_reward() / (1 - hp.gamma) + 1e-9;
    for (StateIndex s = 0; s < mdp.n_states(); ++s) {
      if (mdp.terminal(s)) {
        for (double x : table[s]) EXPECT_EQ(x, 0.0);
        EXPECT_FALSE(out.policy[s]);
        continue;
      }
      ASSERT_TRUE(out.policy[s]);
      const auto& allowed = mdp.allowed(s);
      EXPECT_NE(std::find(allowed.begin(), allowed.end(), *out.policy[s]), allowed.end());
      if (GetParam() != AlgorithmKind::ActorCritic) {
        for (double x : table[s]) EXPECT_LE(std::abs(x), bound);
      }
    }
    if (const auto* ac = std::get_if<ActorCriticTables>(&out.tables)) {
      for (StateIndex s : mdp.start_states()) {
        double total = 0;
        for (double p : softmax(allowed_values(ac->h, mdp, s))) total += p;
        EXPECT_NEAR(total, 1.0, 1e-9);
      }
    }
    EXPECT_EQ(out.episode_returns.size(), static_cast<std::size_t>(hp.total_episodes));
  }
}

TEST_P(AllAlgorithms, PathFindingReachesGoal) {
  Mdp mdp = compile(path_finding_env());
  auto hp = default_hyperparameters();
  hp.total_episodes = 3000;
  for (std::uint64_t seed : {0, 1, 2}) {
    auto out = train(mdp, {GetParam(), hp}, seed);
    for (StateIndex s : mdp.start_states()) {
      auto path = rollout(mdp, out.policy, s, mdp.step_cap());
      EXPECT_EQ(path.back(), C) << to_string(GetParam()) << " seed " << seed;
    }
  }
}

TEST_P(AllAlgorithms, ResumeContinuesFromTables) {
  Mdp mdp = compile(path_finding_env());
  auto hp = default_hyperparameters();
  hp.total_episodes = 1;
  auto first = train(mdp, {GetParam(), hp}, 5);
  auto resumed = train(mdp, {GetParam(), hp}, 6, first.tables);
  auto fresh = train(mdp, {GetParam(), hp}, 6);
  EXPECT_NE(resumed.tables, fresh.tables);
}

INSTANTIATE_TEST_SUITE_P(Engine, AllAlgorithms, ::testing::ValuesIn(kAllAlgorithms),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Train, StepCapWithoutTerminals) {
  auto env = path_finding_env();
  env.terminal_states.clear();
  Mdp mdp = compile(env);
  auto hp = default_hyperparameters();
  hp.total_episodes = 3;
  auto out = train_q_learning(mdp, hp, 0);
  EXPECT_EQ(out.steps_total, 3 * mdp.step_cap());
}

TEST(Train, RejectsMismatchedTables) {
  Mdp mdp = compile(path_finding_env());
  AgentSpec agent{AlgorithmKind::QLearning, default_hyperparameters()};
  EXPECT_THROW(train(mdp, agent, 0, initial_tables(AlgorithmKind::ActorCritic, mdp)),
               std::invalid_argument);
  QTable small{Matrix(2, std::vector<double>(2, 0.0)), {}};
  EXPECT_THROW(train(mdp, agent, 0, Tables{small}), std::invalid_argument);
}

TEST(Rollout, FollowsPolicyAndStopsAtCap) {
  Mdp mdp = compile(path_finding_env());
  Policy policy(6);
  policy[A] = B;
  policy[B] = C;
  EXPECT_EQ(rollout(mdp, policy, A, 10), (std::vector<StateIndex>{A, B, C}));
  EXPECT_EQ(format_path(mdp, rollout(mdp, policy, A, 10)), "A -> B -> C");
  policy[D] = E;
  policy[E] = D;
  EXPECT_EQ(rollout(mdp, policy, D, 3).size(), 4u);
}

TEST(RenderResult, Layout) {
  Mdp mdp = compile(path_finding_env());
  TrainOutcome out;
  QTable t{Matrix(6, std::vector<double>(6, 0.0)), {}};
  t.q[A][B] = 90;
  t.q[B][C] = 100;
  t.q[D][A] = 81.004999;
  t.q[E][B] = -0.001;
  t.q[E][D] = 90;
  t.q[5][C] = 100;
  out.tables = t;
  out.policy = derive_policy(out.tables, mdp);
  EXPECT_EQ(render_result(out, mdp),
            "Q-Table:\n"
            "A: [0.00, 90.00, 0.00, 0.00, 0.00, 0.00]\n"
            "B: [0.00, 0.00, 100.00, 0.00, 0.00, 0.00]\n"
            "C: [0.00, 0.00, 0.00, 0.00, 0.00, 0.00]\n"
            "D: [81.00, 0.00, 0.00, 0.00, 0.00, 0.00]\n"
            "E: [0.00, -0.00, 0.00, 90.00, 0.00, 0.00]\n"
            "F: [0.00, 0.00, 100.00, 0.00, 0.00, 0.00]\n"
            "\n"
            "Policy:\n"
            "A -> B\n"
            "B -> C\n"
            "D -> A\n"
            "E -> D\n"
            "F -> C\n");
}

TEST(RenderResult, ActorCriticHeader) {
  Mdp mdp = compile(path_finding_env());
  auto out = train_actor_critic(mdp, default_hyperparameters(), 0);
  EXPECT_EQ(out.result_text.rfind("Preferences:\n", 0), 0u);
  EXPECT_EQ(out.result_text, render_result(out, mdp));
}
