#include <gtest/gtest.h>

#include "rlml/comparator.hpp"
#include "support/support.hpp"

using namespace rlml;
using namespace rlml::testing;

namespace {

ComparatorModel compare_model() {
  return std::get<ComparatorModel>(load_corpus("path_finding_compare.rlml"));
}

std::vector<std::string> headers(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("=== ", 0) == 0) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST(RunCompare, LabelsSeedsAndOrder) {
  auto report = run_compare(compare_model(), 10);
  ASSERT_EQ(report.entries.size(), 3u);
  EXPECT_EQ(report.entries[0].label, "QLearning#0");
  EXPECT_EQ(report.entries[1].label, "SARSA#1");
  EXPECT_EQ(report.entries[2].label, "ActorCritic#2");
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(report.entries[k].seed, 10 + k);
  auto m = compare_model();
  EXPECT_EQ(report.env_fingerprint, fingerprint(m.environment, m.agents[0].hyperparameters));
}

TEST(RunCompare, MatchesSingleRuns) {
  auto m = compare_model();
  Mdp mdp = compile(m.environment);
  auto report = run_compare(m, 3);
  for (std::size_t k = 0; k < m.agents.size(); ++k) {
    EXPECT_EQ(report.entries[k].outcome, train(mdp, m.agents[k], 3 + k));
  }
}

TEST(RunCompare, ParallelEqualsSequential) {
  auto a = run_compare(compare_model(), 5, true);
  auto b = run_compare(compare_model(), 5, false);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    EXPECT_EQ(a.entries[k].outcome, b.entries[k].outcome);
  }
}

TEST(RunCompare, IdenticalAgentsGetDistinctSeeds) {
  ComparatorModel m{"Twins", path_finding_env(), {}, InlineSource{}};
  m.agents.assign(2, {AlgorithmKind::QLearning, default_hyperparameters()});
  auto report = run_compare(m, 0);
  EXPECT_NE(report.entries[0].seed, report.entries[1].seed);
  Mdp mdp = compile(m.environment);
  for (const auto& e : report.entries) {
    for (StateIndex s : mdp.start_states()) {
      const auto& allowed = mdp.allowed(s);
      EXPECT_NE(std::find(allowed.begin(), allowed.end(), *e.outcome.policy[s]), allowed.end());
    }
  }
}

TEST(RunCompare, RejectsInvalidModel) {
  auto m = compare_model();
  m.agents[1].hyperparameters.gamma = 2;
  EXPECT_THROW(run_compare(m, 0), std::invalid_argument);
}

TEST(RenderCompare, Blocks) {
  auto m = compare_model();
  Mdp mdp = compile(m.environment);
  auto report = run_compare(m, 0);
  std::string text = render_compare(report, mdp);
  EXPECT_EQ(headers(text), (std::vector<std::string>{"=== QLearning#0 ===", "=== SARSA#1 ===",
                                                     "=== ActorCritic#2 ==="}));
  std::string expected;
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    if (k) expected += "\n";
    expected += "=== " + report.entries[k].label + " ===\n" + report.entries[k].outcome.result_text +
                "wall_time_ms: " + std::to_string(report.entries[k].wall_time_ms) + "\n";
  }
  EXPECT_EQ(text, expected);
  // Every block's policy sends B to C.
  std::size_t count = 0, pos = 0;
  while ((pos = text.find("\nB -> C\n", pos)) != std::string::npos) ++count, ++pos;
  EXPECT_EQ(count, 3u);
}
