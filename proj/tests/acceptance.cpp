// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rlml/cli.hpp"
#include "rlml/codegen.hpp"
#include "rlml/comparator.hpp"
#include "rlml/engine.hpp"
#include "rlml/mdp.hpp"
#include "rlml/persistence.hpp"
#include "rlml/textio.hpp"
#include "rlml/validator.hpp"
#include "support/support.hpp"

namespace fs = std::filesystem;
using namespace rlml;
using namespace rlml::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << "\n    " << what;
    }
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int number, const std::string& title, double limit_seconds,
               const std::function<void(Check&)>& body) {
  Check check;
  auto start = Clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0) {
    check.expect(seconds < limit_seconds, "runtime " + std::to_string(seconds) +
                                              " s exceeds " + std::to_string(limit_seconds) +
                                              " s");
  }
  if (!check.ok) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3f s", seconds);
  std::cout << (check.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title
            << " (" << timing << ")" << check.notes.str() << "\n";
}

StateIndex idx(const Mdp& mdp, const std::string& name) { return mdp.index_of(name).value(); }

// Every non-terminal start reaches `goal` within `max_steps` moves.
void expect_reaches(Check& c, const Mdp& mdp, const Policy& policy, const std::string& goal,
                    std::size_t max_steps, const std::string& who) {
  for (StateIndex s : mdp.start_states()) {
    auto path = rollout(mdp, policy, s, mdp.step_cap());
    c.expect(mdp.name(path.back()) == goal && path.size() - 1 <= max_steps,
             who + ": rollout " + format_path(mdp, path) + " does not reach " + goal +
                 " within " + std::to_string(max_steps) + " steps");
  }
}

std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("wall_time_ms:", 0) != 0) out += line + "\n";
  }
  return out;
}

std::string run_cli_capture(const std::vector<std::string>& args, int* code = nullptr) {
  std::vector<std::string> argv{"rlml"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  int rc = cli::run_cli(argv, out, err);
  if (code) *code = rc;
  return out.str();
}

bool have_python() { return std::system("python3 -c pass > /dev/null 2>&1") == 0; }

std::string run_process(const std::string& command) {
  std::string out;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  ::pclose(pipe);
  return out;
}

}  // namespace

int main() {
  criterion(1, "path finding Q-learning learns A -> B -> C", 1.0, [](Check& c) {
    auto model = std::get<RlmlModel>(load_corpus("path_finding.rlml"));
    c.expect(model.environment == path_finding_env(), "corpus environment differs");
    c.expect(model.agent.hyperparameters == default_hyperparameters(), "hyperparameters differ");
    Mdp mdp = compile(model.environment);
    auto out = train(mdp, model.agent, 42);
    c.expect(out.policy[idx(mdp, "A")] == idx(mdp, "B"), "policy(A) != B");
    c.expect(out.policy[idx(mdp, "B")] == idx(mdp, "C"), "policy(B) != C");
    expect_reaches(c, mdp, out.policy, "C", 5, "QLearning");
  });

  criterion(2, "QLearning, SARSA and ActorCritic all reach C", 3.0, [](Check& c) {
    auto model = std::get<ComparatorModel>(load_corpus("path_finding_compare.rlml"));
    Mdp mdp = compile(model.environment);
    auto report = run_compare(model, 0);
    c.expect(report.entries.size() == 3, "expected 3 agents");
    for (const auto& e : report.entries) {
      expect_reaches(c, mdp, e.outcome.policy, "C", mdp.step_cap(), e.label);
    }
  });

  criterion(3, "simple game agents avoid E and F and reach C", 2.0, [](Check& c) {
    auto model = std::get<ComparatorModel>(load_corpus("simple_game.rlml"));
    Mdp mdp = compile(model.environment);
    const std::set<StateIndex> danger = {idx(mdp, "E"), idx(mdp, "F")};
    auto report = run_compare(model, 0);
    for (const auto& e : report.entries) {
      for (StateIndex s = 0; s < mdp.n_states(); ++s) {
        if (danger.count(s) || !e.outcome.policy[s]) continue;
        c.expect(!danger.count(*e.outcome.policy[s]),
                 e.label + ": " + mdp.name(s) + " -> " + mdp.name(*e.outcome.policy[s]));
      }
      expect_reaches(c, mdp, e.outcome.policy, "C", mdp.step_cap(), e.label);
    }
  });

  criterion(4, "frozen lake policy never steps into a hole", 2.0, [](Check& c) {
    auto model = std::get<RlmlModel>(load_corpus("frozen_lake.rlml"));
    Mdp mdp = compile(model.environment);
    std::set<StateIndex> holes;
    for (const char* h : {"F", "H", "L", "M"}) holes.insert(idx(mdp, h));
    auto out = train(mdp, model.agent, 0);
    for (StateIndex s = 0; s < mdp.n_states(); ++s) {
      if (out.policy[s] && holes.count(*out.policy[s])) {
        c.expect(false, mdp.name(s) + " -> " + mdp.name(*out.policy[s]));
      }
    }
  });

  criterion(5, "Q-learning matches value iteration on 50 random MDPs", 20.0, [](Check& c) {
    int passed = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
      Rng gen(1000 + k);
      EnvironmentSpec env = random_environment(gen);
      Hyperparameters hp;
      hp.alpha = 0.1;
      hp.epsilon = 0.2;
      hp.gamma = k % 2 ? 0.9 : 0.5;
      hp.total_episodes = 5000;
      Mdp mdp = compile(env);
      Oracle oracle = value_iteration(env, hp.gamma);
      auto out = train_q_learning(mdp, hp, k);
      bool match = oracle.residual < 1e-10;
      for (StateIndex s : mdp.start_states()) {
        const auto& allowed = mdp.allowed(s);
        std::size_t pos = 0;
        while (allowed[pos] != *out.policy[s]) ++pos;
        auto optimal = oracle.optimal_set(s);
        if (std::find(optimal.begin(), optimal.end(), pos) == optimal.end()) match = false;
      }
      if (match) {
        ++passed;
      } else {
        c.notes << "\n    mismatch: environment seed " << 1000 + k << ", training seed " << k;
      }
    }
    c.notes << "\n    " << passed << "/50 matched";
    c.expect(passed >= 48, "fewer than 48/50 matched");
  });

  criterion(6, "validator accepts the reference values and rejects each mutation", 0,
            [](Check& c) {
    const EnvironmentSpec env = path_finding_env();
    c.expect(validate_states(env.states).empty(), "states rejected");
    c.expect(validate_actions(env.states, env.actions).empty(), "actions rejected");
    c.expect(validate_rewards(env.states, env.rewards).empty(), "rewards rejected");
    c.expect(validate_terminals(env.states, env.terminal_states).empty(), "terminals rejected");
    c.expect(validate_model(Model{path_finding_model()}).empty(), "model rejected");

    auto only = [&](const std::vector<Diagnostic>& ds, DiagnosticCode code,
                    const std::string& what) {
      bool ok = !ds.empty() && has_errors(ds);
      for (const auto& d : ds) ok = ok && d.code == code;
      c.expect(ok, what + ": expected only " + std::string(to_string(code)));
    };
    only(validate_states({"A", "A"}), DiagnosticCode::DuplicateState, "duplicate state");
    only(validate_states({}), DiagnosticCode::StatesFormat, "empty states");
    auto five = env.actions;
    five.pop_back();
    only(validate_actions(env.states, five), DiagnosticCode::ActionsShape, "5 action rows");
    auto range = env.actions;
    range[0].push_back(6);
    only(validate_actions(env.states, range), DiagnosticCode::ActionIndexRange, "index 6");
    auto ragged = env.rewards;
    ragged[3].pop_back();
    only(validate_rewards(env.states, ragged), DiagnosticCode::RewardsShape, "ragged row");
    auto seven = env.rewards;
    seven.push_back(std::vector<double>(6, 0.0));
    only(validate_rewards(env.states, seven), DiagnosticCode::RewardsShape, "7 reward rows");
    only(validate_terminals(env.states, {"Z"}), DiagnosticCode::TerminalNotSubset,
         "unknown terminal");
    only(validate_terminals(env.states, {"C", "C"}), DiagnosticCode::TerminalNotSubset,
         "duplicate terminal");
    RlmlModel alpha = path_finding_model();
    alpha.agent.hyperparameters.alpha = 0;
    only(validate_model(Model{alpha}), DiagnosticCode::HyperparamRange, "alpha = 0");
    RlmlModel dead = path_finding_model();
    dead.environment.actions[3].clear();
    only(validate_model(Model{dead}), DiagnosticCode::EmptyActionNonTerminal, "dead state");
  });

  criterion(7, "run and compare output is deterministic", 0, [](Check& c) {
    const std::string single = models_dir() + "/path_finding.rlml";
    const std::string compare = models_dir() + "/path_finding_compare.rlml";
    int code = -1;
    std::string a = run_cli_capture({"run", single, "--seed", "42"}, &code);
    c.expect(code == 0, "run exit code " + std::to_string(code));
    c.expect(a == run_cli_capture({"run", single, "--seed", "42"}), "run output differs");
    std::string x = run_cli_capture({"compare", compare, "--seed", "7"}, &code);
    c.expect(code == 0, "compare exit code " + std::to_string(code));
    std::string y = run_cli_capture({"compare", compare, "--seed", "7", "--sequential"});
    c.expect(!x.empty() && strip_wall_time(x) == strip_wall_time(y), "compare output differs");
  });

  criterion(8, "parse -> print -> parse roundtrip", 0, [](Check& c) {
    for (const char* file : {"path_finding.rlml", "path_finding_file.rlml",
                             "path_finding_compare.rlml", "simple_game.rlml",
                             "frozen_lake.rlml"}) {
      Model m = load_corpus(file);
      c.expect(parse_model(print_model(m)) == m, std::string("corpus ") + file);
    }
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
      Model m = random_model(rng);
      c.expect(!has_errors(validate_model(m)),
               "fuzz model " + std::to_string(i) + " invalid");
      c.expect(parse_model(print_model(m)) == m, "fuzz model " + std::to_string(i));
    }
  });

  criterion(9, "generated sources match goldens; generated Python reaches C", 0,
            [](Check& c) {
    Model model = load_corpus("path_finding.rlml");
    for (CodegenTarget target : kAllTargets) {
      GeneratedProgram p = generate(model, target);
      std::string golden = read_text(golden_dir() + "/" + p.filename);
      c.expect(!golden.empty() && p.source_text == golden, p.filename + " differs from golden");
    }
    if (!have_python()) {
      c.notes << "\n    python3 not found; execution check skipped";
      return;
    }
    fs::path dir = fs::temp_directory_path() / "rlml_acceptance_gen";
    fs::create_directories(dir);
    int code = -1;
    run_cli_capture({"gen", models_dir() + "/path_finding.rlml", "--target", "python_flavor", "-o",
         dir.string()},
        &code);
    c.expect(code == 0, "gen exit code " + std::to_string(code));
    std::string output = run_process("python3 " + (dir / "PathFinding.py").string() + " 42");
    fs::remove_all(dir);

    Mdp mdp = compile(std::get<RlmlModel>(model).environment);
    Policy policy(mdp.n_states());
    std::istringstream in(output.substr(output.find("Policy:\n") + 8));
    std::string from, arrow, to;
    int lines = 0;
    while (in >> from >> arrow >> to) {
      ++lines;
      auto s = mdp.index_of(from), t = mdp.index_of(to);
      bool allowed = s && t && arrow == "->" &&
                     std::find(mdp.allowed(*s).begin(), mdp.allowed(*s).end(), *t) !=
                         mdp.allowed(*s).end();
      c.expect(allowed, "policy line '" + from + " " + arrow + " " + to + "' not allowed");
      if (allowed) policy[*s] = *t;
    }
    c.expect(lines == static_cast<int>(mdp.start_states().size()), "missing policy lines");
    expect_reaches(c, mdp, policy, "C", mdp.step_cap(), "generated Python");
  });

  criterion(10, "save/load roundtrip; altered alpha is rejected", 0, [](Check& c) {
    RlmlModel model = path_finding_model();
    Mdp mdp = compile(model.environment);
    auto out = train(mdp, model.agent, 42);
    auto saved = make_trained_model(out, model.environment, model.agent.hyperparameters, 42,
                                    model.agent.hyperparameters.total_episodes);
    auto loaded = load_model(save_model(saved), model.environment, model.agent.hyperparameters);
    c.expect(loaded.tables == out.tables, "tables differ after roundtrip");
    c.expect(loaded == saved, "document differs after roundtrip");
    Hyperparameters altered = model.agent.hyperparameters;
    altered.alpha = 0.2;
    bool rejected = false;
    try {
      load_model(save_model(saved), model.environment, altered);
    } catch (const FingerprintMismatch&) {
      rejected = true;
    }
    c.expect(rejected, "altered alpha did not raise FingerprintMismatch");
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << "\n";
  return failures ? 1 : 0;
}
