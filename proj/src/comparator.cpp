#include "rlml/comparator.hpp"

#include <chrono>
#include <future>
#include <stdexcept>

#include "rlml/validator.hpp"

namespace rlml {

namespace {

void train_entry(CompareEntry& entry, const Mdp& mdp) {
  const auto start = std::chrono::steady_clock::now();
  entry.outcome = train(mdp, entry.agent, entry.seed);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  entry.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
}

}  // namespace

CompareReport run_compare(const ComparatorModel& model, std::uint64_t base_seed,
                          bool parallel) {
  auto diagnostics = validate_model(model);
  if (has_errors(diagnostics)) {
    std::string message = "comparator model is invalid:";
    for (const Diagnostic& d : diagnostics) {
      if (d.severity == Severity::Error) message += "\n" + render(d);
    }
    throw std::invalid_argument(message);
  }
  const Mdp mdp = compile(model.environment);

  CompareReport report;
  report.env_fingerprint =
      fingerprint(model.environment, model.agents.front().hyperparameters);
  report.entries.resize(model.agents.size());
  for (std::size_t k = 0; k < model.agents.size(); ++k) {
    CompareEntry& e = report.entries[k];
    e.agent = model.agents[k];
    e.label = std::string(to_string(e.agent.algorithm)) + "#" + std::to_string(k);
    e.seed = base_seed + k;
  }

  if (parallel) {
    std::vector<std::future<void>> jobs;
    for (CompareEntry& e : report.entries) {
      jobs.push_back(std::async(std::launch::async, train_entry, std::ref(e), std::cref(mdp)));
    }
    for (auto& job : jobs) job.get();
  } else {
    for (CompareEntry& e : report.entries) train_entry(e, mdp);
  }
  return report;
}

std::string render_compare(const CompareReport& report, const Mdp& mdp) {
  std::string out;
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const CompareEntry& e = report.entries[k];
    if (k) out += '\n';
    out += "=== " + e.label + " ===\n";
    out += render_result(e.outcome, mdp);
    out += "wall_time_ms: " + std::to_string(e.wall_time_ms) + "\n";
  }
  return out;
}

}  // namespace rlml
