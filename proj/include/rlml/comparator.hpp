#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlml/core.hpp"
#include "rlml/engine.hpp"
#include "rlml/mdp.hpp"

namespace rlml {

struct CompareEntry {
  std::string label;  // "<Algorithm>#<k>"
  AgentSpec agent;
  std::uint64_t seed = 0;
  TrainOutcome outcome;
  std::int64_t wall_time_ms = 0;
};

struct CompareReport {
  std::vector<CompareEntry> entries;
  // Fingerprint of the shared environment with the first agent's
  // hyperparameters.
  EnvironmentFingerprint env_fingerprint;
};

// Agent k (0-based) trains with seed base_seed + k on one shared Mdp.
// Agents run on separate threads when `parallel` is set; the report is the
// same either way apart from wall times. Throws std::invalid_argument if the
// model has validation errors.
CompareReport run_compare(const ComparatorModel& model, std::uint64_t base_seed,
                          bool parallel = true);

// One block per entry, separated by blank lines:
//   === <label> ===
//   <render_result>
//   wall_time_ms: <n>
std::string render_compare(const CompareReport& report, const Mdp& mdp);

}  // namespace rlml
