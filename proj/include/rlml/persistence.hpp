#pragma once

// Saved-model documents. A trained model can only be reloaded against the
// environment and hyperparameters it was trained with; the fingerprint
// stored in the document enforces that.
//
// {
//   "format_version": 1,
//   "algorithm": "QLearning",
//   "hyperparameters": {"alpha": .., "gamma": .., "epsilon": ..,
//                       "total_episodes": .., "beta": ..?},
//   "fingerprint": "<16 hex digits>",
//   "tables": {"q": [[..]], "visits": [[..]]?}  |  {"v": [..], "h": [[..]]},
//   "episodes_trained": ..,
//   "seed": ..
// }

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rlml/core.hpp"
#include "rlml/engine.hpp"

namespace rlml {

inline constexpr int kModelFormatVersion = 1;

class PersistenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document.
class FormatError : public PersistenceError {
 public:
  using PersistenceError::PersistenceError;
};

class VersionMismatch : public PersistenceError {
 public:
  using PersistenceError::PersistenceError;
};

// The environment or hyperparameters differ from the ones the model was
// trained with.
class FingerprintMismatch : public PersistenceError {
 public:
  using PersistenceError::PersistenceError;
};

struct TrainedModel {
  int format_version = kModelFormatVersion;
  AlgorithmKind algorithm = AlgorithmKind::QLearning;
  Hyperparameters hyperparameters;
  EnvironmentFingerprint fingerprint;
  Tables tables;
  std::int64_t episodes_trained = 0;
  std::uint64_t seed = 0;

  bool operator==(const TrainedModel&) const = default;
};

TrainedModel make_trained_model(const TrainOutcome& outcome, const EnvironmentSpec& env,
                                const Hyperparameters& hp, std::uint64_t seed,
                                std::int64_t episodes_trained);

std::string save_model(const TrainedModel& model);

// Parses and checks format_version; throws FormatError or VersionMismatch.
TrainedModel read_model(std::string_view bytes);

// read_model plus fingerprint(env, hp) == stored fingerprint; throws
// FingerprintMismatch otherwise.
TrainedModel load_model(std::string_view bytes, const EnvironmentSpec& env,
                        const Hyperparameters& hp);

}  // namespace rlml
