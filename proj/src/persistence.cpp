#include "rlml/persistence.hpp"

#include "json.hpp"

namespace rlml {

using nlohmann::ordered_json;

TrainedModel make_trained_model(const TrainOutcome& outcome, const EnvironmentSpec& env,
                                const Hyperparameters& hp, std::uint64_t seed,
                                std::int64_t episodes_trained) {
  TrainedModel model;
  model.algorithm = outcome.algorithm;
  model.hyperparameters = hp;
  model.fingerprint = fingerprint(env, hp);
  model.tables = outcome.tables;
  model.episodes_trained = episodes_trained;
  model.seed = seed;
  return model;
}

std::string save_model(const TrainedModel& model) {
  const Hyperparameters& hp = model.hyperparameters;
  ordered_json doc;
  doc["format_version"] = model.format_version;
  doc["algorithm"] = std::string(to_string(model.algorithm));
  ordered_json h;
  h["alpha"] = hp.alpha;
  h["gamma"] = hp.gamma;
  h["epsilon"] = hp.epsilon;
  h["total_episodes"] = hp.total_episodes;
  if (hp.beta) h["beta"] = *hp.beta;
  doc["hyperparameters"] = h;
  doc["fingerprint"] = model.fingerprint.hex();
  ordered_json tables;
  if (const auto* q = std::get_if<QTable>(&model.tables)) {
    tables["q"] = q->q;
    if (!q->visits.empty()) tables["visits"] = q->visits;
  } else {
    const auto& ac = std::get<ActorCriticTables>(model.tables);
    tables["v"] = ac.v;
    tables["h"] = ac.h;
  }
  doc["tables"] = tables;
  doc["episodes_trained"] = model.episodes_trained;
  doc["seed"] = model.seed;
  return doc.dump(2) + "\n";
}

namespace {

const ordered_json& field(const ordered_json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(std::string("saved model is missing '") + key + "'");
  }
  return obj.at(key);
}

template <class T>
T get(const ordered_json& obj, const char* key) {
  try {
    return field(obj, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("saved model field '") + key + "': " + e.what());
  }
}

}  // namespace

TrainedModel read_model(std::string_view bytes) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("saved model is not valid JSON: ") + e.what());
  }
  TrainedModel model;
  model.format_version = get<int>(doc, "format_version");
  if (model.format_version != kModelFormatVersion) {
    throw VersionMismatch("saved model has format_version " +
                          std::to_string(model.format_version) + ", expected " +
                          std::to_string(kModelFormatVersion));
  }
  auto algorithm = parse_algorithm(get<std::string>(doc, "algorithm"));
  if (!algorithm) throw FormatError("saved model names an unknown algorithm");
  model.algorithm = *algorithm;

  const ordered_json& h = field(doc, "hyperparameters");
  model.hyperparameters.alpha = get<double>(h, "alpha");
  model.hyperparameters.gamma = get<double>(h, "gamma");
  model.hyperparameters.epsilon = get<double>(h, "epsilon");
  model.hyperparameters.total_episodes = get<std::int64_t>(h, "total_episodes");
  if (h.contains("beta")) model.hyperparameters.beta = get<double>(h, "beta");

  auto fp = EnvironmentFingerprint::from_hex(get<std::string>(doc, "fingerprint"));
  if (!fp) throw FormatError("saved model fingerprint is not 16 hex digits");
  model.fingerprint = *fp;

  const ordered_json& tables = field(doc, "tables");
  if (model.algorithm == AlgorithmKind::ActorCritic) {
    model.tables = ActorCriticTables{get<std::vector<double>>(tables, "v"),
                                     get<Matrix>(tables, "h")};
  } else {
    QTable q{get<Matrix>(tables, "q"), {}};
    if (tables.contains("visits")) q.visits = get<Matrix>(tables, "visits");
    model.tables = std::move(q);
  }
  model.episodes_trained = get<std::int64_t>(doc, "episodes_trained");
  model.seed = get<std::uint64_t>(doc, "seed");
  return model;
}

TrainedModel load_model(std::string_view bytes, const EnvironmentSpec& env,
                        const Hyperparameters& hp) {
  TrainedModel model = read_model(bytes);
  const EnvironmentFingerprint expected = fingerprint(env, hp);
  if (model.fingerprint != expected) {
    throw FingerprintMismatch(
        "saved model fingerprint " + model.fingerprint.hex() +
        " does not match the current environment and hyperparameters (" +
        expected.hex() + "); a saved model cannot be reused once they change");
  }
  return model;
}

}  // namespace rlml
