#include "rlml/core.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

namespace rlml {

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::QLearning:
      return "QLearning";
    case AlgorithmKind::SARSA:
      return "SARSA";
    case AlgorithmKind::ActorCritic:
      return "ActorCritic";
    case AlgorithmKind::MonteCarlo:
      return "MonteCarlo";
  }
  return "?";
}

std::optional<AlgorithmKind> parse_algorithm(std::string_view name) {
  for (AlgorithmKind kind : kAllAlgorithms) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

const std::string& model_name(const Model& m) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; },
                    m);
}

const EnvironmentSpec& model_environment(const Model& m) {
  return std::visit(
      [](const auto& x) -> const EnvironmentSpec& { return x.environment; }, m);
}

EnvironmentSpec& model_environment(Model& m) {
  return std::visit([](auto& x) -> EnvironmentSpec& { return x.environment; },
                    m);
}

const InputSource& model_input_source(const Model& m) {
  return std::visit(
      [](const auto& x) -> const InputSource& { return x.input_source; }, m);
}

std::vector<AgentSpec> model_agents(const Model& m) {
  if (const auto* single = std::get_if<RlmlModel>(&m)) return {single->agent};
  return std::get<ComparatorModel>(m).agents;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(text.front())) return false;
  for (char c : text) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::string EnvironmentFingerprint::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::optional<EnvironmentFingerprint> EnvironmentFingerprint::from_hex(
    std::string_view text) {
  if (text.size() != 16) return std::nullopt;
  std::uint64_t value = 0;
  auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
  return EnvironmentFingerprint{value};
}

namespace {

template <class Range, class Fn>
void join(std::string& out, const Range& items, char sep, Fn&& render) {
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    first = false;
    render(out, item);
  }
}

}  // namespace

std::string canonical_form(const EnvironmentSpec& env,
                           const Hyperparameters& hp) {
  std::string out;
  out += "states=";
  join(out, env.states, ',', [](std::string& o, const std::string& s) { o += s; });
  out += "\nactions=";
  join(out, env.actions, ';', [](std::string& o, const auto& row) {
    join(o, row, ',', [](std::string& o2, std::int64_t i) { o2 += std::to_string(i); });
  });
  out += "\nrewards=";
  join(out, env.rewards, ';', [](std::string& o, const auto& row) {
    join(o, row, ',', [](std::string& o2, double v) { o2 += format_number(v); });
  });
  out += "\nterminals=";
  join(out, env.terminal_states, ',',
       [](std::string& o, const std::string& s) { o += s; });
  out += "\nalpha=" + format_number(hp.alpha);
  out += "\ngamma=" + format_number(hp.gamma);
  out += "\nepsilon=" + format_number(hp.epsilon);
  out += "\nbeta=" + format_number(hp.critic_rate());
  out += '\n';
  return out;
}

EnvironmentFingerprint fingerprint(const EnvironmentSpec& env,
                                   const Hyperparameters& hp) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_form(env, hp)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return EnvironmentFingerprint{hash};
}

}  // namespace rlml
