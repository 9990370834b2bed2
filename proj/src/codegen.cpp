#include "rlml/codegen.hpp"

#include <set>
#include <vector>

#include "codegen_java.hpp"
#include "codegen_python.hpp"
#include "rlml/validator.hpp"

namespace rlml {

std::string_view to_string(CodegenTarget target) {
  switch (target) {
    case CodegenTarget::Python: return "python_flavor";
    case CodegenTarget::Java: return "jvm_flavor";
  }
  return "?";
}

std::optional<CodegenTarget> parse_target(std::string_view name) {
  if (name == "python_flavor" || name == "python") return CodegenTarget::Python;
  if (name == "jvm_flavor" || name == "java") return CodegenTarget::Java;
  return std::nullopt;
}

std::string_view file_extension(CodegenTarget target) {
  return target == CodegenTarget::Python ? ".py" : ".java";
}

std::string expand_template(std::string_view text,
                            const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      return out;
    }
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw CodegenError("unterminated placeholder in template");
    }
    std::string key(text.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it == vars.end()) throw CodegenError("no value for placeholder '" + key + "'");
    out.append(text.substr(pos, open - pos));
    out.append(it->second);
    pos = close + 2;
  }
}

namespace {

// Float literal valid in both Python and Java.
std::string float_literal(double v) {
  std::string text = format_number(v);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

template <class T, class Fmt>
std::string seq(const std::vector<T>& items, Fmt fmt, std::string_view open,
                std::string_view close) {
  std::string out(open);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fmt(items[i]);
  }
  out += close;
  return out;
}

struct Syntax {
  std::string_view open;   // list/array opener
  std::string_view close;
  std::string_view row_indent;
};

constexpr Syntax kPythonSyntax{"[", "]", "    "};
constexpr Syntax kJavaSyntax{"{", "}", "        "};

std::string names_literal(const std::vector<std::string>& names, const Syntax& syn) {
  return seq(names, quoted, syn.open, syn.close);
}

std::string actions_literal(const EnvironmentSpec& env, const Syntax& syn) {
  return seq(
      env.actions,
      [&](const std::vector<std::int64_t>& row) {
        return seq(row, [](std::int64_t i) { return std::to_string(i); }, syn.open,
                   syn.close);
      },
      syn.open, syn.close);
}

std::string rewards_literal(const EnvironmentSpec& env, const Syntax& syn) {
  std::string out(syn.open);
  out += '\n';
  for (const auto& row : env.rewards) {
    out += syn.row_indent;
    out += seq(row, float_literal, syn.open, syn.close);
    out += ",\n";
  }
  out += syn.row_indent.substr(4);
  out += syn.close;
  return out;
}

std::string_view python_trainer(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::QLearning: return "train_q_learning";
    case AlgorithmKind::SARSA: return "train_sarsa";
    case AlgorithmKind::ActorCritic: return "train_actor_critic";
    case AlgorithmKind::MonteCarlo: return "train_monte_carlo";
  }
  throw CodegenError("unsupported algorithm");
}

std::string_view java_trainer(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::QLearning: return "trainQLearning";
    case AlgorithmKind::SARSA: return "trainSarsa";
    case AlgorithmKind::ActorCritic: return "trainActorCritic";
    case AlgorithmKind::MonteCarlo: return "trainMonteCarlo";
  }
  throw CodegenError("unsupported algorithm");
}

std::string_view fragment(CodegenTarget target, AlgorithmKind kind) {
  namespace py = templates::python;
  namespace jv = templates::java;
  const bool p = target == CodegenTarget::Python;
  switch (kind) {
    case AlgorithmKind::QLearning: return p ? py::kQLearning : jv::kQLearning;
    case AlgorithmKind::SARSA: return p ? py::kSarsa : jv::kSarsa;
    case AlgorithmKind::ActorCritic: return p ? py::kActorCritic : jv::kActorCritic;
    case AlgorithmKind::MonteCarlo: return p ? py::kMonteCarlo : jv::kMonteCarlo;
  }
  throw CodegenError("unsupported algorithm");
}

std::string python_hyperparameters(const Hyperparameters& hp) {
  return "{\"alpha\": " + float_literal(hp.alpha) +
         ", \"gamma\": " + float_literal(hp.gamma) +
         ", \"epsilon\": " + float_literal(hp.epsilon) +
         ", \"total_episodes\": " + std::to_string(hp.total_episodes) +
         ", \"beta\": " + float_literal(hp.critic_rate()) + "}";
}

std::string java_hyperparameters(const Hyperparameters& hp) {
  return "new Hyper(" + float_literal(hp.alpha) + ", " + float_literal(hp.gamma) + ", " +
         float_literal(hp.epsilon) + ", " + float_literal(hp.critic_rate()) + ", " +
         std::to_string(hp.total_episodes) + "L)";
}

bool is_java_keyword(std::string_view name) {
  static const std::set<std::string_view> keywords = {
      "abstract", "assert",     "boolean",   "break",      "byte",      "case",
      "catch",    "char",       "class",     "const",      "continue",  "default",
      "do",       "double",     "else",      "enum",       "extends",   "final",
      "finally",  "float",      "for",       "goto",       "if",        "implements",
      "import",   "instanceof", "int",       "interface",  "long",      "native",
      "new",      "package",    "private",   "protected",  "public",    "return",
      "short",    "static",     "strictfp",  "super",      "switch",    "synchronized",
      "this",     "throw",      "throws",    "transient",  "try",       "void",
      "volatile", "while",      "true",      "false",      "null",      "var",
      "record",   "yield",      "_"};
  return keywords.count(name) > 0;
}

void check_generatable(const Model& model, CodegenTarget target) {
  if (std::holds_alternative<FileSource>(model_input_source(model))) {
    throw CodegenError("environment source file must be resolved before generation");
  }
  auto diagnostics = validate_model(model);
  if (has_errors(diagnostics)) {
    std::string message = "model is invalid:";
    for (const Diagnostic& d : diagnostics) {
      if (d.severity == Severity::Error) message += "\n" + render(d);
    }
    throw CodegenError(message);
  }
  if (target == CodegenTarget::Java && is_java_keyword(model_name(model))) {
    throw CodegenError("model name '" + model_name(model) + "' is a Java keyword");
  }
}

std::map<std::string, std::string> root_vars(const Model& model, CodegenTarget target) {
  const Syntax& syn = target == CodegenTarget::Python ? kPythonSyntax : kJavaSyntax;
  const EnvironmentSpec& env = model_environment(model);
  std::map<std::string, std::string> vars;
  vars["MODEL_NAME"] = model_name(model);
  vars["FILENAME"] = model_name(model) + std::string(file_extension(target));
  vars["STATES"] = names_literal(env.states, syn);
  vars["ACTIONS"] = actions_literal(env, syn);
  vars["REWARDS"] = rewards_literal(env, syn);
  vars["TERMINALS"] = names_literal(env.terminal_states, syn);

  std::set<AlgorithmKind> used;
  for (const AgentSpec& a : model_agents(model)) used.insert(a.algorithm);
  std::string algorithms;
  for (AlgorithmKind kind : kAllAlgorithms) {
    if (used.count(kind)) algorithms += fragment(target, kind);
  }
  vars["ALGORITHMS"] = algorithms;
  return vars;
}

}  // namespace

GeneratedProgram generate(const RlmlModel& model, CodegenTarget target) {
  check_generatable(model, target);
  auto vars = root_vars(model, target);
  std::map<std::string, std::string> entry;
  const Hyperparameters& hp = model.agent.hyperparameters;
  if (target == CodegenTarget::Python) {
    entry["HYPERPARAMETERS"] = python_hyperparameters(hp);
    entry["TRAINER"] = python_trainer(model.agent.algorithm);
    vars["ENTRY"] = expand_template(templates::python::kEntrySingle, entry);
  } else {
    entry["HYPERPARAMETERS"] = java_hyperparameters(hp);
    entry["TRAINER"] = java_trainer(model.agent.algorithm);
    vars["ENTRY"] = expand_template(templates::java::kEntrySingle, entry);
  }
  const auto root =
      target == CodegenTarget::Python ? templates::python::kRoot : templates::java::kRoot;
  return {vars["FILENAME"], expand_template(root, vars)};
}

GeneratedProgram generate_comparator(const ComparatorModel& model, CodegenTarget target) {
  check_generatable(model, target);
  auto vars = root_vars(model, target);
  std::map<std::string, std::string> entry;
  if (target == CodegenTarget::Python) {
    std::string agents;
    for (std::size_t k = 0; k < model.agents.size(); ++k) {
      const AgentSpec& a = model.agents[k];
      agents += "    (\"" + std::string(to_string(a.algorithm)) + "#" + std::to_string(k) +
                "\", " + std::string(python_trainer(a.algorithm)) + ", " +
                python_hyperparameters(a.hyperparameters) + "),\n";
    }
    entry["AGENTS"] = agents;
    vars["ENTRY"] = expand_template(templates::python::kEntryComparator, entry);
  } else {
    std::vector<std::string> labels, trainers, hypers;
    for (std::size_t k = 0; k < model.agents.size(); ++k) {
      const AgentSpec& a = model.agents[k];
      labels.push_back(quoted(std::string(to_string(a.algorithm)) + "#" + std::to_string(k)));
      trainers.push_back(model.name + "::" + std::string(java_trainer(a.algorithm)));
      hypers.push_back(java_hyperparameters(a.hyperparameters));
    }
    auto same = [](const std::string& s) { return s; };
    entry["LABELS"] = seq(labels, same, "{", "}");
    entry["TRAINERS"] = seq(trainers, same, "{", "}");
    entry["HYPERPARAMETERS"] = seq(hypers, same, "{", "}");
    vars["ENTRY"] = expand_template(templates::java::kEntryComparator, entry);
  }
  const auto root =
      target == CodegenTarget::Python ? templates::python::kRoot : templates::java::kRoot;
  return {vars["FILENAME"], expand_template(root, vars)};
}

GeneratedProgram generate(const Model& model, CodegenTarget target) {
  if (const auto* single = std::get_if<RlmlModel>(&model)) return generate(*single, target);
  return generate_comparator(std::get<ComparatorModel>(model), target);
}

}  // namespace rlml
