#include "rlml/textio.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <system_error>
#include <vector>

namespace rlml {

ParseError::ParseError(SourceSpan span, std::string message,
                       std::optional<std::string> expected)
    : std::runtime_error(std::to_string(span.line) + ":" +
                         std::to_string(span.column) + ": " + message),
      span_(span),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

MissingSection::MissingSection(SourceSpan span, std::string key)
    : ParseError(span, "missing section '" + key + "'", key),
      key_(std::move(key)) {}

namespace {

enum class Tok { LBrace, RBrace, LBracket, RBracket, Colon, Comma, Word, String, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Word: return "'" + t.text + "'";
    case Tok::String: return "string literal";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_word_char(char c) {
  switch (c) {
    case ' ': case '\t': case '\r': case '\n': case '\f': case '\v':
    case '{': case '}': case '[': case ']': case ',': case ':': case '#':
    case '"':
      return false;
    default:
      return true;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    Token t;
    t.span = here();
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    auto single = [&](Tok kind) {
      advance();
      t.kind = kind;
      t.text = std::string(1, c);
      t.span.length = 1;
      return t;
    };
    switch (c) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ':': return single(Tok::Colon);
      case ',': return single(Tok::Comma);
      case '"': return string_literal(t);
      default: break;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) advance();
    t.kind = Tok::Word;
    t.text = std::string(text_.substr(start, pos_ - start));
    t.span.length = static_cast<int>(pos_ - start);
    return t;
  }

  SourceSpan here() const {
    SourceSpan s;
    s.line = line_;
    s.column = column_;
    s.offset = pos_;
    return s;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
                 c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  Token string_literal(Token& t) {
    std::size_t start = pos_;
    advance();
    std::string value;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        t.span.length = static_cast<int>(pos_ - start);
        throw ParseError(t.span, "unterminated string literal", "'\"'");
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\' && pos_ + 1 < text_.size() &&
          (text_[pos_ + 1] == '"' || text_[pos_ + 1] == '\\')) {
        advance();
        c = text_[pos_];
      }
      value += c;
      advance();
    }
    t.kind = Tok::String;
    t.text = std::move(value);
    t.span.length = static_cast<int>(pos_ - start);
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

  Model model() {
    Token root = expect_word("'rlml' or 'rlml_comparator'");
    bool comparator;
    if (root.text == "rlml") {
      comparator = false;
    } else if (root.text == "rlml_comparator") {
      comparator = true;
    } else {
      throw ParseError(root.span, "expected 'rlml' or 'rlml_comparator', found " +
                                      describe(root),
                       "'rlml' or 'rlml_comparator'");
    }
    Token name = expect_word("model name");
    if (!is_identifier(name.text)) {
      throw ParseError(name.span, "model name '" + name.text +
                                      "' is not an identifier",
                       "identifier");
    }
    expect(Tok::LBrace, "'{'");

    Token env_kw = expect_word("'environment'");
    if (env_kw.text != "environment") {
      throw ParseError(env_kw.span, "expected 'environment', found " + describe(env_kw),
                       "'environment'");
    }
    InputSource source = InlineSource{};
    EnvironmentSpec env = environment_block(source);

    std::vector<AgentSpec> agents;
    std::vector<SourceSpan> agent_spans;
    while (cur_.kind == Tok::Word && cur_.text == "agent") {
      agent_spans.push_back(cur_.span);
      agents.push_back(agent_block());
    }
    if (cur_.kind != Tok::RBrace) {
      throw ParseError(cur_.span,
                       "expected 'agent' or '}', found " + describe(cur_),
                       "'agent' or '}'");
    }
    if (comparator && agents.size() < 2) {
      throw ParseError(cur_.span, "expected at least 2 agent blocks",
                       "'agent'");
    }
    if (!comparator && agents.size() != 1) {
      SourceSpan where = agents.empty() ? cur_.span : agent_spans[1];
      throw ParseError(where, agents.empty()
                                  ? "expected an agent block"
                                  : "rlml model takes exactly one agent block",
                       agents.empty() ? std::optional<std::string>("'agent'")
                                      : std::optional<std::string>("'}'"));
    }
    advance();
    if (cur_.kind != Tok::End) {
      throw ParseError(cur_.span, "unexpected " + describe(cur_) + " after model",
                       "end of input");
    }
    if (comparator) {
      return ComparatorModel{name.text, std::move(env), std::move(agents),
                             std::move(source)};
    }
    return RlmlModel{name.text, std::move(env), agents.front(), std::move(source)};
  }

  EnvironmentSpec env_file() {
    EnvironmentSpec env;
    std::set<std::string> seen;
    while (cur_.kind != Tok::End) {
      Token key = expect_word("section name");
      if (key.text != "states" && key.text != "actions" && key.text != "rewards" &&
          key.text != "terminal_states") {
        throw ParseError(key.span, "unknown section " + describe(key),
                         "'states', 'actions', 'rewards' or 'terminal_states'");
      }
      if (!seen.insert(key.text).second) {
        throw ParseError(key.span, "duplicate section " + describe(key));
      }
      expect(Tok::Colon, "':'");
      data_entry(key.text, env);
    }
    for (const char* key : {"states", "actions", "rewards", "terminal_states"}) {
      if (!seen.count(key)) throw MissingSection(cur_.span, key);
    }
    return env;
  }

 private:
  EnvironmentSpec environment_block(InputSource& source) {
    expect(Tok::LBrace, "'{'");
    EnvironmentSpec env;
    std::set<std::string> seen;
    while (cur_.kind != Tok::RBrace) {
      Token key = expect_word("environment entry or '}'");
      bool known = key.text == "states" || key.text == "actions" ||
                   key.text == "rewards" || key.text == "terminal_states" ||
                   key.text == "source";
      if (!known) {
        throw ParseError(key.span, "unknown environment entry " + describe(key),
                         "'states', 'actions', 'rewards', 'terminal_states' or "
                         "'source'");
      }
      if (!seen.insert(key.text).second) {
        throw ParseError(key.span, "duplicate environment entry " + describe(key));
      }
      expect(Tok::Colon, "':'");
      if (key.text == "source") {
        Token path = expect(Tok::String, "quoted file path");
        source = FileSource{path.text};
      } else {
        data_entry(key.text, env);
      }
    }
    if (!seen.count("source")) {
      for (const char* key : {"states", "actions", "rewards", "terminal_states"}) {
        if (!seen.count(key)) {
          throw ParseError(cur_.span,
                           std::string("environment is missing '") + key + "'",
                           std::string("'") + key + "'");
        }
      }
    }
    advance();
    return env;
  }

  void data_entry(const std::string& key, EnvironmentSpec& env) {
    if (key == "states") {
      env.states = name_list();
    } else if (key == "terminal_states") {
      env.terminal_states = name_list();
    } else if (key == "actions") {
      env.actions = nested_list<std::int64_t>([this] { return integer(); });
    } else {
      env.rewards = nested_list<double>([this] { return number().first; });
    }
  }

  AgentSpec agent_block() {
    advance();  // 'agent'
    Token algo = expect_word("algorithm name");
    auto kind = parse_algorithm(algo.text);
    if (!kind) {
      throw ParseError(algo.span, "unknown algorithm " + describe(algo),
                       "'QLearning', 'SARSA', 'ActorCritic' or 'MonteCarlo'");
    }
    expect(Tok::LBrace, "'{'");
    AgentSpec agent;
    agent.algorithm = *kind;
    std::set<std::string> seen;
    while (cur_.kind != Tok::RBrace) {
      Token key = expect_word("hyperparameter name or '}'");
      expect(Tok::Colon, "':'");
      if (!seen.insert(key.text).second) {
        throw ParseError(key.span, "duplicate hyperparameter " + describe(key));
      }
      Hyperparameters& hp = agent.hyperparameters;
      if (key.text == "alpha") {
        hp.alpha = number().first;
      } else if (key.text == "gamma") {
        hp.gamma = number().first;
      } else if (key.text == "epsilon") {
        hp.epsilon = number().first;
      } else if (key.text == "total_episodes") {
        hp.total_episodes = integer();
      } else if (key.text == "beta") {
        if (*kind != AlgorithmKind::ActorCritic) {
          throw ParseError(key.span, "'beta' only applies to ActorCritic");
        }
        hp.beta = number().first;
      } else {
        throw ParseError(key.span, "unknown hyperparameter " + describe(key),
                         "'alpha', 'gamma', 'epsilon', 'total_episodes' or 'beta'");
      }
      if (cur_.kind == Tok::Comma) advance();
    }
    for (const char* key : {"alpha", "gamma", "epsilon", "total_episodes"}) {
      if (!seen.count(key)) {
        throw ParseError(cur_.span,
                         std::string("agent is missing hyperparameter '") + key + "'",
                         std::string("'") + key + "'");
      }
    }
    advance();
    return agent;
  }

  std::vector<std::string> name_list() {
    expect(Tok::LBracket, "'['");
    std::vector<std::string> out;
    if (cur_.kind == Tok::RBracket) {
      advance();
      return out;
    }
    while (true) {
      out.push_back(expect_word("state name").text);
      if (cur_.kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBracket, "',' or ']'");
      return out;
    }
  }

  template <class T, class Item>
  std::vector<std::vector<T>> nested_list(Item item) {
    expect(Tok::LBracket, "'['");
    std::vector<std::vector<T>> rows;
    if (cur_.kind == Tok::RBracket) {
      advance();
      return rows;
    }
    while (true) {
      expect(Tok::LBracket, "'['");
      std::vector<T> row;
      if (cur_.kind != Tok::RBracket) {
        while (true) {
          row.push_back(item());
          if (cur_.kind == Tok::Comma) {
            advance();
            continue;
          }
          break;
        }
      }
      expect(Tok::RBracket, "',' or ']'");
      rows.push_back(std::move(row));
      if (cur_.kind == Tok::Comma) {
        advance();
        continue;
      }
      expect(Tok::RBracket, "',' or ']'");
      return rows;
    }
  }

  std::pair<double, SourceSpan> number() {
    Token t = expect_word("number");
    double value = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last || !std::isfinite(value)) {
      throw ParseError(t.span, "expected a number, found " + describe(t), "number");
    }
    return {value, t.span};
  }

  std::int64_t integer() {
    Token t = expect_word("integer");
    std::int64_t value = 0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last) {
      throw ParseError(t.span, "expected an integer, found " + describe(t), "integer");
    }
    return value;
  }

  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) {
      throw ParseError(cur_.span, "expected " + what + ", found " + describe(cur_),
                       what);
    }
    return advance();
  }

  Token expect_word(const std::string& what) { return expect(Tok::Word, what); }

  Token advance() {
    Token prev = std::move(cur_);
    cur_ = lexer_.next();
    return prev;
  }

  Lexer lexer_;
  Token cur_;
};

void print_names(std::string& out, const std::vector<std::string>& names) {
  out += '[';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  out += ']';
}

template <class T, class Fmt>
void print_row(std::string& out, const std::vector<T>& row, Fmt fmt) {
  out += '[';
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ", ";
    out += fmt(row[i]);
  }
  out += ']';
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

// Data entries at the given indentation, one per line.
void print_entries(std::string& out, const EnvironmentSpec& env,
                   const std::string& indent) {
  out += indent + "states: ";
  print_names(out, env.states);
  out += '\n';

  out += indent + "actions: [";
  for (std::size_t i = 0; i < env.actions.size(); ++i) {
    if (i) out += ", ";
    print_row(out, env.actions[i], [](std::int64_t v) { return std::to_string(v); });
  }
  out += "]\n";

  out += indent + "rewards: [";
  if (!env.rewards.empty()) {
    out += '\n';
    for (std::size_t i = 0; i < env.rewards.size(); ++i) {
      out += indent + "  ";
      print_row(out, env.rewards[i], [](double v) { return format_number(v); });
      if (i + 1 < env.rewards.size()) out += ',';
      out += '\n';
    }
    out += indent;
  }
  out += "]\n";

  out += indent + "terminal_states: ";
  print_names(out, env.terminal_states);
  out += '\n';
}

void print_agent(std::string& out, const AgentSpec& agent) {
  const Hyperparameters& hp = agent.hyperparameters;
  out += "  agent ";
  out += to_string(agent.algorithm);
  out += " {\n";
  out += "    alpha: " + format_number(hp.alpha) + '\n';
  out += "    gamma: " + format_number(hp.gamma) + '\n';
  out += "    epsilon: " + format_number(hp.epsilon) + '\n';
  out += "    total_episodes: " + std::to_string(hp.total_episodes) + '\n';
  if (hp.beta) out += "    beta: " + format_number(*hp.beta) + '\n';
  out += "  }\n";
}

}  // namespace

Model parse_model(std::string_view text) { return Parser(text).model(); }

EnvironmentSpec parse_env_file(std::string_view text) {
  return Parser(text).env_file();
}

std::string print_model(const Model& model) {
  std::string out;
  const bool comparator = std::holds_alternative<ComparatorModel>(model);
  out += comparator ? "rlml_comparator " : "rlml ";
  out += model_name(model);
  out += " {\n  environment {\n";
  if (const auto* file = std::get_if<FileSource>(&model_input_source(model))) {
    out += "    source: " + quote(file->path) + '\n';
  }
  print_entries(out, model_environment(model), "    ");
  out += "  }\n";
  for (const AgentSpec& agent : model_agents(model)) print_agent(out, agent);
  out += "}\n";
  return out;
}

std::string print_env_file(const EnvironmentSpec& env) {
  std::string out;
  print_entries(out, env, "");
  return out;
}

}  // namespace rlml
