#include "rlml/cli.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlml/codegen.hpp"
#include "rlml/comparator.hpp"
#include "rlml/engine.hpp"
#include "rlml/mdp.hpp"
#include "rlml/persistence.hpp"
#include "rlml/textio.hpp"
#include "rlml/validator.hpp"

namespace rlml::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Carries an exit code out of a command; the message is already printed.
struct Failure {
  ExitCode code;
};

bool use_color(const std::ostream& err) {
  return &err == &std::cerr && ::isatty(STDERR_FILENO) &&
         std::getenv("RLML_NO_COLOR") == nullptr;
}

[[noreturn]] void fail(std::ostream& err, ExitCode code, const std::string& message) {
  err << "error: " << message << "\n";
  throw Failure{code};
}

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(err, ExitCode::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text, std::ostream& err) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(err, ExitCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(err, ExitCode::IoError, "failed writing '" + path.string() + "'");
}

[[noreturn]] void report_parse_error(std::ostream& err, const std::string& path, const ParseError& e) {
  err << path << ":" << e.span().line << ":" << e.span().column
      << ": parse error: " << e.message() << "\n";
  throw Failure{ExitCode::ParseFailed};
}

EnvironmentSpec read_env_file(const std::string& path, std::ostream& err) {
  std::string text = read_file(path, err);
  try {
    return parse_env_file(text);
  } catch (const ParseError& e) {
    report_parse_error(err, path, e);
  }
}

// Parses the model and resolves its environment: `--env` replaces the whole
// environment block, otherwise a `source:` entry is read relative to the
// model file.
Model load_model_file(const std::string& path, const std::optional<std::string>& env_file,
                      std::ostream& err) {
  std::string text = read_file(path, err);
  Model model;
  try {
    model = parse_model(text);
  } catch (const ParseError& e) {
    report_parse_error(err, path, e);
  }
  std::optional<std::string> source;
  if (env_file) {
    source = *env_file;
  } else if (const auto* file = std::get_if<FileSource>(&model_input_source(model))) {
    fs::path p(file->path);
    if (p.is_relative()) p = fs::path(path).parent_path() / p;
    source = p.string();
  }
  if (source) {
    model_environment(model) = read_env_file(*source, err);
    std::visit([](auto& m) { m.input_source = InlineSource{}; }, model);
  }
  return model;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& err) {
  const bool color = use_color(err);
  for (const Diagnostic& d : diagnostics) {
    std::string line = render(d);
    if (color) {
      const char* code = d.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m";
      auto space = line.find(' ');
      line = code + line.substr(0, space) + "\x1b[0m" + line.substr(space);
    }
    err << line << "\n";
  }
}

void require_valid(const Model& model, std::ostream& err) {
  auto diagnostics = validate_model(model);
  print_diagnostics(diagnostics, err);
  if (has_errors(diagnostics)) throw Failure{ExitCode::ValidationFailed};
}

ordered_json tables_json(const Tables& tables) {
  ordered_json j;
  if (const auto* q = std::get_if<QTable>(&tables)) {
    j["q"] = q->q;
    if (!q->visits.empty()) j["visits"] = q->visits;
  } else {
    const auto& ac = std::get<ActorCriticTables>(tables);
    j["v"] = ac.v;
    j["h"] = ac.h;
  }
  return j;
}

ordered_json policy_json(const Policy& policy, const Mdp& mdp) {
  ordered_json j = ordered_json::object();
  for (StateIndex s = 0; s < policy.size(); ++s) {
    if (policy[s]) j[mdp.name(s)] = mdp.name(*policy[s]);
  }
  return j;
}

std::string returns_csv(const std::vector<double>& returns) {
  std::string out = "episode,return\n";
  for (std::size_t i = 0; i < returns.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_number(returns[i]) + "\n";
  }
  return out;
}

template <class Fn>
ExitCode guarded(std::ostream& err, Fn&& body) {
  try {
    body();
    return ExitCode::Ok;
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::UsageError;
  }
}

std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw CLI::ValidationError("--seed", "expected an unsigned integer or 'random'");
  }
  return value;
}

Format parse_format(const std::string& text) {
  if (text == "text") return Format::Text;
  if (text == "structured") return Format::Structured;
  throw CLI::ValidationError("--format", "expected 'text' or 'structured'");
}

}  // namespace

ExitCode cmd_validate(const ValidateOptions& opts, std::ostream&, std::ostream& err) {
  return guarded(err, [&] {
    Model model = load_model_file(opts.path, opts.env_file, err);
    require_valid(model, err);
  });
}

ExitCode cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Model parsed = load_model_file(opts.path, opts.env_file, err);
    const auto* model = std::get_if<RlmlModel>(&parsed);
    if (!model) {
      fail(err, ExitCode::UsageError,
           "'" + opts.path + "' is a comparator model; use 'rlml compare'");
    }
    require_valid(parsed, err);
    const Mdp mdp = compile(model->environment);
    const Hyperparameters& hp = model->agent.hyperparameters;

    std::optional<Tables> initial;
    std::int64_t prior_episodes = 0;
    if (opts.resume) {
      TrainedModel saved;
      try {
        saved = load_model(read_file(*opts.resume, err), model->environment, hp);
      } catch (const FormatError& e) {
        fail(err, ExitCode::ParseFailed, e.what());
      } catch (const PersistenceError& e) {
        fail(err, ExitCode::ValidationFailed, e.what());
      }
      if (saved.algorithm != model->agent.algorithm) {
        fail(err, ExitCode::ValidationFailed,
             "saved model was trained with " + std::string(to_string(saved.algorithm)));
      }
      initial = saved.tables;
      prior_episodes = saved.episodes_trained;
    }

    TrainOutcome outcome = train(mdp, model->agent, opts.seed, std::move(initial));
    const std::int64_t episodes = prior_episodes + hp.total_episodes;

    if (opts.format == Format::Text) {
      out << outcome.result_text;
    } else {
      ordered_json j;
      j["model"] = model->name;
      j["algorithm"] = std::string(to_string(outcome.algorithm));
      j["seed"] = opts.seed;
      j["episodes_trained"] = episodes;
      j["steps_total"] = outcome.steps_total;
      j["fingerprint"] = fingerprint(model->environment, hp).hex();
      j["tables"] = tables_json(outcome.tables);
      j["policy"] = policy_json(outcome.policy, mdp);
      j["result_text"] = outcome.result_text;
      out << j.dump(2) << "\n";
    }
    if (opts.returns_csv) write_file(*opts.returns_csv, returns_csv(outcome.episode_returns), err);
    if (opts.save) {
      auto saved = make_trained_model(outcome, model->environment, hp, opts.seed, episodes);
      write_file(*opts.save, save_model(saved), err);
    }
  });
}

ExitCode cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Model parsed = load_model_file(opts.path, opts.env_file, err);
    const auto* model = std::get_if<ComparatorModel>(&parsed);
    if (!model) {
      fail(err, ExitCode::UsageError,
           "'" + opts.path + "' is not a comparator model; use 'rlml run'");
    }
    require_valid(parsed, err);
    const Mdp mdp = compile(model->environment);
    CompareReport report = run_compare(*model, opts.seed, !opts.sequential);

    if (opts.format == Format::Text) {
      out << render_compare(report, mdp);
    } else {
      ordered_json j;
      j["model"] = model->name;
      j["seed"] = opts.seed;
      j["env_fingerprint"] = report.env_fingerprint.hex();
      j["entries"] = ordered_json::array();
      for (const CompareEntry& e : report.entries) {
        ordered_json entry;
        entry["label"] = e.label;
        entry["algorithm"] = std::string(to_string(e.agent.algorithm));
        entry["seed"] = e.seed;
        entry["wall_time_ms"] = e.wall_time_ms;
        entry["steps_total"] = e.outcome.steps_total;
        entry["tables"] = tables_json(e.outcome.tables);
        entry["policy"] = policy_json(e.outcome.policy, mdp);
        entry["result_text"] = e.outcome.result_text;
        j["entries"].push_back(entry);
      }
      out << j.dump(2) << "\n";
    }
    if (opts.returns_csv_dir) {
      fs::path dir(*opts.returns_csv_dir);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) fail(err, ExitCode::IoError, "cannot create '" + dir.string() + "'");
      for (const CompareEntry& e : report.entries) {
        write_file(dir / (e.label + ".csv"), returns_csv(e.outcome.episode_returns), err);
      }
    }
  });
}

ExitCode cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto target = parse_target(opts.target);
    if (!target) {
      fail(err, ExitCode::UsageError,
           "unknown target '" + opts.target + "' (expected python_flavor or jvm_flavor)");
    }
    Model model = load_model_file(opts.path, opts.env_file, err);
    require_valid(model, err);
    GeneratedProgram program = generate(model, *target);
    fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(err, ExitCode::IoError, "cannot create '" + dir.string() + "'");
    fs::path file = dir / program.filename;
    write_file(file, program.source_text, err);
    out << file.string() << "\n";
  });
}

ExitCode cmd_rollout(const RolloutOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Model parsed = load_model_file(opts.path, opts.env_file, err);
    const auto* model = std::get_if<RlmlModel>(&parsed);
    if (!model) {
      fail(err, ExitCode::UsageError, "rollout needs a single-agent rlml model");
    }
    require_valid(parsed, err);
    const Mdp mdp = compile(model->environment);

    TrainedModel saved;
    try {
      saved = load_model(read_file(opts.saved_model, err), model->environment,
                         model->agent.hyperparameters);
    } catch (const FormatError& e) {
      fail(err, ExitCode::ParseFailed, e.what());
    } catch (const PersistenceError& e) {
      fail(err, ExitCode::ValidationFailed, e.what());
    }
    if (saved.algorithm != model->agent.algorithm) {
      fail(err, ExitCode::ValidationFailed,
           "saved model was trained with " + std::string(to_string(saved.algorithm)) +
               ", model uses " + std::string(to_string(model->agent.algorithm)));
    }
    try {
      check_tables(saved.tables, saved.algorithm, mdp);
    } catch (const std::invalid_argument& e) {
      fail(err, ExitCode::ValidationFailed, e.what());
    }

    auto start = mdp.index_of(opts.start);
    if (!start) fail(err, ExitCode::UsageError, "unknown state '" + opts.start + "'");
    if (mdp.terminal(*start)) {
      fail(err, ExitCode::UsageError,
           "state '" + opts.start + "' is terminal; choose a non-terminal start state");
    }
    Policy policy = derive_policy(saved.tables, mdp);
    out << format_path(mdp, rollout(mdp, policy, *start, mdp.step_cap())) << "\n";
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toolchain for RLML reinforcement-learning models", "rlml"};
  app.require_subcommand(1);

  ValidateOptions validate;
  auto* v = app.add_subcommand("validate", "Check a model against the language constraints");
  v->add_option("model", validate.path, "Model file (.rlml)")->required();
  v->add_option("--env", validate.env_file, "Environment import file");

  RunOptions run;
  std::string run_seed = "0", run_format = "text";
  auto* r = app.add_subcommand("run", "Train the model's agent and print the result");
  r->add_option("model", run.path, "Model file (.rlml)")->required();
  r->add_option("--seed", run_seed, "Unsigned integer or 'random'")->capture_default_str();
  r->add_option("--env", run.env_file, "Environment import file");
  r->add_option("--save", run.save, "Write the trained model here");
  r->add_option("--resume", run.resume, "Continue training from a saved model");
  r->add_option("--returns-csv", run.returns_csv, "Write per-episode returns as CSV");
  r->add_option("--format", run_format, "text or structured")->capture_default_str();

  CompareOptions compare;
  std::string compare_seed = "0", compare_format = "text";
  auto* c = app.add_subcommand("compare", "Train every agent of a comparator model");
  c->add_option("model", compare.path, "Comparator model file (.rlml)")->required();
  c->add_option("--seed", compare_seed, "Base seed; agent k uses seed + k")
      ->capture_default_str();
  c->add_option("--env", compare.env_file, "Environment import file");
  c->add_option("--format", compare_format, "text or structured")->capture_default_str();
  c->add_option("--returns-csv", compare.returns_csv_dir,
                "Directory for per-agent episode return CSVs");
  c->add_flag("--sequential", compare.sequential, "Train agents one after another");

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a standalone program from a model");
  g->add_option("model", gen.path, "Model file (.rlml)")->required();
  g->add_option("--target", gen.target, "python_flavor (python) or jvm_flavor (java)")
      ->required();
  g->add_option("-o,--out", gen.out_dir, "Output directory")->capture_default_str();
  g->add_option("--env", gen.env_file, "Environment import file");

  RolloutOptions roll;
  auto* o = app.add_subcommand("rollout", "Follow a saved model's greedy policy");
  o->add_option("file", roll.path, "Model file (.rlml)")->required();
  o->add_option("--model", roll.saved_model, "Saved model (JSON)")->required();
  o->add_option("--start", roll.start, "Start state name")->required();
  o->add_option("--env", roll.env_file, "Environment import file");

  std::vector<char*> argv;
  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) storage.emplace_back("rlml");
  for (std::string& a : storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    run.seed = parse_seed(run_seed);
    run.format = parse_format(run_format);
    compare.seed = parse_seed(compare_seed);
    compare.format = parse_format(compare_format);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::UsageError);
  }
  if (run_seed == "random" && r->parsed()) err << "seed: " << run.seed << "\n";
  if (compare_seed == "random" && c->parsed()) err << "seed: " << compare.seed << "\n";

  ExitCode code = ExitCode::UsageError;
  if (v->parsed()) code = cmd_validate(validate, out, err);
  else if (r->parsed()) code = cmd_run(run, out, err);
  else if (c->parsed()) code = cmd_compare(compare, out, err);
  else if (g->parsed()) code = cmd_gen(gen, out, err);
  else if (o->parsed()) code = cmd_rollout(roll, out, err);
  return static_cast<int>(code);
}

}  // namespace rlml::cli
