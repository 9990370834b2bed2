#pragma once

// Reading and writing the textual model format.
//
//   model     := ("rlml" | "rlml_comparator") IDENT "{" env_block agent_block+ "}"
//   env_block := "environment" "{" entry* "}"
//   entry     := "states" ":" name_list
//              | "actions" ":" "[" (int_list ("," int_list)*)? "]"
//              | "rewards" ":" "[" (num_list ("," num_list)*)? "]"
//              | "terminal_states" ":" name_list
//              | "source" ":" STRING
//   agent_block := "agent" ALGO "{" (KEY ":" NUMBER ","?)* "}"
//
// `#` starts a comment that runs to the end of the line. With an inline
// environment all four data entries are required; with `source:` they are
// optional and the environment is read from the named file by the caller.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rlml/core.hpp"

namespace rlml {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;
  std::size_t offset = 0;  // byte offset into the input
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string message,
             std::optional<std::string> expected = std::nullopt);

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::optional<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string message_;
  std::optional<std::string> expected_;
};

// A required section of an environment import file is absent.
class MissingSection : public ParseError {
 public:
  MissingSection(SourceSpan span, std::string key);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

Model parse_model(std::string_view text);

// Fixed key order, two-space indentation, shortest round-trip numbers.
std::string print_model(const Model& model);

// Four labelled entries (`states:`, `actions:`, `rewards:`,
// `terminal_states:`) in any order, same value syntax as a model body.
EnvironmentSpec parse_env_file(std::string_view text);

std::string print_env_file(const EnvironmentSpec& env);

}  // namespace rlml
