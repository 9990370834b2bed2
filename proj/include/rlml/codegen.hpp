#pragma once

// Model-to-text generation. Each target owns a root template per model
// kind (single agent, comparator) and one training fragment per algorithm.
// Generated programs are self-contained: environment literals, the SplitMix64
// generator from rng.hpp, the same learners and tie-breaking as engine.hpp,
// and output in the render_result / render_compare format.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rlml/core.hpp"

namespace rlml {

enum class CodegenTarget { Python, Java };

inline constexpr CodegenTarget kAllTargets[] = {CodegenTarget::Python,
                                                CodegenTarget::Java};

// "python_flavor" / "jvm_flavor"; the short forms "python" and "java" are
// accepted by parse_target as well.
std::string_view to_string(CodegenTarget target);
std::optional<CodegenTarget> parse_target(std::string_view name);
// ".py" / ".java"
std::string_view file_extension(CodegenTarget target);

class CodegenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratedProgram {
  std::string filename;  // <ModelName><extension>
  std::string source_text;
};

// Replaces every `{{NAME}}` with vars.at(NAME). Throws CodegenError for a
// placeholder without a value or an unterminated `{{`.
std::string expand_template(std::string_view text,
                            const std::map<std::string, std::string>& vars);

// The model must validate without errors; its environment must be inline
// (file sources resolved by the caller).
GeneratedProgram generate(const RlmlModel& model, CodegenTarget target);
GeneratedProgram generate_comparator(const ComparatorModel& model, CodegenTarget target);
GeneratedProgram generate(const Model& model, CodegenTarget target);

}  // namespace rlml
