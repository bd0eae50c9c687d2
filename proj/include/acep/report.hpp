#pragma once

// Subgroup spec documents and the JSON reports shared by the command line
// front-end and the acceptance run.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acep/closure.hpp"
#include "acep/sdetect.hpp"
#include "json.hpp"

namespace acep {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// {"alphabet": ["x", "y"], "generators": ["xxx", "Yxxxy"]}
struct SubgroupSpec {
  Alphabet alphabet = Alphabet::standard(2);
  std::vector<std::string> texts;
  std::vector<Word> generators;
};

// Input errors. Line and column are 1-based, 0 when unknown.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

SubgroupSpec parse_subgroup_spec(std::string_view text);
SubgroupSpec load_subgroup_spec(const std::string& path);

// Comma-separated words; throws SpecError on symbols outside the alphabet.
std::vector<Word> parse_word_list(const Alphabet& alphabet, std::string_view list);

// The case verdict, overridden by no_ACEP when an S-witness exists.
AcepVerdict final_verdict(const Classification& c, const SResult& s);

struct AnalyzeOptions {
  std::optional<std::size_t> s_bound;
  bool skip_metric = false;
};

struct Analysis {
  StallingsGraph graph = StallingsGraph::trivial(2);
  Classification classification;
  SResult s;
  Constants constants;
  AcepVerdict verdict = AcepVerdict::undetermined;
  std::optional<OmegaFamily> omega;  // unset with skip_metric
};

Analysis analyze(const SubgroupSpec& spec, const AnalyzeOptions& options = {});
Json analysis_json(const SubgroupSpec& spec, const Analysis& a);

// gamma.dot, core.dot, product.dot and dotted.dot. Throws std::runtime_error
// when a file cannot be written.
void write_dot_files(const SubgroupSpec& spec, const Analysis& a,
                     const std::string& dir);

Json metric_json(const SubgroupSpec& spec, const std::vector<Word>& words);

struct ClosureOptions {
  SearchBudget search;
  QuotientLimits limits;
};

struct ClosureOutcome {
  Json json;
  bool all_resolved = true;
};

// For N = <<relators>>: per target, a Positive certificate for <<N>>_F, a
// Negative one through a quotient of F, and, when the listed generators are a
// free basis of H containing the target and relators, a Negative one for
// <<N>>_H through a quotient of H. A target is resolved once its membership
// in <<N>>_F is settled either way.
ClosureOutcome closure_report(const SubgroupSpec& spec,
                              const std::vector<Word>& relators,
                              const std::vector<Word>& targets,
                              const ClosureOptions& options = {});

}  // namespace acep
