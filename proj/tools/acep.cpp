// acep analyze <spec.json> [--dot DIR] [--s-bound N] [--json OUT] [--skip-metric]
// acep closure <spec.json> --relators r1,r2 --target w [--max-factors K] [--max-degree D]
// acep metric  <spec.json> --words w1,w2
//
// Exit codes: 0 success, 1 input error, 2 inconclusive search.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "acep/report.hpp"

namespace {

int emit(const acep::Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "acep: cannot write " << path << "\n";
    return 1;
  }
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congruence extension analysis for subgroups of free groups"};
  app.require_subcommand(1);

  std::string spec_path, json_out, dot_dir, relators, targets, words;
  std::optional<std::size_t> s_bound;
  bool skip_metric = false;
  acep::ClosureOptions closure;

  auto* analyze = app.add_subcommand("analyze", "classify H and compute its constants");
  analyze->add_option("spec", spec_path, "subgroup spec (JSON)")->required();
  analyze->add_option("--dot", dot_dir, "write DOT graphs into this directory");
  analyze->add_option("--s-bound", s_bound, "cycle-length bound for the S-detector");
  analyze->add_option("--json", json_out, "write the report here instead of stdout");
  analyze->add_flag("--skip-metric", skip_metric, "omit the Ω family and automaton");

  auto* close = app.add_subcommand("closure", "certificates for normal-closure membership");
  close->add_option("spec", spec_path, "subgroup spec (JSON)")->required();
  close->add_option("--relators", relators, "comma-separated relators")->required();
  close->add_option("--target", targets, "comma-separated target words")->required();
  close->add_option("--max-factors", closure.search.max_factors, "conjugated factors");
  close->add_option("--max-conjugator", closure.search.max_conjugator, "conjugator length");
  close->add_option("--max-degree", closure.limits.max_degree, "symmetric group degree");
  close->add_option("--seed", closure.limits.seed, "seed for sampled quotients");
  close->add_option("--json", json_out, "write the report here instead of stdout");

  auto* metric = app.add_subcommand("metric", "|w|_H and optimal factorizations");
  metric->add_option("spec", spec_path, "subgroup spec (JSON)")->required();
  metric->add_option("--words", words, "comma-separated words")->required();
  metric->add_option("--json", json_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const acep::SubgroupSpec spec = acep::load_subgroup_spec(spec_path);
    if (analyze->parsed()) {
      const auto a = acep::analyze(spec, {s_bound, skip_metric});
      if (!dot_dir.empty()) acep::write_dot_files(spec, a, dot_dir);
      return emit(acep::analysis_json(spec, a), json_out);
    }
    if (close->parsed()) {
      const auto rels = acep::parse_word_list(spec.alphabet, relators);
      const auto ts = acep::parse_word_list(spec.alphabet, targets);
      const auto out = acep::closure_report(spec, rels, ts, closure);
      const int code = emit(out.json, json_out);
      return code ? code : (out.all_resolved ? 0 : 2);
    }
    const auto ws = acep::parse_word_list(spec.alphabet, words);
    return emit(acep::metric_json(spec, ws), json_out);
  } catch (const acep::SpecError& e) {
    std::cerr << "acep: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "acep: " << e.what() << "\n";
    return 1;
  }
}
