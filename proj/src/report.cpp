#include "acep/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace acep {

SpecError::SpecError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line ? message + " at line " + std::to_string(line) +
                                    ", column " + std::to_string(column)
                              : message),
      line_(line),
      column_(column) {}

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Best-effort position of a string value for error messages.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::string_view key,
                                           const std::string& value) {
  std::size_t from = text.find("\"" + std::string(key) + "\"");
  if (from == std::string_view::npos) from = 0;
  const std::size_t at = text.find("\"" + value + "\"", from);
  if (at == std::string_view::npos) return {0, 0};
  return line_column(text, at + 1);
}

}  // namespace

SubgroupSpec parse_subgroup_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte ? e.byte - 1 : 0);
    throw SpecError("malformed spec document", line, column);
  }
  if (!doc.is_object()) throw SpecError("spec must be a JSON object", 1, 1);
  for (const char* key : {"alphabet", "generators"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw SpecError(std::string("spec field '") + key + "' must be a list");
    }
  }
  std::vector<std::string> names;
  for (const auto& n : doc["alphabet"]) {
    if (!n.is_string()) throw SpecError("alphabet entries must be strings");
    names.push_back(n.get<std::string>());
  }
  SubgroupSpec spec;
  try {
    spec.alphabet = Alphabet(names);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  for (const auto& g : doc["generators"]) {
    if (!g.is_string()) throw SpecError("generators must be strings");
    const std::string s = g.get<std::string>();
    try {
      spec.generators.push_back(parse_word(spec.alphabet, s));
    } catch (const std::invalid_argument& e) {
      const auto [line, column] = locate(text, "generators", s);
      throw SpecError(std::string("generator \"") + s + "\": " + e.what(), line, column);
    }
    spec.texts.push_back(s);
  }
  return spec;
}

SubgroupSpec load_subgroup_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_subgroup_spec(buf.str());
}

std::vector<Word> parse_word_list(const Alphabet& alphabet, std::string_view list) {
  std::vector<Word> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    std::string item(list.substr(start, end - start));
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    try {
      out.push_back(parse_word(alphabet, item));
    } catch (const std::invalid_argument& e) {
      throw SpecError("word \"" + item + "\": " + e.what());
    }
    start = end + 1;
  }
  return out;
}

AcepVerdict final_verdict(const Classification& c, const SResult& s) {
  if (s.status == SStatus::yes) return AcepVerdict::no_ACEP;
  return c.verdict;
}

Analysis analyze(const SubgroupSpec& spec, const AnalyzeOptions& options) {
  Analysis a;
  a.graph = build_stallings(spec.alphabet.rank(), spec.generators);
  a.classification = classify(a.graph);
  a.s = is_s_subgroup(a.graph, options.s_bound);
  a.constants = constants(a.graph);
  a.verdict = final_verdict(a.classification, a.s);
  if (!options.skip_metric) a.omega = omega(a.graph);
  return a;
}

namespace {

std::string pair_name(const VertexPair& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

Json words_json(const Alphabet& al, const std::vector<Word>& words) {
  Json out = Json::array();
  for (const Word& w : words) out.push_back(format_word(al, w));
  return out;
}

}  // namespace

Json analysis_json(const SubgroupSpec& spec, const Analysis& a) {
  const Alphabet& al = spec.alphabet;
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = "analyze";
  j["input"] = {{"alphabet", al.names()}, {"generators", spec.texts}};
  j["graph"] = {{"vertices", a.graph.vertex_count()},
                {"edges", a.graph.edge_count()},
                {"rank", a.graph.subgroup_rank()},
                {"basis", words_json(al, basis(a.graph).words)}};
  Json inter = Json::array();
  for (const auto& w : a.classification.intersections) {
    Json item = {{"anchor", pair_name(w.anchor)}, {"rank", w.rank}};
    item["generator"] = w.generator ? Json(format_word(al, *w.generator)) : Json();
    item["proper_power"] = w.proper_power;
    inter.push_back(item);
  }
  j["classification"] = {{"case", static_cast<int>(a.classification.label)},
                         {"label", to_string(a.classification.label)},
                         {"malnormal", a.classification.malnormal},
                         {"cyclonormal", a.classification.cyclonormal},
                         {"case_verdict", to_string(a.classification.verdict)},
                         {"intersections", inter}};
  Json s = {{"status", to_string(a.s.status)},
            {"bound", a.s.bound},
            {"exhaustive", a.s.exhaustive}};
  s["witness"] = a.s.witness ? Json{{"w", format_word(al, a.s.witness->w)},
                                    {"a", format_word(al, a.s.witness->a)}}
                             : Json();
  s["pair"] = a.s.pair ? Json{{"v", a.s.pair->v},
                              {"v_prime", a.s.pair->v_prime},
                              {"label", format_word(al, a.s.pair->label.representative())}}
                       : Json();
  j["s_subgroup"] = s;
  j["verdict"] = to_string(a.verdict);
  j["constants"] = {{"diam", a.constants.diam_gamma},
                    {"diam_dotted", a.constants.diam_dotted},
                    {"C", a.constants.c},
                    {"C_H", a.constants.c_h}};
  if (a.omega) {
    Json members = Json::array();
    for (const auto& m : a.omega->members) {
      members.push_back({{"anchor", pair_name(m.anchor)},
                         {"vertices", m.graph.vertex_count()},
                         {"rank", m.graph.subgroup_rank()},
                         {"basis", words_json(al, basis(m.graph).words)}});
    }
    const BallAutomaton ball(*a.omega);
    Json metric = {{"omega", members},
                   {"automaton", {{"states", ball.state_count()},
                                  {"arcs", ball.arc_count()},
                                  {"shortcuts", ball.shortcut_count()}}}};
    const auto warn = normalizer_warning(a.graph, *a.omega);
    metric["normalizer_warning"] = warn ? Json(*warn) : Json();
    j["metric"] = metric;
  }
  return j;
}

void write_dot_files(const SubgroupSpec& spec, const Analysis& a,
                     const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
    out << body;
  };
  const Alphabet& al = spec.alphabet;
  write("gamma.dot", to_dot(a.graph.graph(), al, a.graph.basepoint()));
  const CoreGraph c = core(a.graph);
  std::vector<std::string> names;
  std::optional<Vertex> base;
  for (Vertex v = 0; v < c.source_vertex.size(); ++v) {
    names.push_back(std::to_string(c.source_vertex[v]));
    if (c.source_vertex[v] == a.graph.basepoint()) base = v;
  }
  write("core.dot", to_dot(c.graph, al, base, names));
  for (const bool dotted : {false, true}) {
    const ProductGraph p = product(a.graph, dotted);
    const auto pn = p.pair_names();
    write(dotted ? "dotted.dot" : "product.dot", to_dot(p.graph, al, std::nullopt, pn));
  }
}

Json metric_json(const SubgroupSpec& spec, const std::vector<Word>& words) {
  const Alphabet& al = spec.alphabet;
  const StallingsGraph g = build_stallings(al.rank(), spec.generators);
  const OmegaMetric metric(g);
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = "metric";
  j["input"] = {{"alphabet", al.names()}, {"generators", spec.texts}};
  j["omega_members"] = metric.family().members.size();
  const Constants c = constants(g);
  j["constants"] = {{"diam", c.diam_gamma}, {"C", c.c}, {"C_H", c.c_h}};
  Json rows = Json::array();
  for (const Word& w : words) {
    Json factors = Json::array();
    for (const auto& f : metric.factorize(w)) {
      factors.push_back({{"member", f.member ? Json(*f.member) : Json()},
                         {"word", format_word(al, f.word)}});
    }
    rows.push_back({{"word", format_word(al, w)},
                    {"free_length", w.size()},
                    {"length", metric.length(w)},
                    {"in_H", member(g, w)},
                    {"factorization", factors}});
  }
  j["words"] = rows;
  return j;
}

ClosureOutcome closure_report(const SubgroupSpec& spec,
                              const std::vector<Word>& relators,
                              const std::vector<Word>& targets,
                              const ClosureOptions& options) {
  const Alphabet& al = spec.alphabet;
  const std::size_t rank = al.rank();
  const StallingsGraph h = build_stallings(rank, spec.generators);
  bool relators_in_h = true;
  for (const Word& r : relators) relators_in_h = relators_in_h && member(h, r);
  const bool free_basis = spec.generators.size() == h.subgroup_rank() &&
                          [&] {
                            try {
                              basis_in_generators(h, spec.generators);
                              return true;
                            } catch (const std::invalid_argument&) {
                              return false;
                            }
                          }();
  ClosureOutcome out;
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = "closure";
  j["input"] = {{"alphabet", al.names()}, {"generators", spec.texts}};
  j["relators"] = words_json(al, relators);
  const ClosureSearcher searcher(relators, rank, options.search);
  Json rows = Json::array();
  for (const Word& t : targets) {
    Json row = {{"target", format_word(al, t)}, {"in_H", member(h, t)}};
    const auto pos = searcher.search(t);
    const bool pos_ok = pos && verify_positive(*pos, t, relators);
    row["in_closure_F"] = pos_ok ? Json::parse(certificate_json(al, t, *pos, true, options.search))
                                 : Json();
    std::optional<NegativeCertificate> neg_f;
    if (!pos_ok) neg_f = quotient_nonmember(t, relators, rank, {}, options.limits);
    row["outside_closure_F"] =
        neg_f ? Json::parse(certificate_json(al, t, *neg_f, verify_negative(*neg_f, t, relators),
                                             options.limits))
              : Json();
    std::optional<NegativeCertificate> neg_h;
    if (free_basis && relators_in_h && member(h, t)) {
      neg_h = quotient_nonmember(t, relators, rank, spec.generators, options.limits);
    }
    row["outside_closure_H"] =
        neg_h ? Json::parse(certificate_json(al, t, *neg_h, verify_negative(*neg_h, t, relators),
                                             options.limits))
              : Json();
    const bool resolved = pos_ok || neg_f.has_value();
    row["in_sigma"] = pos_ok && neg_h.has_value();
    row["resolved"] = resolved;
    out.all_resolved = out.all_resolved && resolved;
    rows.push_back(row);
  }
  j["targets"] = rows;
  j["all_resolved"] = out.all_resolved;
  out.json = std::move(j);
  return out;
}

}  // namespace acep
