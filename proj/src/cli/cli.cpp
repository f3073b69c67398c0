#include "sublim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

namespace sublim::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error("config field '" + field + "': " + what), field_(std::move(field)) {}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  if (horizon < 16) throw ConfigError("horizon", "must be at least 16");
  if (eps_grid.empty()) throw ConfigError("eps_grid", "must not be empty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || !std::isfinite(eps_grid[i]))
      throw ConfigError("eps_grid", "values must be strictly positive");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
      throw ConfigError("eps_grid", "values must be strictly decreasing");
  }
  if (sequence.builtin == "constant" && candidate.empty())
    throw ConfigError("candidate", "required for a constant sequence");
}

namespace {

template <typename T>
T get_field(const json& j, const std::string& key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key, e.what());
  }
}

std::vector<Vector> parse_rows(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of rows");
  std::vector<Vector> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) throw ConfigError(field, "each row must be a non-empty array of numbers");
    Vector v;
    for (const auto& x : row) {
      if (!x.is_number()) throw ConfigError(field, "non-numeric entry");
      v.push_back(x.get<double>());
    }
    if (!rows.empty() && v.size() != rows.front().size()) throw ConfigError(field, "rows differ in length");
    rows.push_back(std::move(v));
  }
  return rows;
}

json rows_to_json(const std::vector<Vector>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(r);
  return out;
}

Ideal parse_ideal(const json& j) {
  const json spec = j.is_string() ? json{{"kind", j}} : j;
  if (!spec.is_object()) throw ConfigError("ideal", "expected a kind string or an object");
  const auto kind_name = get_field<std::string>(spec, "kind", "ideal.");
  const auto kind = parse_ideal_kind(kind_name);
  if (!kind) throw ConfigError("ideal.kind", "unknown ideal '" + kind_name + "' (finite, density, blocks)");
  Ideal ideal;
  ideal.kind = *kind;
  if (spec.contains("tau")) ideal.tau = get_field<double>(spec, "tau", "ideal.");
  if (spec.contains("stabilization_window"))
    ideal.stabilization_window = get_field<double>(spec, "stabilization_window", "ideal.");
  if (spec.contains("block_window")) ideal.block_window = get_field<double>(spec, "block_window", "ideal.");
  if (spec.contains("trend_slack")) ideal.trend_slack = get_field<double>(spec, "trend_slack", "ideal.");
  try {
    ideal.validate();
  } catch (const Error& e) {
    throw ConfigError("ideal", e.what());
  }
  return ideal;
}

json ideal_to_json(const Ideal& i) {
  return {{"kind", i.name()},
          {"tau", i.tau},
          {"stabilization_window", i.stabilization_window},
          {"block_window", i.block_window},
          {"trend_slack", i.trend_slack}};
}

SequenceSpec parse_sequence(const json& j) {
  if (!j.is_object()) throw ConfigError("sequence", "expected an object");
  SequenceSpec s;
  if (j.contains("builtin")) {
    s.builtin = get_field<std::string>(j, "builtin", "sequence.");
    if (s.builtin == "example33") {
      if (j.contains("variant")) {
        const auto name = get_field<std::string>(j, "variant", "sequence.");
        const auto v = sequences::parse_variant(name);
        if (!v) throw ConfigError("sequence.variant", "unknown variant '" + name + "' (printed, amended)");
        s.variant = *v;
      }
    } else if (s.builtin == "constant") {
      if (!j.contains("basis")) throw ConfigError("sequence.basis", "required for a constant sequence");
      s.basis = parse_rows(j.at("basis"), "sequence.basis");
    } else if (s.builtin != "example36") {
      throw ConfigError("sequence.builtin", "unknown built-in '" + s.builtin + "' (example33, example36, constant)");
    }
    return s;
  }
  if (!j.contains("family")) throw ConfigError("sequence", "needs either 'builtin' or 'family'");
  const auto family = get_field<std::string>(j, "family", "sequence.");
  if (family != "rotation") throw ConfigError("sequence.family", "unknown family '" + family + "' (rotation)");
  sequences::RotationFamily f;
  if (j.contains("name")) f.name = get_field<std::string>(j, "name", "sequence.");
  if (j.contains("tilted")) f.tilted = get_field<std::size_t>(j, "tilted", "sequence.");
  if (j.contains("amplitude")) f.amplitude = get_field<double>(j, "amplitude", "sequence.");
  if (j.contains("decay")) {
    const auto name = get_field<std::string>(j, "decay", "sequence.");
    const auto d = sequences::parse_decay(name);
    if (!d) throw ConfigError("sequence.decay", "unknown decay '" + name + "'");
    f.decay = *d;
  }
  if (j.contains("ratio")) f.ratio = get_field<double>(j, "ratio", "sequence.");
  if (j.contains("spike_block") && !j.at("spike_block").is_null())
    f.spike_block = get_field<std::size_t>(j, "spike_block", "sequence.");
  if (j.contains("twist")) f.twist = get_field<bool>(j, "twist", "sequence.");
  if (j.contains("certified")) f.certified = get_field<bool>(j, "certified", "sequence.");
  s.family = f;
  return s;
}

json sequence_to_json(const SequenceSpec& s) {
  if (!s.builtin.empty()) {
    json j{{"builtin", s.builtin}};
    if (s.builtin == "example33") j["variant"] = sequences::to_string(s.variant);
    if (s.builtin == "constant") j["basis"] = rows_to_json(s.basis);
    return j;
  }
  const auto& f = *s.family;
  json j{{"family", "rotation"},   {"name", f.name},   {"tilted", f.tilted}, {"amplitude", f.amplitude},
         {"decay", to_string(f.decay)}, {"ratio", f.ratio}, {"twist", f.twist}, {"certified", f.certified}};
  j["spike_block"] = f.spike_block ? json(*f.spike_block) : json(nullptr);
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  static const std::vector<std::string> known{"sequence", "candidate", "ideal", "horizon", "eps_grid", "output"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown key");

  ExperimentConfig c;
  if (!j.contains("sequence")) throw ConfigError("sequence", "missing");
  c.sequence = parse_sequence(j.at("sequence"));
  if (j.contains("candidate")) c.candidate = parse_rows(j.at("candidate"), "candidate");
  if (c.sequence.family) {
    if (c.candidate.empty()) throw ConfigError("candidate", "required for a rotation family");
    c.sequence.family->candidate = c.candidate;
  }
  if (j.contains("ideal")) c.ideal = parse_ideal(j.at("ideal"));
  if (j.contains("horizon")) {
    const auto& h = j.at("horizon");
    if (!h.is_number_integer() || h.get<long long>() < 0) throw ConfigError("horizon", "expected a natural number");
    c.horizon = h.get<std::size_t>();
  }
  if (j.contains("eps_grid")) c.eps_grid = get_field<std::vector<double>>(j, "eps_grid", "");
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    if (o.contains("report")) c.report_path = get_field<std::string>(o, "report", "output.");
    if (o.contains("trace")) c.trace_path = get_field<std::string>(o, "trace", "output.");
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"sequence", sequence_to_json(c.sequence)},
         {"horizon", c.horizon},
         {"eps_grid", c.eps_grid},
         {"output", {{"report", c.report_path}, {"trace", c.trace_path}}}};
  if (!c.candidate.empty()) j["candidate"] = rows_to_json(c.candidate);
  if (c.ideal) j["ideal"] = ideal_to_json(*c.ideal);
  return j;
}

std::vector<ExperimentConfig> parse_manifest(const json& j) {
  if (!j.is_object() || !j.contains("battery")) return {parse_config(j)};
  const auto& entries = j.at("battery");
  if (!entries.is_array() || entries.empty()) throw ConfigError("battery", "expected a non-empty array");
  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    json entry = entries[i];
    for (const char* shared : {"ideal", "horizon", "eps_grid"})
      if (j.contains(shared) && !entry.contains(shared)) entry[shared] = j.at(shared);
    try {
      out.push_back(parse_config(entry));
    } catch (const ConfigError& e) {
      throw ConfigError("battery[" + std::to_string(i) + "]." + e.field(), e.what());
    }
  }
  return out;
}

Experiment build_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto& s = c.sequence;
  std::optional<sequences::BuiltinExample> ex;
  if (s.builtin == "example33") {
    ex = sequences::example33(s.variant);
  } else if (s.builtin == "example36") {
    ex = sequences::example36();
  } else if (s.builtin == "constant") {
    const Subspace u = orthonormalize(s.basis);
    const Subspace v = orthonormalize(c.candidate);
    ex = sequences::BuiltinExample{sequences::constant(u), v, Ideal::finite()};
  } else {
    ex = sequences::rotation_family(*s.family);
  }
  Experiment e{ex->sequence, ex->candidate, c.ideal.value_or(ex->recommended_ideal)};
  if (!c.candidate.empty() && s.builtin != "constant" && !s.family) {
    e.candidate = orthonormalize(c.candidate);
    e.sequence.exceptional_certificate = {};  // certificates are tied to the built-in's own V
  }
  return e;
}

// ---------------------------------------------------------------------------
// Traces and reports

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string trace_csv(const PointwiseTraces& t) {
  std::string out = "n,gap,crit2_max_i,crit3_min_i,crit4_min_i,crit5_max_i\n";
  for (std::size_t n = 1; n <= t.horizon; ++n) {
    auto fold = [&](std::size_t c, bool take_max) {
      double acc = t.per_basis[c].front()[n - 1];
      for (const auto& row : t.per_basis[c]) acc = take_max ? std::max(acc, row[n - 1]) : std::min(acc, row[n - 1]);
      return acc;
    };
    out += std::to_string(n);
    out += ',' + fmt17(t.gap()[n - 1]);
    out += ',' + fmt17(fold(1, true));
    out += ',' + fmt17(fold(2, false));
    out += ',' + fmt17(fold(3, false));
    out += ',' + fmt17(fold(4, true));
    out += '\n';
  }
  return out;
}

namespace {

json verdict_to_json(const IdealVerdict& v) {
  json j{{"status", to_string(v.status)},
         {"mode", to_string(v.mode)},
         {"rule", v.rule},
         {"count", v.count},
         {"final_density", v.final_density},
         {"distinct_blocks", v.distinct_blocks.size()},
         {"evidence", v.evidence()}};
  j["last_member"] = v.last_member ? json(*v.last_member) : json(nullptr);
  return j;
}

json criterion_to_json(const CriterionResult& c, std::span<const double> eps_grid) {
  json rows = json::array();
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    json basis = json::array();
    for (const auto& b : c.per_basis) basis.push_back(verdict_to_json(b.per_eps[e].verdict));
    rows.push_back({{"epsilon", eps_grid[e]}, {"status", to_string(c.combined[e])}, {"basis", basis}});
  }
  return {{"id", criterion_id(c.criterion)},
          {"name", criterion_name(c.criterion)},
          {"candidate", criterion_candidate(c.criterion)},
          {"per_eps", rows},
          {"overall", to_string(c.overall)}};
}

}  // namespace

json report_to_json(const ConvergenceReport& r) {
  json j;
  j["sequence"] = r.sequence;
  j["ideal"] = ideal_to_json(r.ideal);
  j["horizon"] = r.horizon;
  j["eps_grid"] = r.eps_grid;
  json criteria = json::array();
  for (const auto& c : r.criteria) criteria.push_back(criterion_to_json(c, r.eps_grid));
  j["criteria"] = criteria;
  if (r.theorem36) {
    j["theorem36"] = criterion_to_json(*r.theorem36, r.eps_grid);
    j["theorem36"]["implication_holds"] = r.theorem36_implication_holds().value_or(true);
  }
  j["agreement"] = r.agreement;
  j["consistent"] = r.consistent();
  j["overall"] = to_string(r.overall);
  return j;
}

ReportVerdicts summarize(const ConvergenceReport& r) {
  ReportVerdicts s;
  s.overall = r.overall;
  auto add = [&s](const CriterionResult& c) {
    s.criteria[criterion_id(c.criterion)] = c.overall;
    s.per_eps[criterion_id(c.criterion)] = c.combined;
  };
  for (const auto& c : r.criteria) add(c);
  if (r.theorem36) add(*r.theorem36);
  return s;
}

ReportVerdicts parse_report(const json& j) {
  auto verdict = [](const json& x, const std::string& field) {
    const auto v = parse_verdict(x.get<std::string>());
    if (!v) throw ConfigError(field, "unknown verdict");
    return *v;
  };
  auto membership = [](const std::string& s) {
    for (Membership m : {Membership::InIdeal, Membership::NotInIdeal, Membership::Inconclusive})
      if (to_string(m) == s) return m;
    throw ConfigError("status", "unknown membership '" + s + "'");
  };
  ReportVerdicts s;
  s.overall = verdict(j.at("overall"), "overall");
  std::vector<json> criteria(j.at("criteria").begin(), j.at("criteria").end());
  if (j.contains("theorem36")) criteria.push_back(j.at("theorem36"));
  for (const auto& c : criteria) {
    const auto id = c.at("id").get<std::string>();
    s.criteria[id] = verdict(c.at("overall"), "criteria.overall");
    auto& rows = s.per_eps[id];
    for (const auto& row : c.at("per_eps")) rows.push_back(membership(row.at("status").get<std::string>()));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Matrix files

std::vector<Vector> read_matrix(std::istream& in) {
  std::vector<Vector> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Vector row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw Error("line " + std::to_string(line_no) + ": not a number: '" + tok + "'");
      row.push_back(x);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw DimensionError("line " + std::to_string(line_no) + ": row length differs from the first row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("matrix has no rows");
  return rows;
}

std::vector<Vector> read_matrix_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  try {
    return read_matrix(in);
  } catch (const Error& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Runs

namespace {

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Converges:
      return kConverges;
    case Verdict::DoesNotConverge:
      return kDoesNotConverge;
    case Verdict::Inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
}

void print_summary(const ConvergenceReport& r, std::ostream& out) {
  out << "sequence " << r.sequence << "  ideal " << r.ideal.name() << "  horizon " << r.horizon << "\n";
  out << std::left << std::setw(8) << "crit";
  for (double e : r.eps_grid) {
    std::ostringstream h;
    h << "eps=" << e;
    out << std::setw(14) << h.str();
  }
  out << "overall\n";
  auto line = [&](const CriterionResult& c) {
    out << std::setw(8) << criterion_id(c.criterion);
    for (Membership m : c.combined) out << std::setw(14) << to_string(m);
    out << to_string(c.overall) << "\n";
  };
  for (const auto& c : r.criteria) line(c);
  if (r.theorem36) line(*r.theorem36);
  out << "criteria agree: " << (r.consistent() ? "yes" : "no");
  if (auto held = r.theorem36_implication_holds()) out << "  thm36 implication: " << (*held ? "holds" : "VIOLATED");
  out << "\noverall: " << to_string(r.overall) << "\n";
}

ConvergenceReport run_one(const ExperimentConfig& c, const std::filesystem::path& report_path,
                          const std::filesystem::path& trace_path) {
  const Experiment e = build_experiment(c);
  const PointwiseTraces traces = evaluate_traces(e.sequence, e.candidate, c.horizon);
  ConvergenceReport r = assemble_report(e.sequence.name, traces, e.sequence.exceptional_certificate, e.ideal,
                                        c.eps_grid, kEquivalentCriteria, true);

  write_file(report_path, report_to_json(r).dump(2) + "\n");
  write_file(trace_path, trace_csv(traces));
  return r;
}

}  // namespace

RunOutcome run_analyze(const ExperimentConfig& c, const std::filesystem::path& out_dir, std::ostream& out) {
  RunOutcome o;
  o.reports.push_back(run_one(c, out_dir / c.report_path, out_dir / c.trace_path));
  print_summary(o.reports.back(), out);
  o.exit_code = verdict_exit(o.reports.back().overall);
  return o;
}

RunOutcome run_suite(const std::vector<ExperimentConfig>& configs, const std::filesystem::path& out_dir,
                     std::ostream& out) {
  RunOutcome o;
  bool all_consistent = true;
  json summary = json::array();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& c = configs[i];
    std::filesystem::path report = out_dir / c.report_path;
    std::filesystem::path trace = out_dir / c.trace_path;
    if (configs.size() > 1) {
      char prefix[16];
      std::snprintf(prefix, sizeof prefix, "%03zu_", i);
      report = out_dir / (prefix + c.report_path);
      trace = out_dir / (prefix + c.trace_path);
    }
    o.reports.push_back(run_one(c, report, trace));
    const auto& r = o.reports.back();
    print_summary(r, out);
    all_consistent = all_consistent && r.consistent();
    summary.push_back({{"index", i},
                       {"sequence", r.sequence},
                       {"ideal", r.ideal.name()},
                       {"overall", to_string(r.overall)},
                       {"consistent", r.consistent()}});
  }
  if (configs.size() > 1) write_file(out_dir / "suite_summary.json", summary.dump(2) + "\n");
  out << "suite: " << configs.size() << " run(s), criteria " << (all_consistent ? "agree" : "DISAGREE") << "\n";
  o.exit_code = all_consistent ? 0 : kDoesNotConverge;
  return o;
}

int run_gap(const std::filesystem::path& u_path, const std::filesystem::path& v_path, std::ostream& out) {
  const auto u_rows = read_matrix_file(u_path);
  const auto v_rows = read_matrix_file(v_path);
  if (u_rows.size() != v_rows.size() || u_rows.front().size() != v_rows.front().size())
    throw DimensionError("basis files must have the same number of rows and columns");
  const double g = gap(orthonormalize(u_rows), orthonormalize(v_rows));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", g);
  out << buf << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// argv

namespace {

struct SharedFlags {
  std::string sequence;
  std::string config;
  std::optional<std::size_t> horizon;
  std::string eps;
  std::string ideal;
  std::optional<double> tau;
  std::string out_dir = ".";
  std::string variant;
};

void add_shared(CLI::App* sub, SharedFlags& f) {
  sub->add_option("sequence", f.sequence, "built-in sequence: example33 | example36");
  sub->add_option("--config", f.config, "experiment config (JSON)");
  sub->add_option("--horizon", f.horizon, "number of indices to evaluate (>= 16)");
  sub->add_option("--eps", f.eps, "comma-separated, strictly decreasing epsilon grid");
  sub->add_option("--ideal", f.ideal, "finite | density | blocks")->check(CLI::IsMember({"finite", "density", "blocks"}));
  sub->add_option("--tau", f.tau, "density threshold for the density ideal");
  sub->add_option("--out-dir", f.out_dir, "directory for report and trace files");
  sub->add_option("--variant", f.variant, "example33 variant: printed | amended")
      ->check(CLI::IsMember({"printed", "amended"}));
}

std::vector<double> parse_eps(const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("eps_grid", "cannot parse '" + tok + "'");
    }
  }
  return out;
}

std::vector<ExperimentConfig> configs_from_flags(const SharedFlags& f) {
  std::vector<ExperimentConfig> configs;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("--config", "cannot open " + f.config);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("--config", e.what());
    }
    configs = parse_manifest(j);
  } else {
    if (f.sequence.empty()) throw ConfigError("sequence", "give a built-in name or --config");
    ExperimentConfig c;
    if (f.sequence != "example33" && f.sequence != "example36")
      throw ConfigError("sequence", "unknown built-in '" + f.sequence + "'");
    c.sequence.builtin = f.sequence;
    configs.push_back(c);
  }
  for (auto& c : configs) {
    if (f.horizon) c.horizon = *f.horizon;
    if (!f.eps.empty()) c.eps_grid = parse_eps(f.eps);
    if (!f.variant.empty()) {
      if (c.sequence.builtin != "example33") throw ConfigError("--variant", "only applies to example33");
      c.sequence.variant = *sequences::parse_variant(f.variant);
    }
    if (!f.ideal.empty()) {
      Ideal ideal = c.ideal.value_or(Ideal{});
      ideal.kind = *parse_ideal_kind(f.ideal);
      c.ideal = ideal;
    }
    if (f.tau) {
      Ideal ideal = c.ideal.value_or(Ideal::density());
      ideal.tau = *f.tau;
      try {
        ideal.validate();
      } catch (const Error& e) {
        throw ConfigError("--tau", e.what());
      }
      c.ideal = ideal;
    }
    c.validate();
  }
  return configs;
}

void describe_example(const std::string& name, std::ostream& out) {
  sequences::BuiltinExample ex = [&] {
    if (name == "example33") return sequences::example33(sequences::Example33Variant::Amended);
    if (name == "example36") return sequences::example36();
    throw ConfigError("sequence", "unknown built-in '" + name + "'");
  }();
  out << ex.sequence.name << ": k = " << ex.sequence.dim << " in R^" << ex.sequence.ambient_dim
      << ", recommended ideal " << ex.recommended_ideal.name() << "\n";
  out << "n,gap\n";
  for (std::size_t n = 1; n <= 8; ++n) out << n << "," << fmt17(gap(ex.sequence.at(n), ex.candidate)) << "\n";
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gap between subspaces and ideal convergence of subspace sequences"};
  app.require_subcommand(1);

  SharedFlags analyze_flags;
  SharedFlags suite_flags;
  auto* analyze = app.add_subcommand("analyze", "evaluate all five criteria; exit code from criterion (i)");
  add_shared(analyze, analyze_flags);
  auto* suite = app.add_subcommand("suite", "evaluate all criteria; exit 0 iff they agree");
  add_shared(suite, suite_flags);

  std::string gap_u;
  std::string gap_v;
  auto* gap_cmd = app.add_subcommand("gap", "print the gap between span(rows of U) and span(rows of V)");
  gap_cmd->add_option("basisU", gap_u, "row-per-vector file")->required();
  gap_cmd->add_option("basisV", gap_v, "row-per-vector file")->required();

  std::string example_name;
  auto* example = app.add_subcommand("example", "list or describe a built-in sequence");
  example->add_option("name", example_name, "example33 | example36");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*analyze) {
      const auto configs = configs_from_flags(analyze_flags);
      if (configs.size() != 1) throw ConfigError("battery", "analyze takes a single experiment; use suite");
      return run_analyze(configs.front(), analyze_flags.out_dir, out).exit_code;
    }
    if (*suite) return run_suite(configs_from_flags(suite_flags), suite_flags.out_dir, out).exit_code;
    if (*gap_cmd) return run_gap(gap_u, gap_v, out);
    if (*example) {
      if (example_name.empty()) {
        out << "example33  lines in R^3; converges under the block ideal only (variants: amended, printed)\n"
            << "example36  span{e1} against span{e2} in R^2; never converges\n";
      } else {
        describe_example(example_name, out);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }
  return kUsageError;
}

}  // namespace sublim::cli
