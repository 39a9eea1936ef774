#include "dlap/cli.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "dlap/error.hpp"
#include "dlap/generators.hpp"
#include "dlap/io.hpp"
#include "dlap/isoperimetric.hpp"
#include "dlap/operators.hpp"
#include "dlap/spectral.hpp"
#include "dlap/verify.hpp"

namespace dlap::cli {

namespace {

OperatorBase parse_op(const std::string& name) {
  static const std::map<std::string, OperatorBase> names = {
      {"delta", OperatorBase::Delta},
      {"delta-prime", OperatorBase::DeltaPrime},
      {"h", OperatorBase::H},
      {"normalized", OperatorBase::NormalizedDelta},
      {"normalized-prime", OperatorBase::NormalizedDeltaPrime},
      {"normalized-h", OperatorBase::NormalizedH},
  };
  const auto it = names.find(name);
  if (it != names.end()) return it->second;
  const OperatorKind kind = parse_operator_kind(name);
  return kind.base;
}

struct Options {
  std::string input;
  std::string out;
  std::string format = "csv";

  // gen
  std::string family;
  std::size_t n = 3;
  double w = 1.0;
  std::size_t k = 2;
  std::uint64_t seed = 1;
  double wmin = 0.5;
  double wmax = 4.0;
  std::size_t layers = 6;
  std::size_t width = 4;
  double gamma = 2.0;
  double radial = 1.0;
  std::size_t depth = 2;
  std::size_t branching = 2;
  double growth = 1.0;

  // analysis
  double tol = kDefaultKirchhoffTolerance;
  std::string op = "delta";
  std::string operator_in;
  std::string export_operator;
  std::string omega;
  std::string omega_file;
  int angles = 360;
  std::string normalization = "beta";
  std::string mode = "auto";
  std::size_t root = 0;
  std::string levels;
  std::string levels_file;
  std::size_t exact_limit = kMaxExactSubset;
};

void emit(const Options& o, std::ostream& out, const std::string& content) {
  if (o.out.empty()) {
    out << content;
  } else {
    io::write_atomic(o.out, content);
  }
}

std::optional<VertexSubset> read_omega(const Options& o, std::size_t universe) {
  if (!o.omega.empty() && !o.omega_file.empty()) {
    throw Error(ErrorKind::InvalidArgument, "use either --omega or --omega-file");
  }
  if (!o.omega.empty()) return io::parse_subset_json(o.omega, universe);
  if (!o.omega_file.empty()) return io::parse_subset_json(io::read_file(o.omega_file), universe);
  return std::nullopt;
}

void require_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") {
    throw Error(ErrorKind::InvalidArgument, "--format must be csv or json");
  }
}

// Operator from --operator-in, or assembled from the graph (restricted to omega).
Operator load_operator(const Options& o) {
  if (!o.operator_in.empty()) {
    if (!o.input.empty()) throw Error(ErrorKind::InvalidArgument, "give a graph or --operator-in, not both");
    Operator op = io::parse_operator(io::read_file(o.operator_in));
    if (auto omega = read_omega(o, static_cast<std::size_t>(op.dim()))) op = dirichlet(op, *omega);
    return op;
  }
  if (o.input.empty()) throw Error(ErrorKind::InvalidArgument, "missing input graph");
  const DirectedGraph g = io::read_graph_json(o.input);
  Operator op = assemble(g, parse_op(o.op));
  if (auto omega = read_omega(o, g.size())) op = dirichlet(op, *omega);
  return op;
}

void maybe_export(const Options& o, const Operator& op) {
  if (o.export_operator.empty()) return;
  const bool json = o.export_operator.size() >= 5 &&
                    o.export_operator.compare(o.export_operator.size() - 5, 5, ".json") == 0;
  io::write_atomic(o.export_operator, json ? io::operator_to_json(op) : io::operator_to_csv(op));
}

int cmd_gen(const Options& o, std::ostream& out) {
  DirectedGraph g = [&] {
    if (o.family == "cycle") return gen_cycle(o.n, o.w);
    if (o.family == "opposing") return gen_opposing_cycles();
    if (o.family == "random") return gen_random_circulation(o.n, o.k, o.seed, {o.wmin, o.wmax});
    if (o.family == "layered") return gen_layered_heavy(o.layers, o.width, o.gamma, o.radial);
    if (o.family == "tree") return gen_symmetric_tree(o.depth, o.branching, o.growth);
    throw Error(ErrorKind::InvalidArgument, "unknown family '" + o.family + "'");
  }();
  emit(o, out, io::graph_to_json(g));
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const DirectedGraph g = io::read_graph_json(o.input);
  const auto report = check_kirchhoff(g, o.tol);
  emit(o, out, io::kirchhoff_json(report, connectivity(g)));
  return report.satisfied ? kExitOk : kExitFailed;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  require_format(o);
  const Operator op = load_operator(o);
  maybe_export(o, op);
  const Spectrum s = spectrum(op);
  emit(o, out, o.format == "csv" ? io::spectrum_csv(s) : io::spectrum_json(s));
  return kExitOk;
}

int cmd_numrange(const Options& o, std::ostream& out) {
  require_format(o);
  const Operator op = load_operator(o);
  maybe_export(o, op);
  const auto b = numerical_range_boundary(op, o.angles);
  emit(o, out, o.format == "csv" ? io::numrange_csv(b) : io::numrange_json(b));
  return kExitOk;
}

int cmd_cheeger(const Options& o, std::ostream& out) {
  const DirectedGraph g = io::read_graph_json(o.input);
  const VertexSubset omega = read_omega(o, g.size()).value_or(VertexSubset::all(g.size()));
  const Normalization norm = parse_normalization(o.normalization);
  CheegerResult r;
  if (o.mode == "exact") {
    r = cheeger_exact(g, omega, norm);
  } else if (o.mode == "heuristic") {
    r = cheeger_heuristic(g, omega, norm);
  } else if (o.mode == "auto") {
    r = cheeger(g, omega, norm);
  } else {
    throw Error(ErrorKind::InvalidArgument, "--mode must be exact, heuristic or auto");
  }
  emit(o, out, io::cheeger_json(r));
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<TheoremReport> reports;
  if (!o.family.empty()) {
    if (!o.input.empty()) throw Error(ErrorKind::InvalidArgument, "give a graph or --family, not both");
    if (o.family != "corpus") throw Error(ErrorKind::InvalidArgument, "unknown family '" + o.family + "'");
    reports = verify_corpus();
  } else {
    if (o.input.empty()) throw Error(ErrorKind::InvalidArgument, "missing input graph");
    const DirectedGraph g = io::read_graph_json(o.input);
    if (!satisfies_kirchhoff(g)) {
      throw Error(ErrorKind::KirchhoffViolated, "verify needs a graph with beta+ = beta-");
    }
    reports = verify_graph(o.input, g);
  }
  emit(o, out, io::reports_json(reports));
  const bool ok = std::all_of(reports.begin(), reports.end(),
                              [](const TheoremReport& r) { return r.passed(); });
  return ok ? kExitOk : kExitFailed;
}

int cmd_infinity(const Options& o, std::ostream& out) {
  require_format(o);
  const DirectedGraph g = io::read_graph_json(o.input);
  std::string levels_text = o.levels;
  if (!o.levels_file.empty()) {
    if (!levels_text.empty()) throw Error(ErrorKind::InvalidArgument, "use either --levels or --levels-file");
    levels_text = io::read_file(o.levels_file);
  }
  Filtration filt = [&] {
    if (levels_text.empty()) return build_filtration(g, o.root);
    const auto doc = nlohmann::json::parse(levels_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
      throw Error(ErrorKind::InputParse, "--levels must be a JSON array of id arrays");
    }
    std::vector<VertexSubset> levels;
    for (const auto& level : doc) levels.push_back(io::parse_subset_json(level.dump(), g.size()));
    return filtration_from_levels(g, std::move(levels));
  }();
  ProfileOptions options;
  options.exact_limit = o.exact_limit;
  const auto profile = infinity_profile(g, filt, options);
  emit(o, out, o.format == "csv" ? io::infinity_csv(profile) : io::infinity_json(profile));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed-graph Laplacians: operators, numerical ranges, Cheeger constants"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a Kirchhoff-balanced graph family");
  gen->add_option("--family", o.family, "cycle | opposing | random | layered | tree")->required();
  gen->add_option("--n", o.n, "vertex count (cycle, random)");
  gen->add_option("--w", o.w, "cycle weight");
  gen->add_option("--k", o.k, "number of random cycles");
  gen->add_option("--seed", o.seed, "random seed");
  gen->add_option("--wmin", o.wmin, "smallest random cycle weight");
  gen->add_option("--wmax", o.wmax, "largest random cycle weight");
  gen->add_option("--L", o.layers, "layer count");
  gen->add_option("--width", o.width, "vertices per layer");
  gen->add_option("--gamma", o.gamma, "per-layer weight growth");
  gen->add_option("--radial", o.radial, "radial weight factor");
  gen->add_option("--depth", o.depth, "tree depth");
  gen->add_option("--branching", o.branching, "tree branching");
  gen->add_option("--growth", o.growth, "tree weight growth per level");
  gen->add_option("--out", o.out, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "Kirchhoff condition and connectivity report");
  check->add_option("graph", o.input, "graph JSON")->required();
  check->add_option("--tol", o.tol, "tolerance relative to max beta+");
  check->add_option("--out", o.out, "output file");

  auto add_operator_options = [&](CLI::App* sub) {
    sub->add_option("graph", o.input, "graph JSON");
    sub->add_option("--operator-in", o.operator_in, "operator file (CSV or JSON) instead of a graph");
    sub->add_option("--op", o.op,
                    "delta | delta-prime | h | normalized | normalized-prime | normalized-h");
    sub->add_option("--omega", o.omega, "Dirichlet restriction, JSON id array");
    sub->add_option("--omega-file", o.omega_file, "file holding the JSON id array");
    sub->add_option("--format", o.format, "csv | json");
    sub->add_option("--out", o.out, "output file");
    sub->add_option("--export-operator", o.export_operator, "also write the operator (.csv or .json)");
  };
  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of an operator");
  add_operator_options(spec);
  auto* numrange = app.add_subcommand("numrange", "Boundary samples of the numerical range");
  add_operator_options(numrange);
  numrange->add_option("--angles", o.angles, "number of sweep angles (>= 4)");

  auto* cheeger_cmd = app.add_subcommand("cheeger", "Cheeger constant of a vertex subset");
  cheeger_cmd->add_option("graph", o.input, "graph JSON")->required();
  cheeger_cmd->add_option("--omega", o.omega, "subset, JSON id array (default: all vertices)");
  cheeger_cmd->add_option("--omega-file", o.omega_file, "file holding the JSON id array");
  cheeger_cmd->add_option("--normalization", o.normalization, "measure | beta");
  cheeger_cmd->add_option("--mode", o.mode, "exact | heuristic | auto");
  cheeger_cmd->add_option("--out", o.out, "output file");

  auto* verify = app.add_subcommand("verify", "Check every inequality; exit 1 on any failure");
  verify->add_option("graph", o.input, "graph JSON");
  verify->add_option("--family", o.family, "run a generated family instead (corpus)");
  verify->add_option("--out", o.out, "output file");

  auto* infinity = app.add_subcommand("infinity", "Per-level profile along a filtration");
  infinity->add_option("graph", o.input, "graph JSON")->required();
  infinity->add_option("--root", o.root, "root of the breadth-first filtration");
  infinity->add_option("--levels", o.levels, "explicit levels, JSON array of id arrays");
  infinity->add_option("--levels-file", o.levels_file, "file holding the levels");
  infinity->add_option("--exact-limit", o.exact_limit, "largest complement solved exactly");
  infinity->add_option("--format", o.format, "csv | json");
  infinity->add_option("--out", o.out, "output file");

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (spec->parsed()) return cmd_spectrum(o, out);
    if (numrange->parsed()) return cmd_numrange(o, out);
    if (cheeger_cmd->parsed()) return cmd_cheeger(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (infinity->parsed()) return cmd_infinity(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace dlap::cli
