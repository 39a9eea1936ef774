#include "dlap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dlap/error.hpp"
#include "json.hpp"

namespace dlap::io {

using nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

ordered_json parse_json(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorKind::InputParse, e.what());
  }
}

const ordered_json& field(const ordered_json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorKind::SchemaViolation, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

std::size_t as_index(const ordered_json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::SchemaViolation, std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double as_real(const ordered_json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorKind::SchemaViolation, std::string(what) + " must be a number");
  return v.get<double>();
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json ids_json(const VertexSubset& s) {
  ordered_json a = ordered_json::array();
  for (VertexId x : s.members()) a.push_back(x);
  return a;
}

}  // namespace

DirectedGraph parse_graph_json(std::string_view text) {
  const ordered_json doc = parse_json(text);
  const auto& vertices = field(doc, "vertices");
  const auto& edges = field(doc, "edges");
  if (!vertices.is_array() || !edges.is_array()) {
    throw Error(ErrorKind::SchemaViolation, "'vertices' and 'edges' must be arrays");
  }
  const std::size_t n = vertices.size();
  GraphSpec spec;
  spec.measure.assign(n, 0.0);
  std::vector<char> seen(n, 0);
  for (const auto& v : vertices) {
    const std::size_t id = as_index(field(v, "id"), "vertex id");
    if (id >= n) {
      throw Error(ErrorKind::SchemaViolation,
                  "vertex ids must be 0.." + std::to_string(n - 1) + ", got " + std::to_string(id));
    }
    if (seen[id]) throw Error(ErrorKind::SchemaViolation, "vertex id " + std::to_string(id) + " repeated");
    seen[id] = 1;
    spec.measure[id] = as_real(field(v, "m"), "vertex measure");
  }
  for (const auto& e : edges) {
    spec.edges.push_back({as_index(field(e, "from"), "edge 'from'"),
                          as_index(field(e, "to"), "edge 'to'"), as_real(field(e, "b"), "edge weight")});
  }
  return build_graph(std::move(spec));
}

DirectedGraph read_graph_json(const std::filesystem::path& path) {
  return parse_graph_json(read_file(path));
}

std::string graph_to_json(const DirectedGraph& g) {
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  for (std::size_t x = 0; x < g.size(); ++x) doc["vertices"].push_back({{"id", x}, {"m", g.measure(x)}});
  doc["edges"] = ordered_json::array();
  for (const Edge& e : g.edges()) doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"b", e.weight}});
  return doc.dump(1) + "\n";
}

VertexSubset parse_subset_json(std::string_view text, std::size_t universe) {
  const ordered_json doc = parse_json(text);
  if (!doc.is_array()) throw Error(ErrorKind::SchemaViolation, "subset must be a JSON array of ids");
  std::vector<VertexId> ids;
  for (const auto& v : doc) ids.push_back(as_index(v, "subset member"));
  return VertexSubset(std::move(ids), universe);
}

std::string operator_to_csv(const Operator& op) {
  std::string out = "# kind," + to_string(op.kind) + "\n# support";
  for (VertexId x : op.support) out += "," + std::to_string(x);
  out += "\n# metric";
  for (Eigen::Index i = 0; i < op.metric.size(); ++i) out += "," + format_double(op.metric[i]);
  out += "\n";
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    for (Eigen::Index c = 0; c < op.dim(); ++c) {
      if (c) out += ",";
      out += format_double(op.matrix(r, c));
    }
    out += "\n";
  }
  return out;
}

std::string operator_to_json(const Operator& op) {
  ordered_json doc;
  doc["kind"] = to_string(op.kind);
  doc["support"] = op.support;
  doc["metric"] = ordered_json::array();
  for (Eigen::Index i = 0; i < op.metric.size(); ++i) doc["metric"].push_back(op.metric[i]);
  doc["matrix"] = ordered_json::array();
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < op.dim(); ++c) row.push_back(op.matrix(r, c));
    doc["matrix"].push_back(std::move(row));
  }
  return doc.dump() + "\n";
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && *begin == ' ') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorKind::InputParse, "not a number: '" + s + "'");
  }
  return v;
}

void validate_operator(const Operator& op) {
  const auto n = op.matrix.rows();
  if (n < 1 || op.matrix.cols() != n || op.metric.size() != n ||
      static_cast<Eigen::Index>(op.support.size()) != n) {
    throw Error(ErrorKind::SchemaViolation, "operator matrix, metric and support sizes disagree");
  }
  if ((op.metric.array() <= 0.0).any()) {
    throw Error(ErrorKind::SchemaViolation, "operator metric must be positive");
  }
}

}  // namespace

Operator parse_operator(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  Operator op;
  if (first != std::string_view::npos && text[first] == '{') {
    const ordered_json doc = parse_json(text);
    op.kind = parse_operator_kind(field(doc, "kind").get<std::string>());
    const auto& metric = field(doc, "metric");
    const auto& matrix = field(doc, "matrix");
    const auto& support = field(doc, "support");
    const auto n = static_cast<Eigen::Index>(metric.size());
    op.metric.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) op.metric[i] = as_real(metric[static_cast<std::size_t>(i)], "metric");
    for (const auto& s : support) op.support.push_back(as_index(s, "support id"));
    if (static_cast<Eigen::Index>(matrix.size()) != n) {
      throw Error(ErrorKind::SchemaViolation, "matrix must have one row per metric entry");
    }
    op.matrix.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = matrix[static_cast<std::size_t>(r)];
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw Error(ErrorKind::SchemaViolation, "matrix must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) op.matrix(r, c) = as_real(row[static_cast<std::size_t>(c)], "matrix entry");
    }
    validate_operator(op);
    return op;
  }

  std::stringstream ss{std::string(text)};
  std::string line;
  std::vector<std::vector<double>> rows;
  bool have_kind = false;
  std::vector<double> metric;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto parts = split(line.substr(1), ',');
      if (parts.empty()) continue;
      const std::string key = parts[0].substr(parts[0].find_first_not_of(' '));
      if (key == "kind" && parts.size() == 2) {
        op.kind = parse_operator_kind(parts[1]);
        have_kind = true;
      } else if (key == "support") {
        for (std::size_t i = 1; i < parts.size(); ++i) {
          op.support.push_back(static_cast<VertexId>(parse_real(parts[i])));
        }
      } else if (key == "metric") {
        for (std::size_t i = 1; i < parts.size(); ++i) metric.push_back(parse_real(parts[i]));
      } else {
        throw Error(ErrorKind::SchemaViolation, "unknown operator CSV header '" + key + "'");
      }
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(parse_real(cell));
    rows.push_back(std::move(row));
  }
  if (!have_kind) throw Error(ErrorKind::SchemaViolation, "operator CSV lacks '# kind' header");
  const auto n = static_cast<Eigen::Index>(rows.size());
  op.matrix.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n) {
      throw Error(ErrorKind::SchemaViolation, "operator CSV matrix must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) op.matrix(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  op.metric = Eigen::Map<const Eigen::VectorXd>(metric.data(), static_cast<Eigen::Index>(metric.size()));
  validate_operator(op);
  return op;
}

std::string spectrum_csv(const Spectrum& s) {
  std::string out = "re,im\n";
  for (const auto& z : s.eigenvalues) out += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  return out;
}

std::string spectrum_json(const Spectrum& s) {
  ordered_json doc = ordered_json::array();
  for (const auto& z : s.eigenvalues) doc.push_back({{"re", number(z.real())}, {"im", number(z.imag())}});
  return doc.dump(1) + "\n";
}

std::string numrange_csv(const NumericalRangeBoundary& b) {
  std::string out = "theta,re,im\n";
  for (std::size_t k = 0; k < b.points.size(); ++k) {
    out += format_double(b.angles[k]) + "," + format_double(b.points[k].real()) + "," +
           format_double(b.points[k].imag()) + "\n";
  }
  return out;
}

std::string numrange_json(const NumericalRangeBoundary& b) {
  ordered_json doc;
  doc["nu"] = number(b.nu);
  doc["points"] = ordered_json::array();
  for (std::size_t k = 0; k < b.points.size(); ++k) {
    doc["points"].push_back({{"theta", number(b.angles[k])},
                             {"re", number(b.points[k].real())},
                             {"im", number(b.points[k].imag())}});
  }
  return doc.dump(1) + "\n";
}

std::string cheeger_json(const CheegerResult& r) {
  ordered_json doc;
  doc["value"] = number(r.value);
  doc["witness"] = ids_json(r.witness);
  doc["mode"] = std::string(to_string(r.mode));
  doc["normalization"] = std::string(to_string(r.normalization));
  return doc.dump(1) + "\n";
}

std::string kirchhoff_json(const KirchhoffReport& r, const Connectivity& c) {
  ordered_json doc;
  doc["satisfied"] = r.satisfied;
  doc["max_violation"] = number(r.max_violation);
  doc["tolerance"] = number(r.tolerance);
  doc["violating_vertices"] = r.violating_vertices;
  doc["connected"] = c.weakly_connected;
  doc["strongly_connected"] = c.strongly_connected;
  doc["unilaterally_connected"] = c.unilaterally_connected;
  return doc.dump(1) + "\n";
}

std::string infinity_csv(const InfinityProfile& p) {
  std::string out = "level,m_c,M_c,h_c,h_tilde_c,nu_dirichlet,ess_lower_bound\n";
  for (const auto& l : p.levels) {
    out += std::to_string(l.level) + "," + format_double(l.m_c) + "," + format_double(l.M_c) + "," +
           format_double(l.h_c) + "," + format_double(l.h_tilde_c) + "," +
           format_double(l.nu_dirichlet) + "," + format_double(l.ess_lower_bound) + "\n";
  }
  return out;
}

std::string infinity_json(const InfinityProfile& p) {
  ordered_json doc;
  doc["levels"] = ordered_json::array();
  for (const auto& l : p.levels) {
    doc["levels"].push_back({{"level", l.level},
                             {"complement_size", l.complement_size},
                             {"m_c", number(l.m_c)},
                             {"M_c", number(l.M_c)},
                             {"h_c", number(l.h_c)},
                             {"h_mode", std::string(to_string(l.h_mode))},
                             {"h_tilde_c", number(l.h_tilde_c)},
                             {"h_tilde_mode", std::string(to_string(l.h_tilde_mode))},
                             {"nu_dirichlet", number(l.nu_dirichlet)},
                             {"ess_lower_bound", number(l.ess_lower_bound)},
                             {"witness_touches_frontier", l.witness_touches_frontier}});
  }
  doc["m_nondecreasing"] = p.m_nondecreasing;
  doc["M_nonincreasing"] = p.M_nonincreasing;
  doc["h_nondecreasing"] = p.h_nondecreasing;
  doc["h_tilde_nondecreasing"] = p.h_tilde_nondecreasing;
  doc["nu_nondecreasing"] = p.nu_nondecreasing;
  doc["heuristic_used"] = p.heuristic_used;
  doc["monotonicity_flagged"] = p.monotonicity_flagged;
  doc["heavy_end"] = p.heavy_end;
  return doc.dump(1) + "\n";
}

std::string reports_json(const std::vector<TheoremReport>& reports) {
  ordered_json doc = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json item;
    item["theorem_id"] = r.theorem_id;
    item["instance"] = r.instance;
    ordered_json lhs = ordered_json::array();
    ordered_json rhs = ordered_json::array();
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) {
      lhs.push_back(number(c.lhs));
      rhs.push_back(number(c.rhs));
      checks.push_back({{"label", c.label},
                        {"lhs", number(c.lhs)},
                        {"rhs", number(c.rhs)},
                        {"margin", number(c.margin())},
                        {"tolerance", number(c.tolerance)},
                        {"passed", c.passed()},
                        {"where", c.where}});
    }
    item["lhs"] = std::move(lhs);
    item["rhs"] = std::move(rhs);
    item["margin"] = number(r.margin());
    item["tolerance"] = number(r.tolerance());
    item["passed"] = r.passed();
    item["checks"] = std::move(checks);
    item["notes"] = r.notes;
    doc.push_back(std::move(item));
  }
  return doc.dump(1) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputParse, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::InvalidArgument, "cannot move output into '" + path.string() + "'");
  }
}

}  // namespace dlap::io
