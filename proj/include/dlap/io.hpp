#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dlap/graph.hpp"
#include "dlap/isoperimetric.hpp"
#include "dlap/operators.hpp"
#include "dlap/spectral.hpp"
#include "dlap/verify.hpp"

namespace dlap::io {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// {"vertices":[{"id":0,"m":1.0},...],"edges":[{"from":0,"to":1,"b":1.0},...]}
/// Throws InputParse on malformed JSON, SchemaViolation on structural problems,
/// and the build_graph errors on invalid values.
DirectedGraph parse_graph_json(std::string_view text);
DirectedGraph read_graph_json(const std::filesystem::path& path);
std::string graph_to_json(const DirectedGraph& g);

/// Vertex id list, e.g. "[0,1,4]".
VertexSubset parse_subset_json(std::string_view text, std::size_t universe);

/// Dense operator as CSV: '#'-prefixed header lines for kind, support and metric,
/// then one comma-separated matrix row per line.
std::string operator_to_csv(const Operator& op);
std::string operator_to_json(const Operator& op);
/// Reads either format (JSON when the first non-blank character is '{').
Operator parse_operator(std::string_view text);

/// Columns re,im.
std::string spectrum_csv(const Spectrum& s);
std::string spectrum_json(const Spectrum& s);
/// Columns theta,re,im.
std::string numrange_csv(const NumericalRangeBoundary& b);
std::string numrange_json(const NumericalRangeBoundary& b);
/// {value, witness, mode, normalization}
std::string cheeger_json(const CheegerResult& r);
std::string kirchhoff_json(const KirchhoffReport& r, const Connectivity& c);
/// Columns level,m_c,M_c,h_c,h_tilde_c,nu_dirichlet,ess_lower_bound.
std::string infinity_csv(const InfinityProfile& p);
std::string infinity_json(const InfinityProfile& p);
std::string reports_json(const std::vector<TheoremReport>& reports);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace dlap::io
