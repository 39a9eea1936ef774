#include "dlap/isoperimetric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>

#include "dlap/error.hpp"
#include "dlap/operators.hpp"
#include "dlap/spectral.hpp"

namespace dlap {

std::string_view to_string(CheegerMode mode) noexcept {
  return mode == CheegerMode::Exact ? "Exact" : "UpperBound";
}

std::string_view to_string(Normalization normalization) noexcept {
  return normalization == Normalization::ByMeasure ? "ByMeasure" : "ByBetaPlus";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "ByMeasure" || text == "measure" || text == "h") return Normalization::ByMeasure;
  if (text == "ByBetaPlus" || text == "beta" || text == "htilde") return Normalization::ByBetaPlus;
  throw Error(ErrorKind::InvalidArgument, "unknown normalization '" + std::string(text) + "'");
}

namespace {

double denominator_weight(const DirectedGraph& g, VertexId x, Normalization normalization) {
  return normalization == Normalization::ByMeasure ? g.measure(x) : g.beta_plus()[x];
}

void require_subset(const DirectedGraph& g, const VertexSubset& omega) {
  if (omega.empty()) throw Error(ErrorKind::EmptySubset, "subset is empty");
  if (omega.universe() != g.size()) {
    throw Error(ErrorKind::VertexOutOfRange, "subset universe does not match graph size");
  }
}

// Omega re-indexed 0..k-1, with symmetrised weights between members and the
// full symmetrised degree a(x) = beta+(x) + beta-(x) of each member.
struct LocalProblem {
  std::vector<VertexId> ids;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> degree;
  std::vector<double> den;
  // Largest single-vertex ratio; sets the scale for tie detection.
  double scale = 1.0;

  LocalProblem(const DirectedGraph& g, const VertexSubset& omega, Normalization normalization)
      : ids(omega.members().begin(), omega.members().end()) {
    const std::size_t k = ids.size();
    std::vector<std::size_t> local(g.size(), k);
    for (std::size_t i = 0; i < k; ++i) local[ids[i]] = i;
    adj.resize(k);
    degree.assign(k, 0.0);
    den.resize(k);
    scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& nb : g.symmetric_neighbors(ids[i])) {
        degree[i] += nb.weight;
        if (local[nb.vertex] < k) adj[i].emplace_back(local[nb.vertex], nb.weight);
      }
      den[i] = denominator_weight(g, ids[i], normalization);
      scale = std::max(scale, degree[i] / den[i]);
    }
    scale = std::max(scale, std::numeric_limits<double>::min());
  }

  std::size_t size() const noexcept { return ids.size(); }

  double tie_tolerance() const noexcept { return 1e-12 * scale; }

  VertexSubset subset(const std::vector<char>& in, std::size_t universe) const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (in[i]) out.push_back(ids[i]);
    }
    return VertexSubset(std::move(out), universe);
  }
};

// Lexicographic order of the sorted member lists encoded by two bitmasks.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t d = a ^ b;
  if (d == 0) return false;
  const int i = std::countr_zero(d);
  if ((a >> i) & 1u) return (b >> i) != 0;  // b empty above i means b is a prefix of a
  return (a >> i) == 0;
}

struct Incumbent {
  double value = std::numeric_limits<double>::infinity();
  std::uint32_t mask = 0;
};

bool improves(double value, std::uint32_t mask, const Incumbent& best, double tie) {
  if (value < best.value - tie) return true;
  return value <= best.value + tie && lex_less(mask, best.mask);
}

// Gray-code walk over indices [lo, hi) of the 2^k subsets; index 0 (empty set)
// is never evaluated.
Incumbent enumerate_range(const LocalProblem& p, const std::vector<double>& dense,
                          std::uint64_t lo, std::uint64_t hi) {
  const std::size_t k = p.size();
  const double tie = p.tie_tolerance();
  Incumbent best;
  if (lo >= hi) return best;

  auto gray = [](std::uint64_t i) { return static_cast<std::uint32_t>(i ^ (i >> 1)); };

  // inside[v] = sum over u in U of a(v,u); cut and denominator of U.
  std::vector<double> inside(k, 0.0);
  double cut = 0.0;
  double den = 0.0;
  std::uint32_t mask = gray(lo);
  for (std::size_t v = 0; v < k; ++v) {
    if (!((mask >> v) & 1u)) continue;
    den += p.den[v];
    cut += p.degree[v];
    for (std::size_t u = 0; u < k; ++u) inside[u] += dense[u * k + v];
  }
  for (std::size_t v = 0; v < k; ++v) {
    if ((mask >> v) & 1u) cut -= inside[v];
  }

  for (std::uint64_t i = lo;;) {
    if (mask != 0) {
      const double value = cut / den;
      if (improves(value, mask, best, tie)) best = {value, mask};
    }
    if (++i >= hi) break;
    const int v = std::countr_zero(i);
    const std::size_t vs = static_cast<std::size_t>(v);
    if ((mask >> v) & 1u) {
      mask &= ~(1u << v);
      cut -= p.degree[vs] - 2.0 * inside[vs];
      den -= p.den[vs];
      for (std::size_t u = 0; u < k; ++u) inside[u] -= dense[u * k + vs];
    } else {
      cut += p.degree[vs] - 2.0 * inside[vs];
      den += p.den[vs];
      mask |= 1u << v;
      for (std::size_t u = 0; u < k; ++u) inside[u] += dense[u * k + vs];
    }
  }
  return best;
}

double ratio_from_membership(const LocalProblem& p, const std::vector<char>& in) {
  double cut = 0.0;
  double den = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (!in[v]) continue;
    den += p.den[v];
    double internal = 0.0;
    for (const auto& [u, w] : p.adj[v]) {
      if (in[u]) internal += w;
    }
    cut += p.degree[v] - internal;
  }
  return cut / den;
}

// Single-vertex toggles, steepest descent; U stays non-empty.
void greedy_refine(const LocalProblem& p, std::vector<char>& in) {
  const std::size_t k = p.size();
  std::vector<double> inside(k, 0.0);
  double cut = 0.0;
  double den = 0.0;
  std::size_t count = 0;
  for (std::size_t v = 0; v < k; ++v) {
    if (!in[v]) continue;
    ++count;
    den += p.den[v];
    cut += p.degree[v];
    for (const auto& [u, w] : p.adj[v]) inside[u] += w;
  }
  for (std::size_t v = 0; v < k; ++v) {
    if (in[v]) cut -= inside[v];
  }

  const double tie = p.tie_tolerance();
  for (std::size_t iter = 0; iter < 4 * k + 16; ++iter) {
    const double current = cut / den;
    double best_value = current;
    std::size_t best_v = k;
    for (std::size_t v = 0; v < k; ++v) {
      double c = 0.0;
      double d = 0.0;
      if (in[v]) {
        if (count == 1) continue;
        c = cut - (p.degree[v] - 2.0 * inside[v]);
        d = den - p.den[v];
      } else {
        c = cut + (p.degree[v] - 2.0 * inside[v]);
        d = den + p.den[v];
      }
      const double value = c / d;
      if (value < best_value - tie) {
        best_value = value;
        best_v = v;
      }
    }
    if (best_v == k) return;
    const double sign = in[best_v] ? -1.0 : 1.0;
    cut += sign * (p.degree[best_v] - 2.0 * inside[best_v]);
    den += sign * p.den[best_v];
    in[best_v] = !in[best_v];
    count = in[best_v] ? count + 1 : count - 1;
    for (const auto& [u, w] : p.adj[best_v]) inside[u] += sign * w;
  }
}

// Best prefix of `order` (vertices added one at a time).
std::vector<char> best_sweep_prefix(const LocalProblem& p, const std::vector<std::size_t>& order) {
  const std::size_t k = p.size();
  std::vector<char> in(k, 0);
  std::vector<double> inside(k, 0.0);
  double cut = 0.0;
  double den = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_len = 1;
  for (std::size_t step = 0; step < order.size(); ++step) {
    const std::size_t v = order[step];
    cut += p.degree[v] - 2.0 * inside[v];
    den += p.den[v];
    in[v] = 1;
    for (const auto& [u, w] : p.adj[v]) inside[u] += w;
    const double value = cut / den;
    if (value < best - p.tie_tolerance()) {
      best = value;
      best_len = step + 1;
    }
  }
  std::vector<char> out(k, 0);
  for (std::size_t step = 0; step < best_len; ++step) out[order[step]] = 1;
  return out;
}

}  // namespace

double cheeger_ratio(const DirectedGraph& g, const VertexSubset& u, Normalization normalization) {
  require_subset(g, u);
  double den = 0.0;
  for (VertexId x : u.members()) den += denominator_weight(g, x, normalization);
  return boundary_weight(g, u) / den;
}

CheegerResult cheeger_exact(const DirectedGraph& g, const VertexSubset& omega,
                            Normalization normalization) {
  require_subset(g, omega);
  if (omega.size() > kMaxExactSubset) {
    throw Error(ErrorKind::SubsetTooLarge, "exact Cheeger enumeration limited to " +
                                               std::to_string(kMaxExactSubset) + " vertices, got " +
                                               std::to_string(omega.size()));
  }
  const LocalProblem p(g, omega, normalization);
  const std::size_t k = p.size();
  std::vector<double> dense(k * k, 0.0);
  for (std::size_t v = 0; v < k; ++v) {
    for (const auto& [u, w] : p.adj[v]) dense[v * k + u] = w;
  }

  const std::uint64_t total = std::uint64_t{1} << k;
  const std::size_t workers =
      k < 16 ? 1 : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<Incumbent> partial(workers);
  if (workers == 1) {
    partial[0] = enumerate_range(p, dense, 1, total);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::uint64_t lo = std::max<std::uint64_t>(1, w * chunk);
      const std::uint64_t hi = std::min(total, (w + 1) * chunk);
      pool.emplace_back([&, w, lo, hi] { partial[w] = enumerate_range(p, dense, lo, hi); });
    }
  }

  Incumbent best;
  for (const Incumbent& c : partial) {
    if (c.mask != 0 && improves(c.value, c.mask, best, p.tie_tolerance())) best = c;
  }

  std::vector<char> in(k, 0);
  for (std::size_t v = 0; v < k; ++v) in[v] = static_cast<char>((best.mask >> v) & 1u);
  CheegerResult result;
  result.witness = p.subset(in, g.size());
  result.value = cheeger_ratio(g, result.witness, normalization);
  result.mode = CheegerMode::Exact;
  result.normalization = normalization;
  return result;
}

CheegerResult cheeger_heuristic(const DirectedGraph& g, const VertexSubset& omega,
                                Normalization normalization) {
  require_subset(g, omega);
  const LocalProblem p(g, omega, normalization);
  const std::size_t k = p.size();

  std::vector<std::vector<char>> starts;
  starts.emplace_back(k, 1);  // omega itself

  // Best singleton.
  {
    std::size_t best_v = 0;
    for (std::size_t v = 1; v < k; ++v) {
      if (p.degree[v] / p.den[v] < p.degree[best_v] / p.den[best_v]) best_v = v;
    }
    std::vector<char> single(k, 0);
    single[best_v] = 1;
    starts.push_back(std::move(single));
  }

  // Sweep cuts over the lowest Dirichlet eigenvectors of the symmetrised
  // operator, in the metric matching the denominator.
  if (k >= 2) {
    const Operator h = dirichlet(
        assemble(g, normalization == Normalization::ByMeasure ? OperatorBase::H
                                                              : OperatorBase::NormalizedH),
        omega);
    const Eigen::MatrixXd sym = symmetric_part(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() == Eigen::Success) {
      const Eigen::VectorXd inv_sqrt = h.metric.array().sqrt().inverse();
      for (Eigen::Index col = 0; col < std::min<Eigen::Index>(2, sym.rows()); ++col) {
        const Eigen::VectorXd f = inv_sqrt.cwiseProduct(solver.eigenvectors().col(col));
        std::vector<std::size_t> order(k);
        for (std::size_t i = 0; i < k; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return f[static_cast<Eigen::Index>(a)] > f[static_cast<Eigen::Index>(b)];
        });
        starts.push_back(best_sweep_prefix(p, order));
        std::reverse(order.begin(), order.end());
        starts.push_back(best_sweep_prefix(p, order));
      }
    }
  }

  std::vector<char> best_in;
  double best_value = std::numeric_limits<double>::infinity();
  for (auto& start : starts) {
    greedy_refine(p, start);
    const double value = ratio_from_membership(p, start);
    if (value < best_value - p.tie_tolerance()) {
      best_value = value;
      best_in = start;
    }
  }

  CheegerResult result;
  result.witness = p.subset(best_in, g.size());
  result.value = cheeger_ratio(g, result.witness, normalization);
  result.mode = CheegerMode::UpperBound;
  result.normalization = normalization;
  return result;
}

CheegerResult cheeger(const DirectedGraph& g, const VertexSubset& omega,
                      Normalization normalization, std::size_t exact_limit) {
  if (omega.size() <= std::min(exact_limit, kMaxExactSubset)) {
    return cheeger_exact(g, omega, normalization);
  }
  return cheeger_heuristic(g, omega, normalization);
}

RatioBounds m_M_constants(const DirectedGraph& g, const VertexSubset& omega) {
  require_subset(g, omega);
  RatioBounds r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (VertexId x : omega.members()) {
    const double ratio = g.beta_plus()[x] / g.measure(x);
    r.m_omega = std::min(r.m_omega, ratio);
    r.M_omega = std::max(r.M_omega, ratio);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Filtrations

Filtration build_filtration(const DirectedGraph& g, VertexId root) {
  const std::size_t n = g.size();
  if (root >= n) throw Error(ErrorKind::VertexOutOfRange, "root " + std::to_string(root));
  std::vector<std::size_t> dist(n, n);
  std::vector<VertexId> queue{root};
  dist[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId x = queue[head];
    for (const auto& nb : g.symmetric_neighbors(x)) {
      if (dist[nb.vertex] == n) {
        dist[nb.vertex] = dist[x] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  if (queue.size() != n) {
    throw Error(ErrorKind::Disconnected, "filtration needs a connected graph; " +
                                             std::to_string(n - queue.size()) +
                                             " vertices unreachable from the root");
  }

  Filtration filt;
  const std::size_t radius = dist[queue.back()];
  for (std::size_t r = 0; r <= radius; ++r) {
    std::vector<VertexId> ball;
    for (VertexId x = 0; x < n; ++x) {
      if (dist[x] <= r) ball.push_back(x);
    }
    filt.levels_.emplace_back(std::move(ball), n);
  }
  return filt;
}

Filtration filtration_from_levels(const DirectedGraph& g, std::vector<VertexSubset> levels) {
  if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "filtration needs levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& level = levels[i];
    if (level.empty() || level.universe() != g.size()) {
      throw Error(ErrorKind::InvalidArgument, "level " + std::to_string(i + 1) + " is empty or sized wrongly");
    }
    if (induced_components(g, level).size() != 1) {
      throw Error(ErrorKind::Disconnected,
                  "level " + std::to_string(i + 1) + " does not induce a connected subgraph");
    }
    if (i > 0) {
      const auto& prev = levels[i - 1];
      const bool nested = std::includes(level.members().begin(), level.members().end(),
                                        prev.members().begin(), prev.members().end());
      if (!nested || level.size() == prev.size()) {
        throw Error(ErrorKind::InvalidArgument,
                    "level " + std::to_string(i + 1) + " does not strictly contain its predecessor");
      }
    }
  }
  if (levels.back().size() != g.size()) {
    throw Error(ErrorKind::InvalidArgument, "filtration does not exhaust the vertex set");
  }
  Filtration filt;
  filt.levels_ = std::move(levels);
  return filt;
}

// ---------------------------------------------------------------------------
// Profiles at infinity

namespace {

template <class Member>
std::vector<double> column(const std::vector<LevelProfile>& levels, Member member) {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.*member);
  return out;
}

bool nondecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - 1e-10 * std::max(1.0, std::abs(v[i - 1]))) return false;
  }
  return true;
}

}  // namespace

std::vector<double> InfinityProfile::m_trend() const { return column(levels, &LevelProfile::m_c); }
std::vector<double> InfinityProfile::M_trend() const { return column(levels, &LevelProfile::M_c); }
std::vector<double> InfinityProfile::h_trend() const { return column(levels, &LevelProfile::h_c); }
std::vector<double> InfinityProfile::h_tilde_trend() const {
  return column(levels, &LevelProfile::h_tilde_c);
}
std::vector<double> InfinityProfile::nu_trend() const {
  return column(levels, &LevelProfile::nu_dirichlet);
}

InfinityProfile infinity_profile(const DirectedGraph& g, const Filtration& filt,
                                 ProfileOptions options) {
  const auto& levels = filt.levels();
  if (levels.size() < 2) {
    throw Error(ErrorKind::EmptyComplement, "profile needs at least two filtration levels");
  }
  const Operator delta = assemble(g, OperatorBase::Delta);

  // Outermost shell: where the finite truncation ends.
  std::vector<char> frontier(g.size(), 0);
  {
    const auto outer = levels.back().mask();
    const auto inner = levels[levels.size() - 2].mask();
    for (std::size_t x = 0; x < g.size(); ++x) frontier[x] = outer[x] && !inner[x];
  }

  InfinityProfile profile;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const VertexSubset comp = levels[n].complement();
    if (comp.empty()) continue;

    LevelProfile row;
    row.level = n + 1;
    row.complement_size = comp.size();
    const auto bounds = m_M_constants(g, comp);
    row.m_c = bounds.m_omega;
    row.M_c = bounds.M_omega;
    const auto h = cheeger(g, comp, Normalization::ByMeasure, options.exact_limit);
    const auto ht = cheeger(g, comp, Normalization::ByBetaPlus, options.exact_limit);
    row.h_c = h.value;
    row.h_mode = h.mode;
    row.h_tilde_c = ht.value;
    row.h_tilde_mode = ht.mode;
    row.nu_dirichlet = nu(dirichlet(delta, comp));
    row.ess_lower_bound = row.m_c * row.h_tilde_c * row.h_tilde_c / 8.0;
    row.witness_touches_frontier = std::any_of(
        ht.witness.members().begin(), ht.witness.members().end(),
        [&](VertexId x) { return frontier[x] != 0; });
    profile.heuristic_used = profile.heuristic_used || h.mode == CheegerMode::UpperBound ||
                             ht.mode == CheegerMode::UpperBound;
    profile.levels.push_back(row);
  }
  if (profile.levels.empty()) {
    throw Error(ErrorKind::EmptyComplement, "every filtration level has an empty complement");
  }

  profile.m_nondecreasing = nondecreasing(profile.m_trend());
  auto neg_M = profile.M_trend();
  for (double& v : neg_M) v = -v;
  profile.M_nonincreasing = nondecreasing(neg_M);
  profile.h_nondecreasing = nondecreasing(profile.h_trend());
  profile.h_tilde_nondecreasing = nondecreasing(profile.h_tilde_trend());
  profile.nu_nondecreasing = nondecreasing(profile.nu_trend());
  profile.monotonicity_flagged = !(profile.m_nondecreasing && profile.M_nonincreasing &&
                                   profile.h_nondecreasing && profile.h_tilde_nondecreasing &&
                                   profile.nu_nondecreasing);

  const double first = profile.levels.front().m_c;
  const double last = profile.levels.back().m_c;
  profile.heavy_end = profile.m_nondecreasing && last >= options.heavy_ratio * first;
  return profile;
}

}  // namespace dlap
