#include "graphcake/mms.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "aux_graph.hpp"
#include "graphcake/errors.hpp"

namespace graphcake {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int degree(const MetricGraph& g, int v) {
  int d = 0;
  for (const EdgeRecord& e : g.edges()) {
    if (e.u == v) ++d;
    if (e.v == v) ++d;
  }
  return d;
}

}  // namespace

bool is_path_graph(const MetricGraph& g) {
  if (!g.fully_live() || g.edges().empty()) return false;
  if (!is_acyclic(g)) return false;
  ComponentMap comps(g);
  if (comps.count() != 1) return false;
  for (int v : g.vertex_ids()) {
    if (degree(g, v) > 2) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// The line view of a path cake: edges concatenated end to end, with the
// valuation mapped into line coordinates.

namespace {

struct LineEdge {
  int edge = -1;
  double pos = 0.0;    // line coordinate of the edge's walk-entry endpoint
  double len = 0.0;
  bool flipped = false;  // true when walked v -> u
};

struct LineView {
  std::vector<LineEdge> edges;
  double total_len = 0.0;
  // piecewise-constant density in line coordinates
  std::vector<double> stops;      // 0 = s_0 < ... < s_m = total_len
  std::vector<double> density;    // density on (s_i, s_i+1)
  std::vector<double> cum;        // cumulative value at stops

  double value(double a, double b) const {
    return cum_at(b) - cum_at(a);
  }
  double cum_at(double x) const {
    auto it = std::upper_bound(stops.begin(), stops.end(), x);
    std::size_t i = static_cast<std::size_t>(it - stops.begin());
    if (i == 0) return 0.0;
    --i;
    if (i >= density.size()) return cum.back();
    return cum[i] + (x - stops[i]) * density[i];
  }
  // leftmost x >= from with value(from, x) == t
  std::optional<double> cut(double from, double t) const {
    if (t <= kGeomTol) return from;
    double want = cum_at(from) + t;
    for (std::size_t i = 0; i < density.size(); ++i) {
      if (cum[i + 1] >= want - kGeomTol) {
        if (density[i] <= 0.0) {
          if (cum[i + 1] >= want - kGeomTol && approx_eq(cum[i + 1], want)) {
            return stops[i + 1];
          }
          continue;
        }
        double x = stops[i] + (want - cum[i]) / density[i];
        if (x >= from - kGeomTol) return std::min(x, stops[i + 1]);
      }
    }
    return std::nullopt;
  }
};

LineView build_line(const MetricGraph& g, const Valuation& v) {
  // Walk the path from its smaller-id endpoint.
  std::map<int, std::vector<int>> incident;
  for (const EdgeRecord& e : g.edges()) {
    incident[e.u].push_back(e.id);
    incident[e.v].push_back(e.id);
  }
  int start = -1;
  for (int vid : g.vertex_ids()) {
    if (incident[vid].size() <= 1) {
      if (start < 0 || vid < start) start = vid;
    }
  }
  if (start < 0) throw InvalidInputError("not a path");

  LineView line;
  std::set<int> used;
  int at = start;
  double pos = 0.0;
  while (true) {
    int next_edge = -1;
    for (int eid : incident[at]) {
      if (!used.count(eid)) next_edge = eid;
    }
    if (next_edge < 0) break;
    used.insert(next_edge);
    const EdgeRecord& e = g.edge(next_edge);
    bool flipped = (e.v == at);
    line.edges.push_back(LineEdge{e.id, pos, e.length, flipped});
    pos += e.length;
    at = flipped ? e.u : e.v;
  }
  line.total_len = pos;

  // Density stops in line coordinates.
  std::vector<double> stops{0.0, line.total_len};
  for (const LineEdge& le : line.edges) {
    stops.push_back(le.pos);
    auto it = v.segments().find(le.edge);
    if (it == v.segments().end()) continue;
    for (const DensitySegment& seg : it->second) {
      double a = le.flipped ? le.len - seg.end : seg.start;
      double b = le.flipped ? le.len - seg.start : seg.end;
      stops.push_back(le.pos + a);
      stops.push_back(le.pos + b);
    }
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(),
                          [](double a, double b) { return approx_eq(a, b); }),
              stops.end());
  line.stops = stops;
  line.cum.assign(stops.size(), 0.0);
  line.density.assign(stops.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
    double mid = 0.5 * (stops[i] + stops[i + 1]);
    // locate the edge containing mid
    double d = 0.0;
    for (const LineEdge& le : line.edges) {
      if (mid >= le.pos - kGeomTol && mid <= le.pos + le.len + kGeomTol) {
        double off = mid - le.pos;
        if (le.flipped) off = le.len - off;
        auto it = v.segments().find(le.edge);
        if (it != v.segments().end()) {
          for (const DensitySegment& seg : it->second) {
            if (off >= seg.start - kGeomTol && off <= seg.end + kGeomTol) d = seg.density;
          }
        }
        break;
      }
    }
    line.density[i] = d;
    line.cum[i + 1] = line.cum[i] + d * (stops[i + 1] - stops[i]);
  }
  return line;
}

// Maps a line interval back onto edge intervals.
std::vector<IntervalOnEdge> line_to_intervals(const LineView& line, double a, double b) {
  std::vector<IntervalOnEdge> out;
  if (approx_eq(a, b)) {
    for (const LineEdge& le : line.edges) {
      if (a >= le.pos - kGeomTol && a <= le.pos + le.len + kGeomTol) {
        double off = std::clamp(a - le.pos, 0.0, le.len);
        if (le.flipped) off = le.len - off;
        out.push_back(IntervalOnEdge{le.edge, off, off, true, true});
        return out;
      }
    }
  }
  for (const LineEdge& le : line.edges) {
    double lo = std::max(a, le.pos);
    double hi = std::min(b, le.pos + le.len);
    if (!approx_lt(lo, hi)) continue;
    double o1 = lo - le.pos;
    double o2 = hi - le.pos;
    if (le.flipped) {
      double t = o1;
      o1 = le.len - o2;
      o2 = le.len - t;
    }
    out.push_back(IntervalOnEdge{le.edge, o1, o2, true, true});
  }
  return out;
}

AgentPartition parts_from_line(const MetricGraph& g, const LineView& line,
                               const std::vector<std::pair<double, double>>& parts,
                               double s) {
  AgentPartition p;
  p.separation = s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto ivs = line_to_intervals(line, parts[i].first, parts[i].second);
    Piece piece = make_piece(g, ivs);
    if (s <= 0.0 && i > 0 && approx_eq(parts[i - 1].second, parts[i].first)) {
      // keep strict disjointness at a shared cut point
      for (IntervalOnEdge& iv : piece.intervals) {
        const LineEdge* le = nullptr;
        for (const LineEdge& cand : line.edges) {
          if (cand.edge == iv.edge) le = &cand;
        }
        double cut_off = parts[i].first - le->pos;
        if (le->flipped) cut_off = le->len - cut_off;
        if (approx_eq(iv.start, cut_off)) iv.closed_start = false;
        if (approx_eq(iv.end, cut_off)) iv.closed_end = false;
      }
      piece = make_piece(g, piece.intervals);
    }
    p.parts.push_back(std::move(piece));
  }
  return p;
}

}  // namespace

MmsResult mms_path_exact(const MetricGraph& g, const Valuation& v, int k, double s) {
  if (k < 1) throw InvalidInputError("k must be positive");
  if (s < 0.0) throw InvalidInputError("separation must be nonnegative");
  if (!is_path_graph(g)) throw InvalidInputError("mms_path_exact: graph is not a path");
  LineView line = build_line(g, v);

  auto feasible = [&](double t) -> std::optional<std::vector<std::pair<double, double>>> {
    std::vector<std::pair<double, double>> parts;
    double pos = 0.0;
    for (int i = 0; i < k; ++i) {
      if (pos > line.total_len + kGeomTol) return std::nullopt;
      pos = std::min(pos, line.total_len);
      auto cut = line.cut(pos, t);
      if (!cut || *cut > line.total_len + kGeomTol) return std::nullopt;
      parts.emplace_back(pos, std::min(std::max(*cut, pos), line.total_len));
      pos = parts.back().second + s;
    }
    return parts;
  };

  if (!feasible(0.0)) {
    throw InvalidInputError("mms_path_exact: cannot fit k s-separated parts on the path");
  }
  double lo = 0.0;
  double hi = v.total_value() + 1.0;
  for (int iter = 0; iter < 60 && hi - lo > 1e-6; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  auto parts = feasible(lo);
  MmsResult out;
  out.value = lo;
  out.partition = parts_from_line(g, line, *parts, s);
  out.partition.separation = s;
  out.method = "path-exact";
  return out;
}

double default_resolution(const MetricGraph& g, const Valuation& v, double s) {
  double m = kInf;
  if (s > 0.0) m = std::min(m, s);
  for (const EdgeRecord& e : g.edges()) m = std::min(m, e.length);
  for (const auto& [eid, segs] : v.segments()) {
    for (const DensitySegment& seg : segs) {
      if (seg.end - seg.start > kGeomTol) m = std::min(m, seg.end - seg.start);
    }
  }
  if (m == kInf) m = 1.0;
  return std::max(m / 20.0, 1e-6);
}

// ---------------------------------------------------------------------------
// Discretized oracle.

namespace {

std::map<int, std::vector<double>> candidate_grid(const MetricGraph& g, const Valuation& v,
                                                  double resolution) {
  auto grid = breakpoints(g, v);
  for (const EdgeRecord& e : g.edges()) {
    auto& pts = grid[e.id];
    for (double t = resolution; t < e.length - kGeomTol; t += resolution) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return approx_eq(a, b); }),
              pts.end());
  }
  return grid;
}

// Grid DP for path cakes: exact over partitions cut on the grid.
MmsResult dp_on_path(const MetricGraph& g, const Valuation& v, int k, double s,
                     double resolution) {
  LineView line = build_line(g, v);
  std::vector<double> xs;
  auto grid = candidate_grid(g, v, resolution);
  for (const LineEdge& le : line.edges) {
    for (double off : grid[le.edge]) {
      double o = le.flipped ? le.len - off : off;
      xs.push_back(le.pos + o);
    }
  }
  xs.push_back(0.0);
  xs.push_back(line.total_len);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return approx_eq(a, b); }),
           xs.end());
  const int m = static_cast<int>(xs.size());

  // prev[a]: largest index q with xs[q] <= xs[a] - s, or -1.
  std::vector<int> prev(m, -1);
  for (int a = 0; a < m; ++a) {
    double limit = xs[a] - s;
    int q = -1;
    for (int i = 0; i < m && xs[i] <= limit + kGeomTol; ++i) q = i;
    prev[a] = q;
  }

  // best[j][i]: max over placements of j parts within [0, xs[i]] of the
  // minimum part value; +inf for j == 0.
  std::vector<std::vector<double>> best(static_cast<std::size_t>(k) + 1,
                                        std::vector<double>(m, -kInf));
  std::vector<std::vector<std::pair<int, int>>> choice(
      static_cast<std::size_t>(k) + 1,
      std::vector<std::pair<int, int>>(m, {-1, -1}));  // (a, end-index of previous)
  for (int i = 0; i < m; ++i) best[0][i] = kInf;
  for (int j = 1; j <= k; ++j) {
    for (int i = 0; i < m; ++i) {
      double here = -kInf;
      std::pair<int, int> pick{-1, -1};
      for (int a = 0; a <= i; ++a) {
        double prior;
        int prior_end = -1;
        if (j == 1) {
          prior = kInf;
        } else {
          if (s > 0.0) {
            prior_end = prev[a];
          } else {
            prior_end = a;
          }
          if (prior_end < 0) continue;
          prior = best[j - 1][prior_end];
          if (prior == -kInf) continue;
        }
        double val = std::min(prior, line.value(xs[a], xs[i]));
        if (val > here) {
          here = val;
          pick = {a, prior_end};
        }
      }
      if (i > 0 && best[j][i - 1] >= here) {
        best[j][i] = best[j][i - 1];
        choice[j][i] = {-2, i - 1};  // carried over
      } else {
        best[j][i] = here;
        choice[j][i] = pick;
      }
    }
  }
  if (best[k][m - 1] == -kInf) {
    throw InvalidInputError("mms_discretized: cannot fit k s-separated parts");
  }

  // Backtrack.
  std::vector<std::pair<double, double>> parts;
  int j = k, i = m - 1;
  while (j > 0) {
    auto [a, pe] = choice[j][i];
    if (a == -2) {
      i = pe;
      continue;
    }
    parts.emplace_back(xs[a], xs[i]);
    --j;
    i = (pe >= 0) ? pe : 0;
  }
  std::reverse(parts.begin(), parts.end());

  MmsResult out;
  out.value = best[k][m - 1];
  out.partition = parts_from_line(g, line, parts, s);
  out.partition.separation = s;
  out.method = "discretized";
  out.resolution = resolution;
  return out;
}

// Connected-set enumeration over grid atoms for general graphs.
struct AtomSearch {
  const MetricGraph& g;
  const Valuation& v;
  int k;
  double s;
  std::uint64_t budget;
  std::uint64_t steps = 0;

  struct Atom {
    int edge;
    double lo, hi;
    double value;
    std::vector<int> neighbors;
    std::vector<int> nodes;     // aux node ids of the two endpoints
    std::vector<int> touches;   // vertex ids this atom reaches (at offset 0/len)
  };
  std::vector<Atom> atoms;
  std::vector<std::vector<double>> node_dist;  // all-pairs over aux nodes

  double best = -kInf;
  std::vector<std::vector<int>> best_parts;

  double target = 0.0;  // feasibility threshold of the current probe
  std::vector<char> used;
  std::vector<std::vector<int>> parts;
  std::vector<std::set<int>> part_through;  // vertices a part passes through

  AtomSearch(const MetricGraph& g_, const Valuation& v_, int k_, double s_,
             double resolution, std::uint64_t budget_)
      : g(g_), v(v_), k(k_), s(s_), budget(budget_) {
    auto grid = candidate_grid(g, v, resolution);
    std::vector<std::pair<int, double>> extras;
    for (const auto& [eid, pts] : grid) {
      for (double t : pts) extras.emplace_back(eid, t);
    }
    detail::AuxGraph aux(g, extras);

    for (const auto& [eid, pts] : grid) {
      const EdgeRecord& e = g.edge(eid);
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Atom a;
        a.edge = eid;
        a.lo = pts[i];
        a.hi = pts[i + 1];
        a.value = v.interval_value(eid, a.lo, a.hi);
        int n1 = aux.station_node(eid, 0, a.lo);
        int n2 = aux.station_node(eid, 0, a.hi);
        if (n1 < 0 || n2 < 0) throw InternalCheckError("atom endpoint has no station");
        a.nodes = {n1, n2};
        if (approx_eq(a.lo, 0.0)) a.touches.push_back(e.u);
        if (approx_eq(a.hi, e.length)) a.touches.push_back(e.v);
        atoms.push_back(std::move(a));
      }
    }
    // High-value atoms first so good partitions are found early and the
    // best-so-far pruning bites.
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
      if (!approx_eq(a.value, b.value)) return a.value > b.value;
      if (a.edge != b.edge) return a.edge < b.edge;
      return a.lo < b.lo;
    });

    std::map<std::pair<int, long>, std::vector<int>> at_point;  // (edge, offset key)
    std::map<int, std::vector<int>> at_vertex;
    auto key_of = [](double t) { return std::lround(t * 1e7); };
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      at_point[{atoms[i].edge, key_of(atoms[i].lo)}].push_back(static_cast<int>(i));
      at_point[{atoms[i].edge, key_of(atoms[i].hi)}].push_back(static_cast<int>(i));
      for (int vert : atoms[i].touches) at_vertex[vert].push_back(static_cast<int>(i));
    }
    for (const auto& [key, list] : at_point) {
      for (int a1 : list) {
        for (int a2 : list) {
          if (a1 != a2) atoms[a1].neighbors.push_back(a2);
        }
      }
    }
    for (const auto& [vert, list] : at_vertex) {
      for (int a1 : list) {
        for (int a2 : list) {
          if (a1 != a2) atoms[a1].neighbors.push_back(a2);
        }
      }
    }
    for (Atom& a : atoms) {
      std::sort(a.neighbors.begin(), a.neighbors.end());
      a.neighbors.erase(std::unique(a.neighbors.begin(), a.neighbors.end()),
                        a.neighbors.end());
    }

    node_dist.resize(aux.node_count());
    for (int n = 0; n < aux.node_count(); ++n) {
      std::vector<int> src{n};
      node_dist[n] = aux.dijkstra(src);
    }

    used.assign(atoms.size(), 0);
  }

  void tick() {
    if (++steps > budget) {
      throw BudgetExceededError("mms_discretized: search budget exceeded");
    }
  }

  double atom_part_dist(int atom, const std::vector<int>& part) const {
    double d = kInf;
    for (int n : atoms[atom].nodes) {
      for (int pa : part) {
        for (int pn : atoms[pa].nodes) d = std::min(d, node_dist[n][pn]);
      }
    }
    return d;
  }

  bool atom_blocked(int atom) const {
    if (s <= 0.0) return false;
    for (const auto& part : parts) {
      if (atom_part_dist(atom, part) < s - kGeomTol) return true;
    }
    return false;
  }

  std::set<int> through_vertices(const std::vector<int>& part) const {
    std::map<int, std::set<int>> edges_at;
    for (int a : part) {
      for (int vert : atoms[a].touches) edges_at[vert].insert(atoms[a].edge);
    }
    std::set<int> out;
    for (const auto& [vert, edges] : edges_at) {
      if (edges.size() >= 2) out.insert(vert);
    }
    return out;
  }

  bool zero_sep_conflict(const std::vector<int>& cand) const {
    if (s > 0.0) return false;
    auto th = through_vertices(cand);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (int vert : part_through[i]) {
        if (th.count(vert)) return true;
      }
    }
    return false;
  }

  // Feasibility probe for the current `target`: can k connected atom sets,
  // each of value >= target, be placed pairwise >= s apart? Parts stop
  // growing the moment they reach the target; any superset is dominated
  // (it blocks strictly more material without raising the minimum).
  bool complete_part(const std::vector<int>& cand, int anchor) {
    if (zero_sep_conflict(cand)) return false;
    for (int a : cand) used[a] = 1;
    parts.push_back(cand);
    part_through.push_back(through_vertices(cand));
    bool done;
    if (static_cast<int>(parts.size()) == k) {
      best_parts = parts;
      done = true;
    } else {
      done = search(anchor + 1);
    }
    if (!done) {
      parts.pop_back();
      part_through.pop_back();
      for (int a : cand) used[a] = 0;
    }
    return done;
  }

  // Enumerates connected sets built from atoms with index > anchor, each
  // exactly once: take the next frontier atom and branch on including it or
  // excluding it from the whole subtree. Returns true when a full
  // assignment has been found.
  bool grow(std::vector<int>& cand, double val, std::vector<int> frontier,
            std::set<int> excluded, int anchor) {
    tick();
    if (val >= target - kGeomTol) return complete_part(cand, anchor);
    while (!frontier.empty()) {
      int f = frontier.back();
      frontier.pop_back();
      if (excluded.count(f) || used[f] || atom_blocked(f)) continue;
      if (std::find(cand.begin(), cand.end(), f) != cand.end()) continue;
      std::vector<int> next_frontier = frontier;
      for (int nb : atoms[f].neighbors) {
        if (nb > anchor && !used[nb] && !excluded.count(nb) &&
            std::find(cand.begin(), cand.end(), nb) == cand.end()) {
          next_frontier.push_back(nb);
        }
      }
      cand.push_back(f);
      if (grow(cand, val + atoms[f].value, std::move(next_frontier), excluded, anchor)) {
        return true;
      }
      cand.pop_back();
      excluded.insert(f);
    }
    return false;
  }

  bool search(int anchor_from) {
    tick();
    for (int anchor = anchor_from; anchor < static_cast<int>(atoms.size()); ++anchor) {
      if (used[anchor] || atom_blocked(anchor)) continue;
      std::vector<int> cand{anchor};
      std::vector<int> frontier;
      for (int nb : atoms[anchor].neighbors) {
        if (nb > anchor && !used[nb]) frontier.push_back(nb);
      }
      if (grow(cand, atoms[anchor].value, std::move(frontier), {}, anchor)) return true;
    }
    return false;
  }

  bool feasible(double t) {
    target = t;
    parts.clear();
    part_through.clear();
    std::fill(used.begin(), used.end(), 0);
    return search(0);
  }

  // Binary search on the threshold; the reported value is the witness's own
  // minimum part value, so it is exact for the partition returned and
  // within the bisection tolerance of the grid optimum.
  void run() {
    if (!feasible(0.0)) return;
    double lo = 0.0;
    double hi = v.total_value() / k + 1.0;
    std::vector<std::vector<int>> witness = best_parts;
    for (int iter = 0; iter < 60 && hi - lo > 1e-7; ++iter) {
      double mid = 0.5 * (lo + hi);
      if (feasible(mid)) {
        lo = mid;
        witness = best_parts;
      } else {
        hi = mid;
      }
    }
    best_parts = witness;
    best = kInf;
    for (const auto& part : best_parts) {
      double val = 0.0;
      for (int a : part) val += atoms[a].value;
      best = std::min(best, val);
    }
  }
};

MmsResult atoms_to_result(const MetricGraph& g, const AtomSearch& search, double s,
                          double resolution) {
  MmsResult out;
  out.value = search.best;
  out.method = "discretized";
  out.resolution = resolution;
  out.partition.separation = s;

  std::vector<Piece> pieces;
  for (const auto& part : search.best_parts) {
    std::vector<IntervalOnEdge> ivs;
    for (int a : part) {
      ivs.push_back(IntervalOnEdge{search.atoms[a].edge, search.atoms[a].lo,
                                   search.atoms[a].hi, true, true});
    }
    pieces.push_back(make_piece(g, std::move(ivs)));
  }

  if (s <= 0.0) {
    // Resolve shared boundary points so the parts are strictly disjoint:
    // the earlier part keeps a contested point unless the later part passes
    // through it.
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto through_i = search.through_vertices(search.best_parts[i]);
      for (std::size_t j = 0; j < i; ++j) {
        auto through_j = search.through_vertices(search.best_parts[j]);
        // same-edge shared endpoints: open the later piece
        for (IntervalOnEdge& a : pieces[i].intervals) {
          for (const IntervalOnEdge& b : pieces[j].intervals) {
            if (a.edge != b.edge) continue;
            if (approx_eq(a.start, b.end) && a.closed_start && b.closed_end) {
              a.closed_start = false;
            }
            if (approx_eq(a.end, b.start) && a.closed_end && b.closed_start) {
              a.closed_end = false;
            }
          }
        }
        // shared vertices: the pass-through owner keeps it, else the earlier
        // piece does
        for (int vert : piece_vertices(g, pieces[i])) {
          if (!piece_covers_vertex(g, pieces[j], vert)) continue;
          bool i_owns = through_i.count(vert) && !through_j.count(vert);
          Piece& loser = i_owns ? pieces[j] : pieces[i];
          for (IntervalOnEdge& iv : loser.intervals) {
            const EdgeRecord& rec = g.edge(iv.edge);
            if (rec.u == vert && approx_eq(iv.start, 0.0)) iv.closed_start = false;
            if (rec.v == vert && approx_eq(iv.end, rec.length)) iv.closed_end = false;
          }
        }
      }
    }
    for (Piece& p : pieces) {
      std::erase_if(p.intervals, [](const IntervalOnEdge& iv) {
        return !flagged_valid(iv.flags());
      });
      p = make_piece(g, p.intervals);
    }
  }
  for (Piece& p : pieces) out.partition.parts.push_back(std::move(p));
  return out;
}

}  // namespace

MmsResult mms_discretized(const MetricGraph& g, const Valuation& v, int k, double s,
                          double resolution, std::uint64_t budget) {
  if (k < 1) throw InvalidInputError("k must be positive");
  if (s < 0.0) throw InvalidInputError("separation must be nonnegative");
  if (!(resolution > 0.0)) throw InvalidInputError("resolution must be positive");
  if (!g.fully_live()) {
    throw InvalidInputError("mms_discretized: expects an unsurgered instance graph");
  }
  if (is_path_graph(g)) return dp_on_path(g, v, k, s, resolution);

  AtomSearch search(g, v, k, s, resolution, budget);
  search.run();
  if (search.best == -kInf) {
    throw InvalidInputError("mms_discretized: cannot fit k s-separated parts");
  }
  auto out = atoms_to_result(g, search, s, resolution);
  // The witness must satisfy the partition contract it reports.
  validate_partition(g, out.partition);
  return out;
}

MmsResult maximin_partition(const MetricGraph& g, const Valuation& v, int k, double s,
                            std::optional<double> resolution, std::uint64_t budget) {
  if (is_path_graph(g)) return mms_path_exact(g, v, k, s);
  double res = resolution.value_or(default_resolution(g, v, s));
  return mms_discretized(g, v, k, s, res, budget);
}

}  // namespace graphcake
