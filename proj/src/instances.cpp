#include "graphcake/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "graphcake/errors.hpp"

namespace graphcake {

std::vector<AgentPartition> InstanceDoc::declared_partitions() const {
  std::vector<AgentPartition> out;
  for (const InstanceAgent& a : agents) {
    if (!a.partition) continue;
    AgentPartition p;
    p.agent = a.name;
    p.parts = *a.partition;
    p.separation = separation;
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// One cycle laid out on consecutive edges of equal length; `pos` coordinates
// run over [0, circumference).
struct CycleLayout {
  std::vector<int> edge_ids;  // edge i covers [i*seg, (i+1)*seg)
  double seg = 0.0;
  double circumference() const { return seg * static_cast<double>(edge_ids.size()); }
};

struct CycleBuilder {
  std::vector<int> vertices;
  std::vector<EdgeRecord> edges;

  CycleLayout add_cycle(int segments, double seg_len) {
    CycleLayout layout;
    layout.seg = seg_len;
    int base_v = vertices.empty() ? 0 : vertices.back() + 1;
    int base_e = static_cast<int>(edges.size());
    for (int i = 0; i < segments; ++i) vertices.push_back(base_v + i);
    for (int i = 0; i < segments; ++i) {
      int u = base_v + i;
      int v = base_v + (i + 1) % segments;
      edges.push_back(EdgeRecord{base_e + i, u, v, seg_len});
      layout.edge_ids.push_back(base_e + i);
    }
    return layout;
  }
};

// Splits a cyclic arc [pos, pos+len) into edge segments.
std::vector<std::tuple<int, double, double>> arc_segments(const CycleLayout& c, double pos,
                                                          double len) {
  const double circ = c.circumference();
  pos = std::fmod(pos, circ);
  if (pos < 0) pos += circ;
  std::vector<std::tuple<int, double, double>> out;
  double remaining = len;
  while (remaining > kGeomTol) {
    int idx = static_cast<int>(std::floor(pos / c.seg));
    if (idx >= static_cast<int>(c.edge_ids.size())) idx = static_cast<int>(c.edge_ids.size()) - 1;
    double off = pos - idx * c.seg;
    double take = std::min(remaining, c.seg - off);
    out.emplace_back(c.edge_ids[idx], off, off + take);
    remaining -= take;
    pos = std::fmod(pos + take, circ);
  }
  return out;
}

void add_region(std::map<int, std::vector<DensitySegment>>& dens, const CycleLayout& c,
                double pos, double len, double density) {
  for (auto [eid, a, b] : arc_segments(c, pos, len)) {
    dens[eid].push_back(DensitySegment{a, b, density});
  }
}

Piece region_piece(const MetricGraph& g, const CycleLayout& c, double pos, double len) {
  std::vector<IntervalOnEdge> ivs;
  for (auto [eid, a, b] : arc_segments(c, pos, len)) {
    ivs.push_back(IntervalOnEdge{eid, a, b, true, true});
  }
  return make_piece(g, ivs);
}

}  // namespace

InstanceDoc gen_cycle_counterexample(int n, int r, double s, double eps) {
  if (n < 1 || r < 1) throw InvalidInputError("need n >= 1 and r >= 1");
  if (!(s > 0.0)) throw InvalidInputError("separation must be positive");
  if (!(eps > 0.0) || eps > s / (4.0 * n) + kGeomTol) {
    throw InvalidInputError("need 0 < eps <= s/(4n)");
  }

  const bool case_one = (r >= n);
  const double seg = s + eps;
  CycleBuilder builder;
  std::vector<CycleLayout> small_cycles;  // length 2s+2eps, two parallel edges
  std::optional<CycleLayout> large_cycle;

  int valuable;
  if (case_one) {
    // All r cycles have circumference 2s+2eps; n-1 of them carry value
    // (one when n == 1, so the degenerate instance still has an agent who
    // wants something).
    valuable = std::max(n - 1, 1);
    for (int c = 0; c < r; ++c) small_cycles.push_back(builder.add_cycle(2, seg));
  } else {
    valuable = r - 1;
    for (int c = 0; c < r - 1; ++c) small_cycles.push_back(builder.add_cycle(2, seg));
    large_cycle = builder.add_cycle(n + 1 - r, seg);
  }

  MetricGraph graph(builder.vertices, builder.edges);

  InstanceDoc doc;
  doc.separation = s;
  doc.graph = graph;
  for (int i = 1; i <= n; ++i) {
    InstanceAgent agent;
    agent.name = "agent" + std::to_string(i);
    std::map<int, std::vector<DensitySegment>> dens;
    std::vector<Piece> parts;
    const double density = 1.0 / eps;

    for (int c = 0; c < valuable && c < static_cast<int>(small_cycles.size()); ++c) {
      const CycleLayout& cyc = small_cycles[static_cast<std::size_t>(c)];
      const double circ = cyc.circumference();
      // two antipodal regions at angle i*pi/n and i*pi/n + pi
      double pos = static_cast<double>(i) * circ / (2.0 * n);
      add_region(dens, cyc, pos, eps, density);
      add_region(dens, cyc, pos + circ / 2.0, eps, density);
      parts.push_back(region_piece(graph, cyc, pos, eps));
      parts.push_back(region_piece(graph, cyc, pos + circ / 2.0, eps));
    }
    if (large_cycle) {
      // n+1-r regions, one per side, shifted clockwise by eps per agent
      for (int j = 0; j < n + 1 - r; ++j) {
        double pos = j * seg + (i - 1) * eps;
        add_region(dens, *large_cycle, pos, eps, density);
        parts.push_back(region_piece(graph, *large_cycle, pos, eps));
      }
    }
    for (auto& [eid, segs] : dens) {
      std::sort(segs.begin(), segs.end(),
                [](const DensitySegment& a, const DensitySegment& b) {
                  return a.start < b.start;
                });
    }
    agent.valuation = Valuation(graph, dens);
    agent.partition = parts;
    doc.agents.push_back(std::move(agent));
  }

  doc.meta = nlohmann::json{{"case", case_one ? 1 : 2},
                            {"eps", eps},
                            {"generator", "cycle-counterexample"},
                            {"n", n},
                            {"r", r}};

  // The emitted partitions certify MMS^{N-1} >= 1; fail loudly if they do
  // not satisfy their own contract.
  for (const AgentPartition& p : doc.declared_partitions()) {
    validate_partition(doc.graph, p);
  }
  return doc;
}

// ---------------------------------------------------------------------------

namespace {

struct CycleCoords {
  double circumference = 0.0;
  // edge id -> (start position of offset 0, +1/-1 walk direction)
  std::map<int, std::pair<double, int>> edge_pos;

  double to_pos(int edge, double offset) const {
    auto [base, dir] = edge_pos.at(edge);
    double p = base + dir * offset;
    p = std::fmod(p, circumference);
    if (p < 0) p += circumference;
    return p;
  }
};

// Walks one cyclic component and assigns cyclic coordinates.
CycleCoords walk_cycle(const MetricGraph& g, const std::vector<int>& comp_vertices) {
  std::map<int, std::vector<int>> incident;
  double total = 0.0;
  std::set<int> comp_set(comp_vertices.begin(), comp_vertices.end());
  std::vector<int> comp_edges;
  for (const EdgeRecord& e : g.edges()) {
    if (comp_set.count(e.u) || comp_set.count(e.v)) {
      incident[e.u].push_back(e.id);
      incident[e.v].push_back(e.id);
      comp_edges.push_back(e.id);
      total += e.length;
    }
  }
  for (int v : comp_vertices) {
    if (incident[v].size() != 2) {
      throw InvalidInputError("check_positive_value_bound: component is not a simple cycle");
    }
  }
  CycleCoords out;
  out.circumference = total;
  int at = comp_vertices.front();
  double pos = 0.0;
  int prev_edge = -1;
  do {
    int next_edge = -1;
    for (int eid : incident[at]) {
      if (eid != prev_edge) next_edge = std::max(next_edge, eid == prev_edge ? -1 : eid);
    }
    // deterministic: lowest incident edge not just used
    next_edge = -1;
    for (int eid : incident[at]) {
      if (eid == prev_edge) continue;
      if (next_edge < 0 || eid < next_edge) next_edge = eid;
    }
    const EdgeRecord& e = g.edge(next_edge);
    bool forward = (e.u == at);
    out.edge_pos[e.id] = {forward ? pos : pos + e.length, forward ? +1 : -1};
    pos += e.length;
    at = forward ? e.v : e.u;
    prev_edge = next_edge;
  } while (at != comp_vertices.front());
  if (!approx_eq(pos, total)) {
    throw InternalCheckError("cycle walk did not close");
  }
  return out;
}

struct Arc {
  double lo = 0.0, hi = 0.0;  // positions, lo <= hi, within [0, 2C)
};

double cyclic_arc_distance(const Arc& a, const Arc& b, double circ) {
  // overlap?
  auto contains = [&](const Arc& x, double p) {
    double q = std::fmod(p - x.lo + 2 * circ, circ);
    return q <= (x.hi - x.lo) + kGeomTol;
  };
  if (contains(a, b.lo) || contains(a, b.hi) || contains(b, a.lo) || contains(b, a.hi)) {
    return 0.0;
  }
  double gap1 = std::fmod(b.lo - a.hi + 2 * circ, circ);
  double gap2 = std::fmod(a.lo - b.hi + 2 * circ, circ);
  return std::min(gap1, gap2);
}

}  // namespace

int check_positive_value_bound(const InstanceDoc& doc, std::optional<double> resolution,
                               std::uint64_t budget) {
  const MetricGraph& g = doc.graph;
  const int n = static_cast<int>(doc.agents.size());
  if (n > 16) throw InvalidInputError("check_positive_value_bound: too many agents");

  // Default resolution: a quarter of the shortest positive-density segment.
  double min_region = std::numeric_limits<double>::infinity();
  for (const InstanceAgent& a : doc.agents) {
    for (const auto& [eid, segs] : a.valuation.segments()) {
      for (const DensitySegment& seg : segs) {
        if (seg.density > 0 && seg.end - seg.start > kGeomTol) {
          min_region = std::min(min_region, seg.end - seg.start);
        }
      }
    }
  }
  if (!std::isfinite(min_region)) return 0;  // nobody values anything
  const double res = resolution.value_or(min_region / 4.0);
  if (!(res > 0.0)) throw InvalidInputError("resolution must be positive");

  ComponentMap comps(g);
  std::uint64_t steps = 0;
  auto tick = [&]() {
    if (++steps > budget) {
      throw BudgetExceededError("check_positive_value_bound: budget exceeded");
    }
  };

  // candidate arcs per component per agent
  std::vector<std::vector<std::vector<Arc>>> cands(
      static_cast<std::size_t>(comps.count()),
      std::vector<std::vector<Arc>>(static_cast<std::size_t>(n)));
  std::vector<double> circumference(static_cast<std::size_t>(comps.count()), 0.0);
  for (int c = 0; c < comps.count(); ++c) {
    auto verts = comps.component_vertices(c);
    if (verts.empty()) continue;
    // positive density anywhere on this component?
    bool has_value = false;
    for (const InstanceAgent& a : doc.agents) {
      for (const auto& [eid, segs] : a.valuation.segments()) {
        const EdgeRecord& e = g.edge(eid);
        if (comps.of_vertex(e.u) != c) continue;
        for (const DensitySegment& seg : segs) {
          if (seg.density > 0 && seg.end - seg.start > kGeomTol) has_value = true;
        }
      }
    }
    if (!has_value) continue;
    CycleCoords coords = walk_cycle(g, verts);
    circumference[static_cast<std::size_t>(c)] = coords.circumference;
    for (int i = 0; i < n; ++i) {
      for (const auto& [eid, segs] : doc.agents[static_cast<std::size_t>(i)].valuation.segments()) {
        const EdgeRecord& e = g.edge(eid);
        if (comps.of_vertex(e.u) != c) continue;
        for (const DensitySegment& seg : segs) {
          if (!(seg.density > 0) || seg.end - seg.start <= kGeomTol) continue;
          // positions of the region endpoints; walk direction may flip them
          double p1 = coords.to_pos(eid, seg.start);
          double p2 = coords.to_pos(eid, seg.end);
          double lo = p1, len = seg.end - seg.start;
          auto [base, dir] = coords.edge_pos.at(eid);
          (void)base;
          if (dir < 0) lo = p2;
          // chop into sub-arcs of length <= res
          int pieces = std::max(1, static_cast<int>(std::ceil(len / res)));
          for (int pidx = 0; pidx < pieces; ++pidx) {
            double a = lo + len * pidx / pieces;
            double b = lo + len * (pidx + 1) / pieces;
            cands[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)].push_back(
                Arc{a, b});
          }
        }
      }
    }
  }

  // feasible(c, S): assign a candidate arc to every agent in S, pairwise
  // >= s apart on the cycle.
  auto feasible = [&](int c, unsigned mask) {
    std::vector<int> agents;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) agents.push_back(i);
    }
    std::vector<Arc> chosen;
    const double circ = circumference[static_cast<std::size_t>(c)];
    auto rec = [&](auto&& self, std::size_t idx) -> bool {
      tick();
      if (idx == agents.size()) return true;
      for (const Arc& arc :
           cands[static_cast<std::size_t>(c)][static_cast<std::size_t>(agents[idx])]) {
        bool ok = true;
        for (const Arc& other : chosen) {
          if (cyclic_arc_distance(arc, other, circ) < doc.separation - kGeomTol) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        chosen.push_back(arc);
        if (self(self, idx + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    return rec(rec, 0);
  };

  // Combine across components: each agent may take an arc on at most one
  // component.
  std::vector<char> reachable(1u << n, 0);
  reachable[0] = 1;
  for (int c = 0; c < comps.count(); ++c) {
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (!cands[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)].empty()) any = true;
    }
    if (!any) continue;
    // feasible subsets on this component
    std::vector<unsigned> ok_subsets;
    for (unsigned sub = 1; sub < (1u << n); ++sub) {
      bool have = true;
      for (int i = 0; i < n; ++i) {
        if ((sub & (1u << i)) &&
            cands[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)].empty()) {
          have = false;
        }
      }
      if (have && feasible(c, sub)) ok_subsets.push_back(sub);
    }
    std::vector<char> next = reachable;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (!reachable[mask]) continue;
      for (unsigned sub : ok_subsets) {
        if ((mask & sub) == 0) next[mask | sub] = 1;
      }
    }
    reachable = std::move(next);
  }

  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (reachable[mask]) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

// ---------------------------------------------------------------------------

InstanceDoc gen_random_forest_instance(std::uint64_t seed, int trees, int vertices, int n,
                                       double s) {
  if (trees < 1 || vertices < trees || n < 1 || s < 0.0) {
    throw InvalidInputError("gen_random_forest_instance: bad parameters");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto round3 = [](double x) { return std::round(x * 1000.0) / 1000.0; };

  // Vertices dealt to trees round-robin; each non-root vertex attaches to a
  // random earlier vertex of its tree.
  std::vector<int> tree_of(static_cast<std::size_t>(vertices));
  std::vector<std::vector<int>> members(static_cast<std::size_t>(trees));
  for (int v = 0; v < vertices; ++v) {
    int t = (v < trees) ? v : uniform_int(0, trees - 1);
    tree_of[static_cast<std::size_t>(v)] = t;
    members[static_cast<std::size_t>(t)].push_back(v);
  }
  std::vector<int> verts(static_cast<std::size_t>(vertices));
  for (int v = 0; v < vertices; ++v) verts[static_cast<std::size_t>(v)] = v;
  std::vector<EdgeRecord> edges;
  int eid = 0;
  for (int t = 0; t < trees; ++t) {
    const auto& m = members[static_cast<std::size_t>(t)];
    for (std::size_t i = 1; i < m.size(); ++i) {
      int parent = m[static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1))];
      edges.push_back(EdgeRecord{eid++, parent, m[i], round3(uniform(0.7, 1.8))});
    }
  }
  MetricGraph g(verts, edges);
  if (edges.empty()) {
    throw InvalidInputError("gen_random_forest_instance: graph has no edges");
  }

  InstanceDoc doc;
  doc.separation = s;
  doc.graph = g;

  const double rad = 0.1;
  for (int a = 0; a < n; ++a) {
    InstanceAgent agent;
    agent.name = "agent" + std::to_string(a + 1);
    std::map<int, std::vector<DensitySegment>> dens;
    for (const EdgeRecord& e : g.edges()) {
      if (uniform_int(0, 1) == 0) {
        dens[e.id] = {DensitySegment{0.0, e.length, round3(uniform(0.0, 2.0))}};
      } else {
        double mid = round3(uniform(0.25, e.length - 0.25));
        dens[e.id] = {DensitySegment{0.0, mid, round3(uniform(0.0, 2.0))},
                      DensitySegment{mid, e.length, round3(uniform(0.0, 2.0))}};
      }
    }
    agent.valuation = Valuation(g, dens);

    // Anchor-ball parts: anchors pairwise s + 2*rad + margin apart make the
    // closed radius-`rad` balls pairwise strictly s-separated.
    std::vector<PointRef> anchors;
    for (int p = 0; p < n; ++p) {
      bool placed = false;
      for (int tries = 0; tries < 400 && !placed; ++tries) {
        const EdgeRecord& e =
            g.edges()[static_cast<std::size_t>(uniform_int(0, static_cast<int>(g.edges().size()) - 1))];
        double off = round3(uniform(0.0, e.length));
        PointRef cand = canonical_point(g, e.id, off);
        bool ok = true;
        for (const PointRef& prev : anchors) {
          auto d = shortest_distance(g, cand, prev);
          if (d.finite && d.value < s + 2 * rad + 0.01) ok = false;
        }
        if (ok) {
          anchors.push_back(cand);
          placed = true;
        }
      }
      if (!placed) {
        throw InvalidInputError(
            "gen_random_forest_instance: cannot fit " + std::to_string(n) +
            " s-separated parts per agent; try fewer agents or a smaller s");
      }
    }
    std::vector<Piece> parts;
    for (const PointRef& anchor : anchors) {
      parts.push_back(closure(s_neighborhood(g, piece_from_point(g, anchor), rad)));
    }
    agent.partition = parts;
    doc.agents.push_back(std::move(agent));
  }

  doc.meta = nlohmann::json{{"generator", "random-forest"},
                            {"n", n},
                            {"s", s},
                            {"seed", seed},
                            {"trees", trees},
                            {"vertices", vertices}};

  for (const AgentPartition& p : doc.declared_partitions()) {
    validate_partition(doc.graph, p);
  }
  return doc;
}

}  // namespace graphcake
