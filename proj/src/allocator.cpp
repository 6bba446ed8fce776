#include "graphcake/allocator.hpp"

#include <algorithm>
#include <sstream>

#include "graphcake/errors.hpp"
#include "graphcake/good_piece.hpp"

namespace graphcake {

void validate_partition(const MetricGraph& g, const AgentPartition& p) {
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    const Piece& part = p.parts[i];
    if (part.empty()) {
      throw InvalidInputError("agent " + p.agent + ": part " + std::to_string(i) +
                              " is empty");
    }
    if (!piece_on_graph(g, part)) {
      throw InvalidInputError("agent " + p.agent + ": part " + std::to_string(i) +
                              " is not on the graph");
    }
    if (!is_connected_piece(g, part)) {
      throw InvalidInputError("agent " + p.agent + ": part " + std::to_string(i) +
                              " is not connected");
    }
  }
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    for (std::size_t j = i + 1; j < p.parts.size(); ++j) {
      if (p.separation > 0.0) {
        auto d = piece_distance(g, p.parts[i], p.parts[j]);
        if (d.finite && d.value < p.separation - kGeomTol) {
          std::ostringstream os;
          os << "agent " << p.agent << ": parts " << i << " and " << j
             << " are only " << d.value << " apart (need " << p.separation << ")";
          throw InvalidInputError(os.str());
        }
      } else if (p.mode == IntersectionMode::Disjoint) {
        if (pieces_intersect(g, p.parts[i], p.parts[j])) {
          throw InvalidInputError("agent " + p.agent + ": parts " + std::to_string(i) +
                                  " and " + std::to_string(j) + " intersect");
        }
      } else if (pieces_overlap_positively(g, p.parts[i], p.parts[j])) {
        throw InvalidInputError("agent " + p.agent + ": parts " + std::to_string(i) +
                                " and " + std::to_string(j) + " overlap in an interval");
      }
    }
  }
}

namespace {

struct LivePart {
  std::size_t agent;  // index into the partitions vector
  int part;           // original part index
  Piece piece;
};

// Core recursion shared by the s = 0 and s > 0 forest allocators.
Allocation run_forest(const MetricGraph& g0, const std::vector<AgentPartition>& partitions,
                      double s) {
  if (partitions.empty()) throw InvalidInputError("no agents");
  if (!is_acyclic(g0)) throw InvalidInputError("allocate_forest: graph has a cycle");
  const std::size_t n = partitions.size();
  for (const AgentPartition& p : partitions) {
    AgentPartition check = p;
    check.separation = s;
    if (s > 0.0) {
      for (Piece& part : check.parts) part = closure(part);
    }
    validate_partition(g0, check);
    if (check.parts.size() < n) {
      throw InvalidInputError("agent " + p.agent + " declared " +
                              std::to_string(p.parts.size()) + " parts but " +
                              std::to_string(n) + " agents share the cake");
    }
  }

  std::vector<LivePart> live;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < partitions[a].parts.size(); ++i) {
      Piece part = partitions[a].parts[i];
      if (s > 0.0) part = closure(part);
      live.push_back(LivePart{a, static_cast<int>(i), std::move(part)});
    }
  }

  Allocation out;
  out.separation = s;
  out.pieces.resize(n);
  for (std::size_t a = 0; a < n; ++a) out.pieces[a].agent = partitions[a].agent;

  std::vector<bool> served(n, false);
  MetricGraph g = g0;
  std::size_t remaining = n;

  while (remaining > 0) {
    for (std::size_t a = 0; a < n; ++a) {
      if (served[a]) continue;
      bool has = std::any_of(live.begin(), live.end(),
                             [&](const LivePart& lp) { return lp.agent == a; });
      if (!has) {
        throw InvalidInputError("agent " + partitions[a].agent +
                                " ran out of parts; input partition was not valid");
      }
    }

    std::size_t winner_idx;
    if (remaining == 1) {
      // Single agent left: the lowest-index surviving part is fine.
      std::size_t best = live.size();
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (best == live.size() || live[i].part < live[best].part) best = i;
      }
      winner_idx = best;
    } else {
      // Pick the tree containing the lexicographically smallest
      // (agent, part) and run the good-piece selection on all surviving
      // parts inside it.
      std::sort(live.begin(), live.end(), [](const LivePart& a, const LivePart& b) {
        if (a.agent != b.agent) return a.agent < b.agent;
        return a.part < b.part;
      });
      ComponentMap comps(g);
      const int comp = comps.of_piece(g, live.front().piece);
      PieceFamily family;
      std::vector<std::size_t> family_to_live;
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (comps.of_piece(g, live[i].piece) == comp) {
          family.members.push_back({partitions[live[i].agent].agent, live[i].piece});
          family_to_live.push_back(i);
        }
      }
      std::size_t j;
      if (s > 0.0) {
        j = find_s_good(g, family, s).first;
      } else {
        j = find_zero_good(g, family);
      }
      winner_idx = family_to_live[j];
    }

    const LivePart win = live[winner_idx];
    out.pieces[win.agent].piece = win.piece;
    out.pieces[win.agent].contains_part = win.part;
    served[win.agent] = true;
    --remaining;

    // Carve the cake and drop damaged parts; the good-piece guarantee is
    // that each unserved agent loses at most one.
    Piece removed = (s > 0.0) ? s_neighborhood(g, win.piece, s) : win.piece;
    std::vector<int> losses(n, 0);
    std::vector<LivePart> next;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (i == winner_idx) continue;
      const LivePart& lp = live[i];
      if (served[lp.agent]) continue;
      bool dropped;
      if (s > 0.0) {
        auto d = piece_distance(g, lp.piece, win.piece);
        dropped = d.finite && d.value < s - kGeomTol;
      } else {
        dropped = pieces_intersect(g, lp.piece, win.piece);
      }
      if (dropped) {
        ++losses[lp.agent];
      } else {
        next.push_back(lp);
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (losses[a] > 1) {
        throw InternalCheckError(
            "allocate_forest: an agent lost more than one part in a round; the "
            "selected piece was not good");
      }
    }
    live = std::move(next);
    g = subtract(g, removed);
  }
  return out;
}

Piece fvs_removed_set(const MetricGraph& g, int v, double s) {
  std::vector<IntervalOnEdge> parts;
  for (int eid : g.incident_edges(v)) {
    const EdgeRecord& e = g.edge(eid);
    if (e.u == v) parts.push_back(IntervalOnEdge{eid, 0.0, s / 2.0, false, false});
    if (e.v == v) {
      parts.push_back(IntervalOnEdge{eid, e.length - s / 2.0, e.length, false, false});
    }
  }
  Piece stubs = make_piece(g, std::move(parts));
  return piece_union(g, stubs, piece_from_point(g, PointRef::at_vertex(v)));
}

}  // namespace

Allocation allocate_forest(const MetricGraph& g,
                           const std::vector<AgentPartition>& partitions, double s) {
  if (s < 0.0) throw InvalidInputError("separation must be nonnegative");
  return run_forest(g, partitions, s);
}

Allocation allocate_general(const MetricGraph& g,
                            const std::vector<AgentPartition>& partitions, double s) {
  if (s < 0.0) throw InvalidInputError("separation must be nonnegative");
  if (partitions.empty()) throw InvalidInputError("no agents");
  const std::size_t n = partitions.size();

  std::vector<int> feedback = fvs(g);
  const std::size_t need = n + feedback.size();
  for (const AgentPartition& p : partitions) {
    AgentPartition check = p;
    check.separation = s;
    if (s > 0.0) {
      for (Piece& part : check.parts) part = closure(part);
    }
    validate_partition(g, check);
    if (check.parts.size() < need) {
      throw InvalidInputError("agent " + p.agent + " needs " + std::to_string(need) +
                              " parts (n + fvs) but declared " +
                              std::to_string(p.parts.size()));
    }
  }
  if (s > 0.0) {
    for (const EdgeRecord& e : g.edges()) {
      if (e.length < s - kGeomTol) {
        throw InvalidInputError("edge " + std::to_string(e.id) +
                                " is shorter than the separation parameter");
      }
    }
  }

  // Remove the feedback vertices: bare deletion for s = 0, deletion plus
  // open length-s/2 stubs on every incident edge end for s > 0. Each
  // removal damages at most one part per agent.
  MetricGraph forest = g;
  std::vector<std::vector<std::pair<int, Piece>>> surviving(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < partitions[a].parts.size(); ++i) {
      Piece part = partitions[a].parts[i];
      if (s > 0.0) part = closure(part);
      surviving[a].emplace_back(static_cast<int>(i), std::move(part));
    }
  }
  for (int v : feedback) {
    Piece removed = (s > 0.0) ? fvs_removed_set(g, v, s)
                              : piece_from_point(g, PointRef::at_vertex(v));
    for (std::size_t a = 0; a < n; ++a) {
      int hit = 0;
      std::erase_if(surviving[a], [&](const std::pair<int, Piece>& entry) {
        bool gone = pieces_intersect(g, entry.second, removed);
        hit += gone ? 1 : 0;
        return gone;
      });
      if (hit > 1) {
        throw InternalCheckError(
            "allocate_general: one vertex removal damaged two parts of one agent; "
            "their mutual distance was below s");
      }
    }
    forest = subtract(forest, removed);
  }
  if (!is_acyclic(forest)) {
    throw InternalCheckError("allocate_general: graph still has a cycle after fvs removal");
  }

  std::vector<AgentPartition> reduced(n);
  std::vector<std::vector<int>> index_map(n);
  for (std::size_t a = 0; a < n; ++a) {
    reduced[a].agent = partitions[a].agent;
    reduced[a].separation = s;
    reduced[a].mode = partitions[a].mode;
    for (auto& [orig, piece] : surviving[a]) {
      index_map[a].push_back(orig);
      reduced[a].parts.push_back(piece);
    }
  }

  Allocation alloc = run_forest(forest, reduced, s);
  for (std::size_t a = 0; a < n; ++a) {
    if (alloc.pieces[a].contains_part) {
      alloc.pieces[a].contains_part = index_map[a][*alloc.pieces[a].contains_part];
    }
  }

  // Putting the removed material back must keep the allocation s-separated
  // in the original graph.
  if (s > 0.0) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        auto d = piece_distance(g, alloc.pieces[a].piece, alloc.pieces[b].piece);
        if (d.finite && d.value < s - kGeomTol) {
          throw InternalCheckError(
              "allocate_general: allocation lost s-separation in the original graph");
        }
      }
    }
  }
  return alloc;
}

BipartiteDecomposition bipartite_decompose(const BipartiteGraph& h) {
  std::vector<std::vector<int>> adj(h.left);
  for (auto [x, y] : h.edges) {
    if (x < 0 || x >= h.left || y < 0 || y >= h.right) {
      throw InvalidInputError("bipartite edge out of range");
    }
    adj[x].push_back(y);
  }
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  // Augmenting-path maximum matching.
  std::vector<int> match_x(h.left, -1), match_y(h.right, -1);
  std::vector<int> seen(h.right, -1);
  auto augment = [&](auto&& self, int x, int stamp) -> bool {
    for (int y : adj[x]) {
      if (seen[y] == stamp) continue;
      seen[y] = stamp;
      if (match_y[y] < 0 || self(self, match_y[y], stamp)) {
        match_y[y] = x;
        match_x[x] = y;
        return true;
      }
    }
    return false;
  };
  int stamp = 0;
  for (int x = 0; x < h.left; ++x) {
    if (match_x[x] < 0) augment(augment, x, stamp++);
  }

  // Alternating-path reachability from unmatched agents: non-matching edges
  // leftward->right, matching edges right->left.
  std::vector<bool> rx(h.left, false), ry(h.right, false);
  std::vector<int> stack;
  for (int x = 0; x < h.left; ++x) {
    if (match_x[x] < 0) {
      rx[x] = true;
      stack.push_back(x);
    }
  }
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[x]) {
      if (match_x[x] == y || ry[y]) continue;
      ry[y] = true;
      int xx = match_y[y];
      if (xx >= 0 && !rx[xx]) {
        rx[xx] = true;
        stack.push_back(xx);
      }
    }
  }

  BipartiteDecomposition out;
  for (int x = 0; x < h.left; ++x) {
    (rx[x] ? out.x_small : out.x_large).push_back(x);
  }
  for (int y = 0; y < h.right; ++y) {
    (ry[y] ? out.y_small : out.y_large).push_back(y);
  }
  for (int x : out.x_large) out.matching[x] = match_x[x];

  // Re-verify the decomposition properties by brute force.
  std::set<int> xs(out.x_small.begin(), out.x_small.end());
  std::set<int> yl(out.y_large.begin(), out.y_large.end());
  for (auto [x, y] : h.edges) {
    if (xs.count(x) && yl.count(y)) {
      throw InternalCheckError("bipartite_decompose: edge between X_S and Y_L");
    }
  }
  if (!out.x_small.empty() && out.x_small.size() <= out.y_small.size()) {
    throw InternalCheckError("bipartite_decompose: |X_S| <= |Y_S|");
  }
  std::set<int> used;
  for (int x : out.x_large) {
    auto it = out.matching.find(x);
    if (it == out.matching.end() || it->second < 0 || !yl.count(it->second) ||
        !used.insert(it->second).second) {
      throw InternalCheckError("bipartite_decompose: matching does not saturate X_L");
    }
    bool has_edge = std::binary_search(adj[x].begin(), adj[x].end(), it->second);
    if (!has_edge) throw InternalCheckError("bipartite_decompose: matched pair is not an edge");
  }
  return out;
}

Allocation allocate_unicyclic_union(const MetricGraph& g,
                                    const std::vector<AgentPartition>& partitions,
                                    double s) {
  if (!(s > 0.0)) throw InvalidInputError("allocate_unicyclic_union: s must be positive");
  if (partitions.empty()) throw InvalidInputError("no agents");
  const std::size_t n = partitions.size();

  ComponentMap comps(g);
  // Classify components: fvs number 0 (trees) stay in the recursion base;
  // fvs number 1 components form the Y side; anything above is out of
  // contract.
  const int total_rank = circuit_rank(g);
  std::vector<int> cyclic_comps;
  int total_fvs = 0;
  for (int c = 0; c < comps.count(); ++c) {
    Piece material = comps.component_piece(g, c);
    if (material.empty()) continue;
    const int comp_rank = total_rank - circuit_rank(subtract(g, material));
    if (comp_rank == 0) continue;
    // One vertex must absorb every cycle of this component.
    bool single_vertex_suffices = false;
    for (int v : comps.component_vertices(c)) {
      if (circuit_rank(delete_vertices(g, {v})) == total_rank - comp_rank) {
        single_vertex_suffices = true;
        break;
      }
    }
    if (!single_vertex_suffices) {
      throw InvalidInputError("component has feedback vertex set number >= 2");
    }
    cyclic_comps.push_back(c);
    ++total_fvs;
  }

  const std::size_t big_n = std::min(n + static_cast<std::size_t>(total_fvs), 2 * n - 1);
  for (const AgentPartition& p : partitions) {
    AgentPartition check = p;
    check.separation = s;
    for (Piece& part : check.parts) part = closure(part);
    validate_partition(g, check);
    if (check.parts.size() < big_n) {
      throw InvalidInputError("agent " + p.agent + " needs " + std::to_string(big_n) +
                              " parts but declared " + std::to_string(p.parts.size()));
    }
  }

  // Bipartite graph: agent ~ cyclic component iff the component holds one
  // of her parts.
  BipartiteGraph h;
  h.left = static_cast<int>(n);
  h.right = static_cast<int>(cyclic_comps.size());
  std::vector<std::vector<bool>> holds(n, std::vector<bool>(cyclic_comps.size(), false));
  for (std::size_t a = 0; a < n; ++a) {
    for (const Piece& part : partitions[a].parts) {
      int c = comps.of_piece(g, closure(part));
      for (std::size_t yi = 0; yi < cyclic_comps.size(); ++yi) {
        if (cyclic_comps[yi] == c && !holds[a][yi]) {
          holds[a][yi] = true;
          h.edges.emplace_back(static_cast<int>(a), static_cast<int>(yi));
        }
      }
    }
  }
  BipartiteDecomposition dec = bipartite_decompose(h);

  Allocation out;
  out.separation = s;
  out.pieces.resize(n);
  for (std::size_t a = 0; a < n; ++a) out.pieces[a].agent = partitions[a].agent;

  // X_L agents take their matched component whole.
  for (int x : dec.x_large) {
    int c = cyclic_comps[static_cast<std::size_t>(dec.matching.at(x))];
    out.pieces[static_cast<std::size_t>(x)].piece = closure(comps.component_piece(g, c));
    // Record one contained part for the report.
    for (std::size_t i = 0; i < partitions[static_cast<std::size_t>(x)].parts.size(); ++i) {
      if (comps.of_piece(g, closure(partitions[static_cast<std::size_t>(x)].parts[i])) == c) {
        out.pieces[static_cast<std::size_t>(x)].contains_part = static_cast<int>(i);
        break;
      }
    }
  }

  if (dec.x_small.empty()) return out;

  // X_S agents recurse on G' = Y_S components plus every tree component.
  // Every Y_L component is removed, matched or not; by property (i) no X_S
  // agent has a part there.
  std::vector<IntervalOnEdge> drop;
  for (int y : dec.y_large) {
    Piece material = comps.component_piece(g, cyclic_comps[static_cast<std::size_t>(y)]);
    drop.insert(drop.end(), material.intervals.begin(), material.intervals.end());
  }
  MetricGraph reduced_graph = subtract(g, make_piece(g, drop));

  std::vector<AgentPartition> small_partitions;
  std::vector<std::size_t> small_agents;
  for (int x : dec.x_small) {
    const AgentPartition& p = partitions[static_cast<std::size_t>(x)];
    AgentPartition q;
    q.agent = p.agent;
    q.separation = s;
    q.mode = p.mode;
    for (const Piece& part : p.parts) q.parts.push_back(closure(part));
    small_partitions.push_back(std::move(q));
    small_agents.push_back(static_cast<std::size_t>(x));
  }

  // The bound behind the theorem: n' + fvs(G') <= N.
  const std::size_t fvs_reduced = cyclic_comps.size() - dec.y_large.size();
  if (small_partitions.size() + fvs_reduced > big_n) {
    throw InternalCheckError("allocate_unicyclic_union: n' + fvs(G') exceeds N");
  }

  Allocation small_alloc = allocate_general(reduced_graph, small_partitions, s);
  for (std::size_t i = 0; i < small_agents.size(); ++i) {
    out.pieces[small_agents[i]] = small_alloc.pieces[i];
  }
  return out;
}

VerifyReport verify_allocation(const MetricGraph& g, const Allocation& alloc,
                               const VerifyOptions& opts) {
  VerifyReport report;
  const MetricGraph& dist_g = opts.distance_graph ? *opts.distance_graph : g;
  auto add = [&](std::string name, std::string detail, bool pass) {
    report.checks.push_back(CheckEntry{std::move(name), std::move(detail), pass});
  };

  for (const AllocatedPiece& ap : alloc.pieces) {
    if (ap.piece.empty()) {
      add("nonempty", "agent " + ap.agent + " received nothing", false);
      continue;
    }
    add("on-graph", "agent " + ap.agent, piece_on_graph(g, ap.piece));
    add("connected", "agent " + ap.agent, is_connected_piece(g, ap.piece));
  }

  for (std::size_t a = 0; a < alloc.pieces.size(); ++a) {
    for (std::size_t b = a + 1; b < alloc.pieces.size(); ++b) {
      const auto& pa = alloc.pieces[a];
      const auto& pb = alloc.pieces[b];
      if (pa.piece.empty() || pb.piece.empty()) continue;
      std::string who = pa.agent + " vs " + pb.agent;
      if (opts.separation > 0.0) {
        auto d = piece_distance(dist_g, pa.piece, pb.piece);
        bool ok = !d.finite || d.value >= opts.separation - kGeomTol;
        std::ostringstream os;
        os << who << ": distance " << (d.finite ? std::to_string(d.value) : "inf");
        add("s-separated", os.str(), ok);
      } else if (opts.mode == IntersectionMode::Disjoint) {
        add("disjoint", who, !pieces_intersect(g, pa.piece, pb.piece));
      } else {
        add("finite-overlap", who, !pieces_overlap_positively(g, pa.piece, pb.piece));
      }
    }
  }

  if (opts.partitions) {
    for (const AllocatedPiece& ap : alloc.pieces) {
      const AgentPartition* mine = nullptr;
      for (const AgentPartition& p : *opts.partitions) {
        if (p.agent == ap.agent) mine = &p;
      }
      if (!mine) {
        add("contains-part", "agent " + ap.agent + ": no declared partition", false);
        continue;
      }
      bool found = false;
      int which = -1;
      for (std::size_t i = 0; i < mine->parts.size(); ++i) {
        Piece part = mine->parts[i];
        if (opts.separation > 0.0) part = closure(part);
        if (piece_contains(g, ap.piece, part)) {
          found = true;
          which = static_cast<int>(i);
          break;
        }
      }
      add("contains-part",
          "agent " + ap.agent +
              (found ? (": part " + std::to_string(which)) : ": no part contained"),
          found);
    }
  }

  if (opts.valuations && opts.min_values) {
    for (const AllocatedPiece& ap : alloc.pieces) {
      auto vit = opts.valuations->find(ap.agent);
      auto mit = opts.min_values->find(ap.agent);
      if (vit == opts.valuations->end() || mit == opts.min_values->end()) continue;
      double got = vit->second.piece_value(ap.piece);
      std::ostringstream os;
      os << "agent " << ap.agent << ": value " << got << " vs threshold " << mit->second;
      add("min-value", os.str(), got >= mit->second - 1e-9);
    }
  }
  return report;
}

}  // namespace graphcake
