#include "graphcake/json_io.hpp"

#include "graphcake/errors.hpp"

namespace graphcake {

using nlohmann::json;

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json point_to_json(const PointRef& p) {
  if (p.is_vertex()) return json{{"vertex", p.vertex}};
  return json{{"edge", p.edge}, {"offset", p.offset}};
}

[[noreturn]] void schema_error(const std::string& what) {
  throw InvalidInputError("malformed document: " + what);
}

template <typename F>
auto guarded(F&& f, const char* what) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("malformed document (") + what + "): " + e.what());
  }
}

}  // namespace

json piece_to_json(const Piece& piece) {
  json arr = json::array();
  for (const IntervalOnEdge& iv : piece.intervals) {
    arr.push_back(json{{"closed_end", iv.closed_end},
                       {"closed_start", iv.closed_start},
                       {"edge", iv.edge},
                       {"end", iv.end},
                       {"start", iv.start}});
  }
  return arr;
}

Piece piece_from_json(const MetricGraph& g, const json& j) {
  return guarded(
      [&] {
        std::vector<IntervalOnEdge> ivs;
        for (const json& e : j) {
          ivs.push_back(IntervalOnEdge{e.at("edge").get<int>(), e.at("start").get<double>(),
                                       e.at("end").get<double>(),
                                       e.value("closed_start", true),
                                       e.value("closed_end", true)});
        }
        return make_piece(g, std::move(ivs));
      },
      "piece");
}

json instance_to_json(const InstanceDoc& doc) {
  json edges = json::array();
  for (const EdgeRecord& e : doc.graph.edges()) {
    edges.push_back(json{{"id", e.id}, {"length", e.length}, {"u", e.u}, {"v", e.v}});
  }
  json agents = json::array();
  for (const InstanceAgent& a : doc.agents) {
    json dens = json::array();
    for (const auto& [eid, segs] : a.valuation.segments()) {
      json seg_arr = json::array();
      for (const DensitySegment& s : segs) {
        seg_arr.push_back(json::array({s.start, s.end, s.density}));
      }
      dens.push_back(json{{"edge", eid}, {"segments", seg_arr}});
    }
    json agent{{"densities", dens}, {"name", a.name}};
    if (a.partition) {
      json parts = json::array();
      for (const Piece& p : *a.partition) parts.push_back(piece_to_json(p));
      agent["partition"] = parts;
    }
    agents.push_back(std::move(agent));
  }
  return json{{"agents", agents},
              {"graph", json{{"edges", edges}, {"vertices", doc.graph.vertex_ids()}}},
              {"meta", doc.meta},
              {"separation", doc.separation}};
}

InstanceDoc instance_from_json(const json& j) {
  return guarded(
      [&] {
        InstanceDoc doc;
        doc.separation = j.at("separation").get<double>();
        std::vector<int> verts = j.at("graph").at("vertices").get<std::vector<int>>();
        std::vector<EdgeRecord> edges;
        for (const json& e : j.at("graph").at("edges")) {
          edges.push_back(EdgeRecord{e.at("id").get<int>(), e.at("u").get<int>(),
                                     e.at("v").get<int>(), e.at("length").get<double>()});
        }
        doc.graph = MetricGraph(std::move(verts), std::move(edges));
        for (const json& a : j.at("agents")) {
          InstanceAgent agent;
          agent.name = a.at("name").get<std::string>();
          std::map<int, std::vector<DensitySegment>> dens;
          for (const json& d : a.value("densities", json::array())) {
            std::vector<DensitySegment> segs;
            for (const json& s : d.at("segments")) {
              if (!s.is_array() || s.size() != 3) schema_error("density segment shape");
              segs.push_back(DensitySegment{s[0].get<double>(), s[1].get<double>(),
                                            s[2].get<double>()});
            }
            dens[d.at("edge").get<int>()] = std::move(segs);
          }
          agent.valuation = Valuation(doc.graph, std::move(dens));
          if (a.contains("partition") && !a.at("partition").is_null()) {
            std::vector<Piece> parts;
            for (const json& p : a.at("partition")) {
              parts.push_back(piece_from_json(doc.graph, p));
            }
            agent.partition = std::move(parts);
          }
          doc.agents.push_back(std::move(agent));
        }
        doc.meta = j.value("meta", json::object());
        return doc;
      },
      "instance");
}

json allocation_to_json(const Allocation& alloc) {
  json pieces = json::array();
  for (const AllocatedPiece& ap : alloc.pieces) {
    json entry{{"agent", ap.agent}, {"intervals", piece_to_json(ap.piece)}};
    entry["contains_part"] = ap.contains_part ? json(*ap.contains_part) : json(nullptr);
    pieces.push_back(std::move(entry));
  }
  return json{{"pieces", pieces}, {"s", alloc.separation}};
}

Allocation allocation_from_json(const MetricGraph& g, const json& j) {
  return guarded(
      [&] {
        Allocation out;
        out.separation = j.at("s").get<double>();
        for (const json& p : j.at("pieces")) {
          AllocatedPiece ap;
          ap.agent = p.at("agent").get<std::string>();
          ap.piece = piece_from_json(g, p.at("intervals"));
          if (p.contains("contains_part") && !p.at("contains_part").is_null()) {
            ap.contains_part = p.at("contains_part").get<int>();
          }
          out.pieces.push_back(std::move(ap));
        }
        return out;
      },
      "allocation");
}

json partitions_to_json(const std::vector<AgentPartition>& parts) {
  json arr = json::array();
  for (const AgentPartition& p : parts) {
    json pj = json::array();
    for (const Piece& piece : p.parts) pj.push_back(piece_to_json(piece));
    arr.push_back(json{{"agent", p.agent}, {"parts", pj}});
  }
  return json{{"partitions", arr}};
}

std::vector<AgentPartition> partitions_from_json(const MetricGraph& g, const json& j,
                                                 double default_separation) {
  return guarded(
      [&] {
        std::vector<AgentPartition> out;
        for (const json& p : j.at("partitions")) {
          AgentPartition ap;
          ap.agent = p.at("agent").get<std::string>();
          ap.separation = p.value("s", default_separation);
          for (const json& piece : p.at("parts")) {
            ap.parts.push_back(piece_from_json(g, piece));
          }
          out.push_back(std::move(ap));
        }
        return out;
      },
      "partitions");
}

json mms_result_to_json(const MmsResult& result, const std::string& agent, int k,
                        double s) {
  json parts = json::array();
  for (const Piece& p : result.partition.parts) parts.push_back(piece_to_json(p));
  json out{{"agent", agent},         {"k", k}, {"method", result.method},
           {"partition", parts},     {"s", s}, {"value", result.value}};
  out["resolution"] = result.resolution ? json(*result.resolution) : json(nullptr);
  return out;
}

json report_to_json(const VerifyReport& report) {
  json checks = json::array();
  for (const CheckEntry& c : report.checks) {
    checks.push_back(json{{"detail", c.detail}, {"name", c.name}, {"pass", c.pass}});
  }
  return json{{"checks", checks}, {"pass", report.pass()}};
}

json trace_to_json(const GoodPieceTrace& trace) {
  json pairs = json::array();
  for (const auto& w : trace.pairs) {
    json entry{{"intersects_chosen", w.intersects_chosen}};
    entry["y"] = w.y ? point_to_json(*w.y) : json(nullptr);
    entry["z"] = w.z ? point_to_json(*w.z) : json(nullptr);
    pairs.push_back(std::move(entry));
  }
  json projections = json::array();
  for (const PointRef& p : trace.projections) projections.push_back(point_to_json(p));
  return json{{"chosen", trace.chosen},
              {"pairs", pairs},
              {"projections", projections},
              {"root", point_to_json(trace.root)},
              {"root_distances", trace.root_distances}};
}

}  // namespace graphcake
