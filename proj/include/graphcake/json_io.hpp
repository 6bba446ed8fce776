#pragma once

#include <string>
#include <vector>

#include "graphcake/allocator.hpp"
#include "graphcake/good_piece.hpp"
#include "graphcake/instances.hpp"
#include "graphcake/mms.hpp"

#include "json.hpp"

namespace graphcake {

// Canonical form: sorted keys (nlohmann objects are ordered maps), UTF-8,
// LF line endings, two-space indent, shortest round-trip float literals.
std::string canonical_dump(const nlohmann::json& j);

nlohmann::json piece_to_json(const Piece& piece);
Piece piece_from_json(const MetricGraph& g, const nlohmann::json& j);

nlohmann::json instance_to_json(const InstanceDoc& doc);
InstanceDoc instance_from_json(const nlohmann::json& j);

nlohmann::json allocation_to_json(const Allocation& alloc);
Allocation allocation_from_json(const MetricGraph& g, const nlohmann::json& j);

nlohmann::json partitions_to_json(const std::vector<AgentPartition>& parts);
std::vector<AgentPartition> partitions_from_json(const MetricGraph& g,
                                                 const nlohmann::json& j,
                                                 double default_separation);

nlohmann::json mms_result_to_json(const MmsResult& result, const std::string& agent,
                                  int k, double s);
nlohmann::json report_to_json(const VerifyReport& report);
nlohmann::json trace_to_json(const GoodPieceTrace& trace);

}  // namespace graphcake
