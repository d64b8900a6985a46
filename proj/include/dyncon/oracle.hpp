#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dyncon/box.hpp"
#include "dyncon/core.hpp"

namespace dyncon {

// Brute-force reference implementations.  Each call rebuilds from scratch;
// none of them share state with the maintained structures they check.

// BFS over the subgraph induced by active vertices, using g's edges plus the
// extra edge list (both endpoints must still be active to count).
bool oracle_connected_subgraph(
    const BaseGraph& g, const std::vector<char>& active, VertexId u, VertexId v,
    const std::vector<std::pair<VertexId, VertexId>>& extra = {});

// Same reachability, computed with a union-find instead of BFS.
bool oracle_connected_subgraph_uf(
    const BaseGraph& g, const std::vector<char>& active, VertexId u, VertexId v,
    const std::vector<std::pair<VertexId, VertexId>>& extra = {});

// Component label per vertex (UINT32_MAX for inactive); labels are the
// smallest active vertex id in the component.
std::vector<uint32_t> oracle_partition_subgraph(
    const BaseGraph& g, const std::vector<char>& active,
    const std::vector<std::pair<VertexId, VertexId>>& extra = {});

// Closed-box intersection predicate (same as intersects, spelled as oracle).
bool oracle_intersects(const GeomObject& a, const GeomObject& b);

// Connected components of the intersection graph: BFS over the pairwise
// predicate.  Each component is sorted by id; components sorted by first id.
std::vector<std::vector<int64_t>> oracle_components_geom(
    const std::vector<GeomObject>& objects);

bool oracle_connected_geom(const std::vector<GeomObject>& objects, int64_t id1,
                           int64_t id2);

}  // namespace dyncon
