#pragma once

#include "obsv/model.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace obsv {

/// Edge i -> j when state j appears (semantically) in the rhs of state i.
/// Self loops are ordinary edges. Edges are sorted and unique.
struct InferenceGraph {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    bool has_edge(std::size_t from, std::size_t to) const;
    std::vector<std::vector<std::size_t>> successors() const;
};

InferenceGraph make_graph(std::vector<std::string> nodes,
                          std::vector<std::pair<std::size_t, std::size_t>> edges);

/// j is a successor of i iff d rhs_i / d x_j is not identically zero.
InferenceGraph build_graph(const OdeSystem& sys);

struct Condensation {
    /// Components ordered by their smallest node index; members ascending.
    std::vector<std::vector<std::size_t>> sccs;
    std::vector<std::size_t> component_of;
    std::vector<std::pair<std::size_t, std::size_t>> dag_edges;
    /// Indices into sccs of components without incoming dag edges.
    std::vector<std::size_t> roots;
};

Condensation scc_condensation(const InferenceGraph& g);

struct SensorSet {
    std::vector<std::string> variables;
    bool minimal = true;
};

struct SensorMenu {
    std::vector<SensorSet> sets;
    bool truncated = false;
};

/// One variable from each root component, all combinations, in
/// lexicographic order of node indices. At most `cap` sets are produced.
SensorMenu minimal_sensor_sets(const InferenceGraph& g, const Condensation& c, std::size_t cap = 10000);

struct GraphVerdict {
    bool sufficient = false;
    /// Root components not hit by the observed set, as node names.
    std::vector<std::vector<std::string>> missing_roots;
};

GraphVerdict graphical_observable(const InferenceGraph& g, const Condensation& c,
                                  const std::set<std::string>& observed);

/// Nodes reachable from `from` by following edges (including `from`).
std::vector<bool> reachable_from(const InferenceGraph& g, const std::set<std::string>& from);

/// DOT digraph with one cluster per component and root members tagged
/// `root=true`.
std::string export_dot(const InferenceGraph& g, const Condensation& c);

}  // namespace obsv
