#pragma once

#include <string>
#include <vector>

#include "pkgcalc/core.hpp"

// Build graph: the installation-order view of a resolution. Optional
// dependencies add ordering edges but never influence resolution.

namespace pkgcalc {

using OptionalSet = DependencySet;

struct GraphEdge {
    Package depender;
    Package dependee;
};

int compare(const GraphEdge& a, const GraphEdge& b);
struct GraphEdgeLess {
    bool operator()(const GraphEdge& a, const GraphEdge& b) const { return compare(a, b) < 0; }
};
using GraphEdgeSet = std::set<GraphEdge, GraphEdgeLess>;

struct BuildGraph {
    PackageSet vertices;
    GraphEdgeSet edges;
};

// Edges from every dependency of a selected package to each selected
// matching version, plus optional edges when the optional dependee happens
// to be selected. Root-incident edges are included by default.
BuildGraph build_graph(const CoreInstance& inst, const OptionalSet& optional, const Resolution& s,
                       bool include_root_edges = true);

struct CycleReport {
    std::vector<Package> cycle;  // one minimal cycle, in edge order
};

// Dependees before dependers; deterministic via canonical package order.
std::variant<std::vector<Package>, CycleReport> topo_order(const BuildGraph& g);

std::string to_dot(const BuildGraph& g);

}  // namespace pkgcalc
