#pragma once

#include <map>

#include "pkgcalc/core.hpp"

// Concurrent-version extension: several versions of a name may be selected
// as long as they map to distinct granularities, with a parent relation
// recording which selected version satisfies each depender. The peer
// extension layers sibling version constraints on top.

namespace pkgcalc {

struct GranularitySpec {
    enum class Kind { Identity, Major, Constant, Table };

    Kind kind = Kind::Identity;
    std::map<Version, GranToken, VersionLess> table;

    static GranularitySpec identity() { return {Kind::Identity, {}}; }
    static GranularitySpec major() { return {Kind::Major, {}}; }
    static GranularitySpec constant() { return {Kind::Constant, {}}; }

    // Throws InvalidInput for Major over non-numeric versions and for table
    // misses.
    GranToken apply(const Version& v) const;
};

struct ParentEdge {
    Package child;
    Package parent;
};

int compare(const ParentEdge& a, const ParentEdge& b);

struct ParentEdgeLess {
    bool operator()(const ParentEdge& a, const ParentEdge& b) const {
        return compare(a, b) < 0;
    }
};
using ParentRelation = std::set<ParentEdge, ParentEdgeLess>;

struct ConcurrentResolution {
    PackageSet selected;
    ParentRelation parents;
};

// Root inclusion, parent closure (each dependency satisfied by exactly one
// selected child witnessed in pi), and version granularity.
ValidityReport validate_concurrent(const CoreInstance& inst, const GranularitySpec& g,
                                   const PackageSet& s, const ParentRelation& pi);

// Renames every package to its granular name; dependencies spanning several
// granularities are routed through an intermediate package with one version
// per granularity. The synthetic root keeps its name.
CoreInstance lower_concurrent(const CoreInstance& inst, const GranularitySpec& g);

ConcurrentResolution lift_concurrent(const Resolution& lowered, const CoreInstance& original,
                                     const GranularitySpec& g);

Resolution embed_concurrent(const ConcurrentResolution& rc, const CoreInstance& original,
                            const GranularitySpec& g);

// Peer dependencies: a parent may only depend on the peer name with a
// version acceptable to its child.
using PeerSet = DependencySet;

// Concurrent validity plus peer satisfaction: the version of the peer name
// witnessed for the parent must lie in the child's peer set.
ValidityReport validate_peer(const CoreInstance& inst, const PeerSet& peers,
                             const GranularitySpec& g, const PackageSet& s,
                             const ParentRelation& pi);

// Every dependency is routed through an intermediate carrying full versions,
// so sibling peer constraints can pin the exact version chosen.
CoreInstance lower_peer(const CoreInstance& inst, const PeerSet& peers, const GranularitySpec& g);

ConcurrentResolution lift_peer(const Resolution& lowered, const CoreInstance& original,
                               const GranularitySpec& g);

Resolution embed_peer(const ConcurrentResolution& rc, const CoreInstance& original,
                      const GranularitySpec& g);

}  // namespace pkgcalc
