#pragma once

#include "pkgcalc/core.hpp"

// Conflict extension: packages may declare that they cannot be installed
// alongside certain versions of a name. Lowered to the core with two-version
// guard packages.

namespace pkgcalc {

struct Conflict {
    Package from;
    NameRef on;
    VersionSet versions;
};

int compare(const Conflict& a, const Conflict& b);

struct ConflictLess {
    bool operator()(const Conflict& a, const Conflict& b) const {
        return compare(a, b) < 0;
    }
};
using ConflictSet = std::set<Conflict, ConflictLess>;

// Core validity plus conflict avoidance: no selected package's conflict set
// may intersect the selection.
ValidityReport validate_conflict_resolution(const CoreInstance& inst, const ConflictSet& conflicts,
                                            const Resolution& s);

// Adds one guard family per distinct (name, versions) conflict target: the
// declarer requires the guard at marker 1, every conflicting version requires
// it at marker 0, and version uniqueness keeps the two apart.
CoreInstance lower_conflicts(const CoreInstance& inst, const ConflictSet& conflicts);

// Drops the guard packages: the lowered selection intersected with the
// original repository (plus the root).
Resolution lift_conflict_resolution(const Resolution& lowered, const CoreInstance& original);

// The reverse direction: re-adds the guard versions implied by the selection.
Resolution embed_conflict_resolution(const Resolution& s, const CoreInstance& original,
                                     const ConflictSet& conflicts);

}  // namespace pkgcalc
