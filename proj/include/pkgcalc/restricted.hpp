#pragma once

#include <optional>

#include "pkgcalc/core.hpp"

// The tractable resolution strategies: minimum-bound resolution (minimum
// version selection and its latest-greedy cousin), uniqueness-free greedy
// traversal, and singular (exact-package) dependencies.

namespace pkgcalc {

struct MinBoundDependency {
    Package from;
    NameRef on;
    Version min_version;  // Numeric
};

int compare(const MinBoundDependency& a, const MinBoundDependency& b);

struct MinBoundDependencyLess {
    bool operator()(const MinBoundDependency& a, const MinBoundDependency& b) const {
        return compare(a, b) < 0;
    }
};
using MinBoundDependencySet = std::set<MinBoundDependency, MinBoundDependencyLess>;

enum class MvsPolicy { Minimum, Latest };

// Worklist traversal from the root. Minimum picks, per reachable name, the
// smallest existing version at or above the maximum of the applicable lower
// bounds (smallest existing version outright when no bound applies); Latest
// picks the largest existing version. Iterates to a fixed point because a
// new selection can expose new bounds. Empty optional means some bound
// exceeds every existing version.
std::optional<Resolution> mvs_resolve(const Repository& repo, const MinBoundDependencySet& mdeps,
                                      const Package& root, MvsPolicy policy);

// Dependency closure under the relaxed condition: a selected version at or
// above the bound exists for every reachable dependency.
bool check_min_bound_closure(const Repository& repo, const MinBoundDependencySet& mdeps,
                             const Package& root, const Resolution& s);

// Uniqueness-free greedy: depth-first from the root, taking the highest
// existing version per dependency edge. May select several versions of one
// name. Empty optional when an edge has no existing target.
std::optional<PackageSet> multiversion_greedy_resolve(const CoreInstance& inst);

struct SingularDependency {
    Package from;
    Package to;
};

int compare(const SingularDependency& a, const SingularDependency& b);

struct SingularDependencyLess {
    bool operator()(const SingularDependency& a, const SingularDependency& b) const {
        return compare(a, b) < 0;
    }
};
using SingularDependencySet = std::set<SingularDependency, SingularDependencyLess>;

// Transitive closure from the root; the unique candidate resolution. Empty
// optional when the closure selects two versions of one name.
std::optional<Resolution> singular_resolve(const Repository& repo,
                                           const SingularDependencySet& sdeps,
                                           const Package& root);

}  // namespace pkgcalc
