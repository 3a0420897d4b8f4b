#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pkgcalc/model.hpp"

// The core calculus: repositories, the dependency relation, resolution
// validity, the brute-force enumeration oracle, and the freshness ordering
// over resolutions.

namespace pkgcalc {

struct Dependency {
    Package from;
    NameRef on;
    VersionSet versions;
};

int compare(const Dependency& a, const Dependency& b);

struct DependencyLess {
    bool operator()(const Dependency& a, const Dependency& b) const {
        return compare(a, b) < 0;
    }
};
using DependencySet = std::set<Dependency, DependencyLess>;

struct Repository {
    PackageSet packages;

    bool contains(const Package& p) const { return packages.count(p) > 0; }
    // Existing versions of a name (V_n).
    VersionSet versions_of(const NameRef& n) const;
};

struct CoreInstance {
    Repository repo;
    DependencySet deps;
    Package root;
};

struct Resolution {
    PackageSet selected;

    bool contains(const Package& p) const { return selected.count(p) > 0; }
};

inline bool operator==(const Resolution& a, const Resolution& b) {
    if (a.selected.size() != b.selected.size()) return false;
    auto ia = a.selected.begin();
    for (const auto& p : b.selected)
        if (compare(*ia++, p) != 0) return false;
    return true;
}

struct ResolutionLess {
    bool operator()(const Resolution& a, const Resolution& b) const;
};
using ResolutionSet = std::set<Resolution, ResolutionLess>;

struct Violation {
    enum class Kind {
        RootInclusion,
        DependencyClosure,
        VersionUniqueness,
        ConflictAvoidance,
        ParentClosure,
        VersionGranularity,
        PeerSatisfaction,
        FeatureClosure,
        FeatureUnification,
        FormulaClosure,
        ProviderClosure,
        SingularClosure,
    };
    Kind kind;
    std::string detail;
};

struct ValidityReport {
    bool valid = true;
    std::vector<Violation> violations;

    void add(Violation::Kind kind, std::string detail) {
        valid = false;
        violations.push_back({kind, std::move(detail)});
    }
};

// Builds an instance from a user query: injects the synthetic root package
// and turns the query into the root's immediate dependencies.
struct QueryItem {
    NameRef on;
    VersionSet versions;
};

CoreInstance make_instance(Repository repo, DependencySet deps,
                           const std::vector<QueryItem>& query);

// Throws InvalidInput when a dependency references a package outside the
// repository or the root is missing. Returns warnings (empty version sets)
// as human-readable strings.
std::vector<std::string> check_well_formed(const CoreInstance& inst);

// Core validity: root inclusion, dependency closure, version uniqueness.
ValidityReport validate_resolution(const CoreInstance& inst, const Resolution& s);

inline constexpr std::size_t kDefaultOracleBound = 20;
inline constexpr std::size_t kNoLimit = static_cast<std::size_t>(-1);

// Brute-force oracle: all valid resolutions, in canonical order. Enumerates
// one version choice (or none) per name, which covers every subset that can
// satisfy version uniqueness. Throws LimitExceeded past the bounds.
ResolutionSet enumerate_resolutions(const CoreInstance& inst, std::size_t limit = kNoLimit,
                                    std::size_t oracle_bound = kDefaultOracleBound);

enum class ResolutionOrder { LEq, GEq, Eq, Incomparable };

// The freshness partial order <=_S over resolutions.
ResolutionOrder compare_resolutions(const Resolution& s1, const Resolution& s2);

// Elements with no strictly greater resolution under <=_S.
ResolutionSet maximal_resolutions(const ResolutionSet& rs);

}  // namespace pkgcalc
