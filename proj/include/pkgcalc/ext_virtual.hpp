#pragma once

#include "pkgcalc/core.hpp"

// Virtual packages: a package may provide another name at a version (or at
// any version, via the wildcard), and dependencies on a provided name can be
// satisfied by a unique selected provider witnessed in rho.

namespace pkgcalc {

struct Provide {
    Package provider;
    NameRef name;
    Version version;  // Wildcard matches every version set
};

int compare(const Provide& a, const Provide& b);
struct ProvideLess {
    bool operator()(const Provide& a, const Provide& b) const { return compare(a, b) < 0; }
};
using ProvidesSet = std::set<Provide, ProvideLess>;

struct ProviderEdge {
    Package provider;
    Package depender;
};

int compare(const ProviderEdge& a, const ProviderEdge& b);
struct ProviderEdgeLess {
    bool operator()(const ProviderEdge& a, const ProviderEdge& b) const {
        return compare(a, b) < 0;
    }
};
using ProviderRelation = std::set<ProviderEdge, ProviderEdgeLess>;

struct VirtualResolution {
    PackageSet selected;
    ProviderRelation providers;
};

ValidityReport validate_virtual(const CoreInstance& inst, const ProvidesSet& provides,
                                const PackageSet& s, const ProviderRelation& rho);

// Dependencies with an applicable provider are routed through a per-(p, n)
// choice package whose versions encode the chosen target.
CoreInstance lower_virtual(const CoreInstance& inst, const ProvidesSet& provides);

VirtualResolution lift_virtual(const Resolution& lowered, const CoreInstance& original);

Resolution embed_virtual(const VirtualResolution& rv, const CoreInstance& original,
                         const ProvidesSet& provides);

}  // namespace pkgcalc
