#pragma once

#include <map>

#include "pkgcalc/core.hpp"

// Feature extension: packages expose named features; dependencies may
// require features of their dependee, and a selected feature may pull in
// additional dependencies. Lowered via per-feature gate packages.

namespace pkgcalc {

using FeatureName = std::string;
using FeatureSet = std::set<FeatureName>;

struct FeatureDep {
    Package from;
    NameRef on;
    VersionSet versions;
    FeatureSet requires_;
};

int compare(const FeatureDep& a, const FeatureDep& b);
struct FeatureDepLess {
    bool operator()(const FeatureDep& a, const FeatureDep& b) const {
        return compare(a, b) < 0;
    }
};
using FeatureDepSet = std::set<FeatureDep, FeatureDepLess>;

struct AdditionalDep {
    Package from;
    FeatureName feature;
    NameRef on;
    VersionSet versions;
    FeatureSet requires_;
};

int compare(const AdditionalDep& a, const AdditionalDep& b);
struct AdditionalDepLess {
    bool operator()(const AdditionalDep& a, const AdditionalDep& b) const {
        return compare(a, b) < 0;
    }
};
using AdditionalDepSet = std::set<AdditionalDep, AdditionalDepLess>;

struct SupportEntry {
    Package pkg;
    FeatureName feature;
};

int compare(const SupportEntry& a, const SupportEntry& b);
struct SupportLess {
    bool operator()(const SupportEntry& a, const SupportEntry& b) const {
        return compare(a, b) < 0;
    }
};
using SupportSet = std::set<SupportEntry, SupportLess>;

struct FeatureModel {
    SupportSet support;
    FeatureDepSet fdeps;
    AdditionalDepSet adeps;
};

// Selected packages with their selected feature sets; at most one entry per
// package.
using FeatureResolution = std::map<Package, FeatureSet, PackageLess>;

// Throws InvalidInput when a dependency requires a feature some dependee
// version does not support, or an additional dependency's key is
// unsupported.
void check_feature_model(const Repository& repo, const FeatureModel& model);

ValidityReport validate_feature_resolution(const Repository& repo, const FeatureModel& model,
                                           const Package& root, const FeatureResolution& sf);

// Gate packages (⟨n,f⟩, v) per supported feature; gates require their base
// version exactly; feature-requiring dependencies target gates instead of
// bases; additional dependencies emanate from gates.
CoreInstance lower_features(const Repository& repo, const FeatureModel& model,
                            const Package& root);

FeatureResolution lift_feature_resolution(const Resolution& lowered, const Repository& originalRepo,
                                          const Package& root);

Resolution embed_feature_resolution(const FeatureResolution& sf);

}  // namespace pkgcalc
