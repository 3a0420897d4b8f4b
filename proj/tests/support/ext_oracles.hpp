#pragma once

#include <set>
#include <string>

#include "pkgcalc/ext_concurrent.hpp"
#include "pkgcalc/ext_conflicts.hpp"
#include "pkgcalc/ext_features.hpp"
#include "pkgcalc/ext_formulae.hpp"
#include "pkgcalc/ext_virtual.hpp"
#include "pkgcalc/pipeline.hpp"
#include "support/oracles.hpp"

// Brute-force enumeration of extended resolutions, by exhausting small
// candidate spaces against the definitional validators. Round-trip suites
// compare these against the lift image of the lowered instances.

namespace pkgcalc::testing {

// Canonical renderings so resolution sets compare as string sets.
std::string render(const PackageSet& s);
std::string render(const ParentRelation& pi);
std::string render(const ProviderRelation& rho);
std::string render(const FeatureResolution& sf);
std::string render(const VarAssignment& sigma);

using Rendered = std::set<std::string>;

Rendered enumerate_conflict_resolutions(const CoreInstance& inst, const ConflictSet& conflicts);
Rendered enumerate_concurrent_resolutions(const CoreInstance& inst, const GranularitySpec& g);
Rendered enumerate_peer_resolutions(const CoreInstance& inst, const PeerSet& peers,
                                    const GranularitySpec& g);
Rendered enumerate_feature_resolutions(const Repository& repo, const FeatureModel& model,
                                       const Package& root);
Rendered enumerate_formula_resolutions(const FormulaInstance& inst);
Rendered enumerate_virtual_resolutions(const CoreInstance& inst, const ProvidesSet& provides);
Rendered enumerate_cf_resolutions(const Repository& repo, const FeatureModel& model,
                                  const GranularitySpec& g, const Package& root);

// Small random instances per extension; all derive from random_core_instance
// shapes with the extra relations bolted on.
ConflictSet random_conflicts(std::mt19937& g, const CoreInstance& inst, std::size_t max_conflicts);
CoreInstance random_concurrent_instance(std::mt19937& g);
PeerSet random_peers(std::mt19937& g, const CoreInstance& inst, std::size_t max_peers);
std::pair<Repository, FeatureModel> random_feature_model(std::mt19937& g);
FormulaInstance random_formula_instance(std::mt19937& g, bool with_variables);
ProvidesSet random_provides(std::mt19937& g, const CoreInstance& inst, std::size_t max_provides);

}  // namespace pkgcalc::testing
