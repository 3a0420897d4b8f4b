#pragma once

#include <optional>
#include <vector>

#include "pkgcalc/buildgraph.hpp"
#include "pkgcalc/core.hpp"
#include "pkgcalc/ext_concurrent.hpp"
#include "pkgcalc/ext_conflicts.hpp"
#include "pkgcalc/ext_features.hpp"
#include "pkgcalc/ext_formulae.hpp"
#include "pkgcalc/ext_virtual.hpp"
#include "pkgcalc/restricted.hpp"
#include "pkgcalc/versions.hpp"

// Extension stacks: composing the lowering passes in a validated order,
// lifting core resolutions back up through the stack, and the composed
// concurrent-feature semantics.

namespace pkgcalc {

enum class ExtensionTag {
    VersionFormulae,
    Conflicts,
    Concurrent,
    Peer,
    Features,
    PackageFormulae,
    VariableFormulae,
    Virtual,
    Optional,
    Singular,
};

std::string to_string(ExtensionTag t);
std::optional<ExtensionTag> parse_extension_tag(const std::string& s);

using ExtensionStack = std::vector<ExtensionTag>;

// One instance carrying every relation a stack may consume. The root is
// already injected and its query dependencies live in deps (or vdeps).
struct ExtendedInstance {
    Repository repo;
    Package root = root_package();
    DependencySet deps;
    FormulaDependencySet vdeps;
    ConflictSet conflicts;
    GranularitySpec gran;
    bool concurrent = false;  // whether gran is meant to apply
    PeerSet peers;
    FeatureModel features;
    PackageFormulaDeps pdeps;
    std::optional<VariableDecl> decl;
    ProvidesSet provides;
    OptionalSet optionals;
    SingularDependencySet singular;
};

// Throws StackError naming the violated rule. Rules: version-formulae-first,
// features-before-concurrent, concurrent-before-conflicts,
// concurrent-before-package-formulae, features-package-formulae-interaction,
// peer-subsumes-concurrent, singular-exclusive, duplicate-tag, missing-tag.
void validate_stack(const ExtensionStack& stack, const ExtendedInstance& inst);

struct LoweredBundle {
    struct Stage {
        ExtensionTag tag;
        CoreInstance before;  // the instance handed to this pass
        // pass-specific relations, after any rename-awareness rewriting
        ConflictSet conflicts;
        FormulaInstance formulae;
        ProvidesSet provides;
        FeatureModel features;
    };

    CoreInstance core;  // the final core instance
    ExtensionStack stack;
    std::vector<Stage> stages;  // lowering order
    GranularitySpec gran;
};

LoweredBundle lower_stack(const ExtendedInstance& inst, const ExtensionStack& stack);

// Everything a stack lift can recover. parents is at the stage the
// concurrent pass ran on (for a features-then-concurrent stack its
// endpoints include feature gates).
struct ExtendedResolution {
    Resolution base;
    FeatureResolution features;
    ParentRelation parents;
    ProviderRelation providers;
    VarAssignment sigma;
};

ExtendedResolution lift_stack(const Resolution& lowered, const LoweredBundle& bundle);

// Composed concurrent-feature resolution: selected packages with feature
// sets plus a parent relation over the feature-lowered packages (bases and
// gates).
struct CFResolution {
    FeatureResolution sf;
    ParentRelation parents;
};

// Root inclusion, parameterised/additional dependency closure, feature
// unification, then parent closure and version granularity checked on the
// feature-lowered instance.
ValidityReport validate_concurrent_feature(const Repository& repo, const FeatureModel& model,
                                           const GranularitySpec& g, const Package& root,
                                           const CFResolution& r);

}  // namespace pkgcalc
