#include "pkgcalc/pipeline.hpp"

#include <algorithm>
#include <map>

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

std::string to_string(ExtensionTag t) {
    switch (t) {
        case ExtensionTag::VersionFormulae: return "version-formulae";
        case ExtensionTag::Conflicts: return "conflicts";
        case ExtensionTag::Concurrent: return "concurrent";
        case ExtensionTag::Peer: return "peer";
        case ExtensionTag::Features: return "features";
        case ExtensionTag::PackageFormulae: return "package-formulae";
        case ExtensionTag::VariableFormulae: return "variable-formulae";
        case ExtensionTag::Virtual: return "virtual";
        case ExtensionTag::Optional: return "optional";
        case ExtensionTag::Singular: return "singular";
    }
    return "?";
}

std::optional<ExtensionTag> parse_extension_tag(const std::string& s) {
    static const std::pair<const char*, ExtensionTag> table[] = {
        {"version-formulae", ExtensionTag::VersionFormulae},
        {"conflicts", ExtensionTag::Conflicts},
        {"concurrent", ExtensionTag::Concurrent},
        {"peer", ExtensionTag::Peer},
        {"features", ExtensionTag::Features},
        {"package-formulae", ExtensionTag::PackageFormulae},
        {"variable-formulae", ExtensionTag::VariableFormulae},
        {"virtual", ExtensionTag::Virtual},
        {"optional", ExtensionTag::Optional},
        {"singular", ExtensionTag::Singular},
    };
    for (const auto& [name, tag] : table)
        if (s == name) return tag;
    return std::nullopt;
}

namespace {

bool formula_tag(ExtensionTag t) {
    return t == ExtensionTag::PackageFormulae || t == ExtensionTag::VariableFormulae;
}

bool renaming_tag(ExtensionTag t) {
    return t == ExtensionTag::Concurrent || t == ExtensionTag::Peer;
}

std::optional<std::size_t> position(const ExtensionStack& stack, ExtensionTag t) {
    for (std::size_t i = 0; i < stack.size(); ++i)
        if (stack[i] == t) return i;
    return std::nullopt;
}

}  // namespace

void validate_stack(const ExtensionStack& stack, const ExtendedInstance& inst) {
    for (std::size_t i = 0; i < stack.size(); ++i)
        for (std::size_t j = i + 1; j < stack.size(); ++j)
            if (stack[i] == stack[j])
                throw StackError("duplicate-tag", to_string(stack[i]) + " appears twice");

    auto vf = position(stack, ExtensionTag::VersionFormulae);
    if (vf && *vf != 0)
        throw StackError("version-formulae-first",
                         "version-formulae must be the first pass");

    auto conc = position(stack, ExtensionTag::Concurrent);
    auto peer = position(stack, ExtensionTag::Peer);
    if (conc && peer)
        throw StackError("peer-subsumes-concurrent",
                         "peer already includes the concurrent lowering");
    auto renaming = conc ? conc : peer;

    auto feat = position(stack, ExtensionTag::Features);
    if (feat && renaming && *feat > *renaming)
        throw StackError("features-before-concurrent",
                         "features must be lowered before concurrent versions");

    auto confl = position(stack, ExtensionTag::Conflicts);
    if (confl && renaming && *confl < *renaming)
        throw StackError("concurrent-before-conflicts",
                         "the marker encoding needs version uniqueness restored first");

    std::optional<std::size_t> form;
    for (auto t : {ExtensionTag::PackageFormulae, ExtensionTag::VariableFormulae})
        if (auto p = position(stack, t)) form = form ? std::min(*form, *p) : *p;
    if (form && renaming && *form < *renaming)
        throw StackError("concurrent-before-package-formulae",
                         "the negation encoding needs version uniqueness restored first");

    if (feat && form)
        throw StackError("features-package-formulae-interaction",
                         "formula atoms with feature annotations are unsupported");

    if (auto sing = position(stack, ExtensionTag::Singular)) {
        (void)sing;
        for (auto t : stack)
            if (t != ExtensionTag::Singular && t != ExtensionTag::Optional)
                throw StackError("singular-exclusive",
                                 "singular dependencies exclude " + to_string(t));
    }

    auto require = [&](bool relation_present, ExtensionTag t) {
        if (relation_present && !position(stack, t))
            throw StackError("missing-tag",
                             "instance carries " + to_string(t) + " relations");
    };
    require(!inst.vdeps.empty(), ExtensionTag::VersionFormulae);
    require(!inst.conflicts.empty(), ExtensionTag::Conflicts);
    require(!inst.peers.empty(), ExtensionTag::Peer);
    require(!inst.features.support.empty() || !inst.features.adeps.empty(),
            ExtensionTag::Features);
    require(!inst.provides.empty(), ExtensionTag::Virtual);
    require(!inst.singular.empty(), ExtensionTag::Singular);
    if (!inst.pdeps.empty() && !form)
        throw StackError("missing-tag", "instance carries formula dependencies");
    if (position(stack, ExtensionTag::VariableFormulae) && !inst.decl)
        throw StackError("missing-tag", "variable-formulae needs a variable declaration");
}

namespace {

Package rename_package(const Package& p, const GranularitySpec& g, const Package& root) {
    if (p == root) return p;
    return {granular(p.name, g.apply(p.version)), p.version};
}

struct GranTokenLess {
    bool operator()(const GranToken& a, const GranToken& b) const { return compare(a, b) < 0; }
};

// Splits a version set into per-granularity buckets, smallest token first.
std::map<GranToken, VersionSet, GranTokenLess> buckets_of(const VersionSet& vs,
                                                          const GranularitySpec& g) {
    std::map<GranToken, VersionSet, GranTokenLess> out;
    for (const auto& v : vs) out[g.apply(v)].insert(v);
    return out;
}

ConflictSet rename_conflicts(const ConflictSet& conflicts, const GranularitySpec& g,
                             const Package& root) {
    ConflictSet out;
    for (const auto& c : conflicts) {
        Package from = rename_package(c.from, g, root);
        for (const auto& [tok, vs] : buckets_of(c.versions, g))
            out.insert({from, granular(c.on, tok), vs});
    }
    return out;
}

ProvidesSet rename_provides(const ProvidesSet& provides, const GranularitySpec& g,
                            const Package& root) {
    ProvidesSet out;
    for (const auto& pv : provides)
        out.insert({rename_package(pv.provider, g, root), pv.name, pv.version});
    return out;
}

FormulaRef rename_formula(const FormulaRef& psi, const GranularitySpec& g) {
    return std::visit(
        [&](const auto& f) -> FormulaRef {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PackageFormula::Dep>) {
                auto bs = buckets_of(f.versions, g);
                if (bs.empty())
                    return PackageFormula::dep(granular(f.on, GranToken::epsilon()), {});
                FormulaRef acc;
                for (const auto& [tok, vs] : bs) {
                    auto atom = PackageFormula::dep(granular(f.on, tok), vs);
                    acc = acc ? PackageFormula::disj(acc, atom) : atom;
                }
                return acc;
            } else if constexpr (std::is_same_v<T, PackageFormula::And>) {
                return PackageFormula::conj(rename_formula(f.l, g), rename_formula(f.r, g));
            } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                return PackageFormula::disj(rename_formula(f.l, g), rename_formula(f.r, g));
            } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                return PackageFormula::neg(rename_formula(f.inner, g));
            } else {
                return psi;  // variable comparisons carry no package names
            }
        },
        psi->repr());
}

}  // namespace

LoweredBundle lower_stack(const ExtendedInstance& inst, const ExtensionStack& stack) {
    validate_stack(stack, inst);

    LoweredBundle bundle;
    bundle.stack = stack;
    bundle.gran = inst.gran;

    CoreInstance cur{inst.repo, inst.deps, inst.root};
    bool renamed = false;

    for (auto tag : stack) {
        LoweredBundle::Stage st;
        st.tag = tag;
        st.before = cur;
        switch (tag) {
            case ExtensionTag::VersionFormulae: {
                CoreInstance low = lower_version_formulae(cur.repo, inst.vdeps, cur.root);
                low.deps.insert(cur.deps.begin(), cur.deps.end());
                cur = std::move(low);
                break;
            }
            case ExtensionTag::Conflicts: {
                st.conflicts = renamed ? rename_conflicts(inst.conflicts, inst.gran, inst.root)
                                       : inst.conflicts;
                cur = lower_conflicts(cur, st.conflicts);
                break;
            }
            case ExtensionTag::Concurrent:
                cur = lower_concurrent(cur, inst.gran);
                renamed = true;
                break;
            case ExtensionTag::Peer:
                cur = lower_peer(cur, inst.peers, inst.gran);
                renamed = true;
                break;
            case ExtensionTag::Features: {
                FeatureModel m = inst.features;
                for (const auto& d : cur.deps) m.fdeps.insert({d.from, d.on, d.versions, {}});
                check_feature_model(cur.repo, m);
                st.features = m;
                cur = lower_features(cur.repo, m, cur.root);
                break;
            }
            case ExtensionTag::PackageFormulae:
            case ExtensionTag::VariableFormulae: {
                PackageFormulaDeps pd;
                for (const auto& fd : inst.pdeps) {
                    Package from =
                        renamed ? rename_package(fd.from, inst.gran, inst.root) : fd.from;
                    FormulaRef psi =
                        renamed ? rename_formula(fd.formula, inst.gran) : fd.formula;
                    pd.push_back({from, psi});
                }
                for (const auto& d : cur.deps)
                    pd.push_back({d.from, PackageFormula::dep(d.on, d.versions)});
                FormulaInstance fi{cur.repo, std::move(pd), cur.root,
                                   tag == ExtensionTag::VariableFormulae ? inst.decl
                                                                         : std::nullopt};
                st.formulae = fi;
                cur = lower_formulae(fi);
                break;
            }
            case ExtensionTag::Virtual: {
                st.provides = renamed ? rename_provides(inst.provides, inst.gran, inst.root)
                                      : inst.provides;
                cur = lower_virtual(cur, st.provides);
                break;
            }
            case ExtensionTag::Optional:
                break;  // ordering-only; never affects resolution
            case ExtensionTag::Singular:
                for (const auto& sd : inst.singular)
                    cur.deps.insert({sd.from, sd.to.name, {sd.to.version}});
                break;
        }
        bundle.stages.push_back(std::move(st));
    }
    bundle.core = cur;
    return bundle;
}

ExtendedResolution lift_stack(const Resolution& lowered, const LoweredBundle& bundle) {
    ExtendedResolution out;
    Resolution cur = lowered;
    for (auto it = bundle.stages.rbegin(); it != bundle.stages.rend(); ++it) {
        const auto& st = *it;
        switch (st.tag) {
            case ExtensionTag::VersionFormulae:
            case ExtensionTag::Optional:
            case ExtensionTag::Singular:
                break;
            case ExtensionTag::Conflicts:
                cur = lift_conflict_resolution(cur, st.before);
                break;
            case ExtensionTag::Concurrent: {
                auto rc = lift_concurrent(cur, st.before, bundle.gran);
                out.parents = rc.parents;
                cur.selected = std::move(rc.selected);
                break;
            }
            case ExtensionTag::Peer: {
                auto rc = lift_peer(cur, st.before, bundle.gran);
                out.parents = rc.parents;
                cur.selected = std::move(rc.selected);
                break;
            }
            case ExtensionTag::Features: {
                out.features =
                    lift_feature_resolution(cur, st.before.repo, st.before.root);
                cur.selected.clear();
                for (const auto& [p, fs] : out.features) cur.selected.insert(p);
                break;
            }
            case ExtensionTag::PackageFormulae:
            case ExtensionTag::VariableFormulae: {
                auto fr = lift_formula_resolution(cur, st.formulae);
                out.sigma = std::move(fr.sigma);
                cur.selected = std::move(fr.selected);
                break;
            }
            case ExtensionTag::Virtual: {
                auto rv = lift_virtual(cur, st.before);
                out.providers = std::move(rv.providers);
                cur.selected = std::move(rv.selected);
                break;
            }
        }
    }
    out.base = std::move(cur);
    return out;
}

ValidityReport validate_concurrent_feature(const Repository& repo, const FeatureModel& model,
                                           const GranularitySpec& g, const Package& root,
                                           const CFResolution& r) {
    ValidityReport rep;

    auto root_it = r.sf.find(root);
    if (root_it == r.sf.end() || !root_it->second.empty())
        rep.add(Violation::Kind::RootInclusion, "root missing or carries features");

    for (const auto& [p, fs] : r.sf)
        for (const auto& f : fs)
            if (!model.support.count({p, f}))
                rep.add(Violation::Kind::FeatureClosure,
                        to_string(p) + " selects unsupported feature " + f);

    auto satisfied = [&](const NameRef& on, const VersionSet& vs, const FeatureSet& need) {
        for (const auto& [q, qfs] : r.sf)
            if (same_name(q.name, on) && vs.count(q.version) &&
                std::includes(qfs.begin(), qfs.end(), need.begin(), need.end()))
                return true;
        return false;
    };
    for (const auto& [p, fs] : r.sf) {
        for (const auto& d : model.fdeps)
            if (d.from == p && !satisfied(d.on, d.versions, d.requires_))
                rep.add(Violation::Kind::FeatureClosure,
                        to_string(p) + " -> " + to_string(d.on) + " unsatisfied");
        for (const auto& a : model.adeps)
            if (a.from == p && fs.count(a.feature) &&
                !satisfied(a.on, a.versions, a.requires_))
                rep.add(Violation::Kind::FeatureClosure,
                        to_string(p) + "[" + a.feature + "] -> " + to_string(a.on) +
                            " unsatisfied");
    }

    // Feature unification is scoped per selected version: distinct versions
    // of one name may carry different feature sets once granularity admits
    // them, and the map representation already unifies per package.

    // parent closure and version granularity, on the feature-lowered core
    CoreInstance lowered = lower_features(repo, model, root);
    Resolution sc = embed_feature_resolution(r.sf);
    auto conc = validate_concurrent(lowered, g, sc.selected, r.parents);
    for (const auto& v : conc.violations)
        if (v.kind == Violation::Kind::ParentClosure ||
            v.kind == Violation::Kind::VersionGranularity)
            rep.add(v.kind, v.detail);
    return rep;
}

}  // namespace pkgcalc
