#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "pkgcalc/errors.hpp"
#include "pkgcalc/frontends.hpp"

// Cross-dialect translation: parse, lower exactly the extensions the target
// dialect cannot express, rename synthetic packages to plain atoms, renumber
// versions where the target's implicit semantics require it, and emit.

namespace pkgcalc {
namespace {

ExtendedInstance parse_dialect(const std::string& text, Dialect d) {
    switch (d) {
        case Dialect::Json: return parse_repo(text);
        case Dialect::Debian: return parse_debctl(text);
        case Dialect::Cargo: return parse_cargotoml(text);
    }
    throw InvalidInput("bad dialect");
}

bool valid_debian_label(const std::string& s) {
    return !s.empty() && s.find_first_of(" \t,()|:") == std::string::npos;
}

bool valid_cargo_label(const std::string& s) {
    return !s.empty() && s.find_first_of("\"\n") == std::string::npos;
}

std::string kind_of(const Name& n) {
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Name::ConflictGuard>) return "guard";
            else if constexpr (std::is_same_v<T, Name::Granular>) return "gran";
            else if constexpr (std::is_same_v<T, Name::Intermediate>) return "mid";
            else if constexpr (std::is_same_v<T, Name::FeatureGate>) return "gate";
            else if constexpr (std::is_same_v<T, Name::DisjunctionNode>) return "or";
            else if constexpr (std::is_same_v<T, Name::GlobalVar>) return "var";
            else if constexpr (std::is_same_v<T, Name::LocalVar>) return "lvar";
            else if constexpr (std::is_same_v<T, Name::ProviderChoice>) return "choice";
            else return "name";
        },
        n.repr());
}

// Rewrites names and versions across a whole instance.
struct Rewriter {
    std::map<NameRef, NameRef, NameLess> names;
    // keyed by original name, then original version
    std::map<NameRef, std::map<Version, Version, VersionLess>, NameLess> versions;

    NameRef name(const NameRef& n) const {
        auto it = names.find(n);
        return it == names.end() ? n : it->second;
    }
    Version version(const NameRef& n, const Version& v) const {
        auto nit = versions.find(n);
        if (nit == versions.end()) return v;
        auto vit = nit->second.find(v);
        return vit == nit->second.end() ? v : vit->second;
    }
    Package pkg(const Package& p) const { return {name(p.name), version(p.name, p.version)}; }
    VersionSet vset(const NameRef& n, const VersionSet& vs) const {
        VersionSet out;
        for (const auto& v : vs) out.insert(version(n, v));
        return out;
    }

    FormulaRef formula(const FormulaRef& psi) const {
        return std::visit(
            [&](const auto& node) -> FormulaRef {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, PackageFormula::Dep>)
                    return PackageFormula::dep(name(node.on), vset(node.on, node.versions));
                else if constexpr (std::is_same_v<T, PackageFormula::And>)
                    return PackageFormula::conj(formula(node.l), formula(node.r));
                else if constexpr (std::is_same_v<T, PackageFormula::Or>)
                    return PackageFormula::disj(formula(node.l), formula(node.r));
                else if constexpr (std::is_same_v<T, PackageFormula::Not>)
                    return PackageFormula::neg(formula(node.inner));
                else if constexpr (std::is_same_v<T, PackageFormula::GCmp>)
                    return PackageFormula::gcmp(node.var, node.op, node.value);
                else
                    return PackageFormula::lcmp(node.var, node.op, node.value);
            },
            psi->repr());
    }

    void apply(ExtendedInstance& inst) const {
        Repository repo;
        for (const auto& p : inst.repo.packages) repo.packages.insert(pkg(p));
        inst.repo = std::move(repo);

        DependencySet deps;
        for (const auto& d : inst.deps)
            deps.insert({pkg(d.from), name(d.on), vset(d.on, d.versions)});
        inst.deps = std::move(deps);

        ConflictSet conflicts;
        for (const auto& c : inst.conflicts)
            conflicts.insert({pkg(c.from), name(c.on), vset(c.on, c.versions)});
        inst.conflicts = std::move(conflicts);

        ProvidesSet provides;
        for (const auto& p : inst.provides)
            provides.insert({pkg(p.provider), name(p.name),
                             p.version.is_wildcard() ? p.version : version(p.name, p.version)});
        inst.provides = std::move(provides);

        PeerSet peers;
        for (const auto& d : inst.peers)
            peers.insert({pkg(d.from), name(d.on), vset(d.on, d.versions)});
        inst.peers = std::move(peers);

        FeatureModel features;
        for (const auto& s : inst.features.support)
            features.support.insert({pkg(s.pkg), s.feature});
        for (const auto& d : inst.features.fdeps)
            features.fdeps.insert({pkg(d.from), name(d.on), vset(d.on, d.versions), d.requires_});
        for (const auto& d : inst.features.adeps)
            features.adeps.insert(
                {pkg(d.from), d.feature, name(d.on), vset(d.on, d.versions), d.requires_});
        inst.features = std::move(features);

        for (auto& d : inst.pdeps) d = {pkg(d.from), formula(d.formula)};
    }
};

}  // namespace

Translation translate_detailed(const std::string& text, Dialect from, Dialect to) {
    ExtendedInstance inst = parse_dialect(text, from);
    Translation out;

    if (to == Dialect::Json) {
        for (const auto& p : inst.repo.packages) out.renames.emplace(p, p);
        out.text = emit_repo(inst);
        return out;
    }

    // which source extensions the target must have lowered away
    auto full = infer_stack(inst);
    auto supported = [&](ExtensionTag t) {
        if (to == Dialect::Debian)
            return t == ExtensionTag::Conflicts || t == ExtensionTag::Virtual ||
                   t == ExtensionTag::PackageFormulae;
        if (t == ExtensionTag::Features) return true;
        if (t == ExtensionTag::Concurrent)
            return inst.gran.kind == GranularitySpec::Kind::Major;
        return false;
    };
    std::set<ExtensionTag> lowered;
    for (auto t : full)
        if (!supported(t)) lowered.insert(t);
    // a renaming pass invalidates the names every later relation mentions,
    // so everything it would rename gets lowered along with it
    if (lowered.count(ExtensionTag::Concurrent) || lowered.count(ExtensionTag::Peer))
        for (auto t : {ExtensionTag::Conflicts, ExtensionTag::PackageFormulae,
                       ExtensionTag::VariableFormulae, ExtensionTag::Virtual,
                       ExtensionTag::Features})
            if (std::find(full.begin(), full.end(), t) != full.end()) lowered.insert(t);

    ExtensionStack stack;
    for (auto t : full)
        if (lowered.count(t)) stack.push_back(t);

    ExtendedInstance src = inst;
    ExtendedInstance target;
    auto kept = [&](ExtensionTag t) {
        return !lowered.count(t) && std::find(full.begin(), full.end(), t) != full.end();
    };
    if (kept(ExtensionTag::Conflicts)) {
        target.conflicts = std::move(src.conflicts);
        src.conflicts.clear();
    }
    if (kept(ExtensionTag::Virtual)) {
        target.provides = std::move(src.provides);
        src.provides.clear();
    }
    if (kept(ExtensionTag::PackageFormulae) || kept(ExtensionTag::VariableFormulae)) {
        target.pdeps = std::move(src.pdeps);
        target.decl = std::move(src.decl);
        src.pdeps.clear();
        src.decl.reset();
    }
    if (kept(ExtensionTag::Features)) {
        target.features = std::move(src.features);
        src.features = {};
    }
    if (kept(ExtensionTag::Concurrent)) src.concurrent = false;

    validate_stack(stack, src);
    LoweredBundle bundle = lower_stack(src, stack);

    target.repo = bundle.core.repo;
    target.root = inst.root;
    target.deps = bundle.core.deps;
    if (to == Dialect::Cargo) {
        target.concurrent = true;
        target.gran = GranularitySpec::major();
    }

    // rename synthetic (or otherwise inexpressible) names to fresh atoms
    Rewriter rw;
    std::set<std::string> taken;
    std::set<NameRef, NameLess> mentioned;
    auto mention = [&](const NameRef& n) { mentioned.insert(n); };
    for (const auto& p : target.repo.packages) mention(p.name);
    for (const auto& d : target.deps) mention(d.on);
    for (const auto& c : target.conflicts) mention(c.on);
    for (const auto& p : target.provides) mention(p.name);
    for (const auto& n : mentioned)
        if (n->is_atom()) taken.insert(std::get<Name::Atom>(n->repr()).label);

    auto valid_label = to == Dialect::Debian ? valid_debian_label : valid_cargo_label;
    std::size_t counter = 0;
    for (const auto& n : mentioned) {
        if (n->is_root()) continue;
        if (n->is_atom() && valid_label(std::get<Name::Atom>(n->repr()).label)) continue;
        std::string label;
        do {
            label = "syn-" + kind_of(*n) + "-" + std::to_string(++counter);
        } while (taken.count(label));
        taken.insert(label);
        rw.names.emplace(n, atom(label));
    }

    // renumber versions the target cannot carry: Debian needs numerics; a
    // manifest without explicit concurrency must keep each name inside one
    // major version, since re-parsing imposes major granularity
    for (const auto& n : mentioned) {
        if (n->is_root()) continue;
        VersionSet vs = target.repo.versions_of(n);
        if (vs.empty()) continue;
        bool all_numeric = true;
        std::set<std::uint64_t> majors;
        for (const auto& v : vs) {
            if (v.is_numeric())
                majors.insert(v.segments().empty() ? 0 : v.segments()[0]);
            else
                all_numeric = false;
        }
        bool renumber;
        if (to == Dialect::Debian)
            renumber = !all_numeric;
        else
            renumber = !all_numeric ||
                       (!kept(ExtensionTag::Concurrent) && majors.size() > 1);
        if (!renumber) continue;
        std::uint64_t k = 0;
        auto& vmap = rw.versions[n];
        for (const auto& v : vs)
            vmap.emplace(v, to == Dialect::Debian ? Version::numeric({++k})
                                                  : Version::numeric({1, k++}));
    }

    for (const auto& p : target.repo.packages) out.renames.emplace(p, rw.pkg(p));
    rw.apply(target);
    out.text = to == Dialect::Debian ? emit_debctl(target) : emit_cargotoml(target);
    return out;
}

std::string translate(const std::string& text, Dialect from, Dialect to) {
    return translate_detailed(text, from, to).text;
}

}  // namespace pkgcalc
