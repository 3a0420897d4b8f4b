#include "pkgcalc/ext_virtual.hpp"

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

int compare(const Provide& a, const Provide& b) {
    if (int c = compare(a.provider, b.provider)) return c;
    if (int c = compare(a.name, b.name)) return c;
    return compare(a.version, b.version);
}

int compare(const ProviderEdge& a, const ProviderEdge& b) {
    if (int c = compare(a.provider, b.provider)) return c;
    return compare(a.depender, b.depender);
}

namespace {

// v ∈ vs with the wildcard matching any set.
bool matches(const Version& provided, const VersionSet& vs) {
    return provided.is_wildcard() || vs.count(provided) > 0;
}

// Providers applicable to a dependency target.
std::vector<Package> matching_providers(const ProvidesSet& provides, const NameRef& on,
                                        const VersionSet& vs) {
    std::vector<Package> out;
    for (const auto& pr : provides)
        if (same_name(pr.name, on) && matches(pr.version, vs))
            if (out.empty() || !(out.back() == pr.provider)) out.push_back(pr.provider);
    return out;
}

}  // namespace

ValidityReport validate_virtual(const CoreInstance& inst, const ProvidesSet& provides,
                                const PackageSet& s, const ProviderRelation& rho) {
    ValidityReport report;
    for (const auto& p : s)
        if (!inst.repo.contains(p))
            throw InvalidInput("selected package not in repository: " + to_string(p));
    if (!s.count(inst.root))
        report.add(Violation::Kind::RootInclusion, "root not selected");

    auto direct = [&](const NameRef& on, const VersionSet& vs) {
        for (const auto& v : vs)
            if (s.count({on, v})) return true;
        return false;
    };

    for (const auto& d : inst.deps) {
        if (!s.count(d.from)) continue;
        std::size_t witnessed = 0;
        for (const auto& q : matching_providers(provides, d.on, d.versions))
            if (s.count(q) && rho.count({q, d.from})) ++witnessed;
        // A provider edge may replace a directly available version, but each
        // dependency resolves to one target.
        std::size_t needed = direct(d.on, d.versions) ? 0 : 1;
        if (witnessed != needed && witnessed != 1)
            report.add(Violation::Kind::ProviderClosure,
                       to_string(d.from) + " -> " + to_string(d.on) + " " +
                           to_string(d.versions) + " witnessed by " +
                           std::to_string(witnessed) + " providers");
    }

    // Every provider edge must serve some dependency it can satisfy.
    for (const auto& e : rho) {
        bool used = false;
        if (s.count(e.provider) && s.count(e.depender)) {
            for (const auto& d : inst.deps) {
                if (!(d.from == e.depender)) continue;
                for (const auto& q : matching_providers(provides, d.on, d.versions))
                    if (q == e.provider) {
                        used = true;
                        break;
                    }
                if (used) break;
            }
        }
        if (!used)
            report.add(Violation::Kind::ProviderClosure,
                       "unwitnessed provider edge " + to_string(e.provider) + " -> " +
                           to_string(e.depender));
    }

    for (auto a = s.begin(); a != s.end(); ++a) {
        auto b = std::next(a);
        if (b != s.end() && same_name(a->name, b->name))
            report.add(Violation::Kind::VersionUniqueness,
                       "multiple versions of " + to_string(a->name));
    }
    return report;
}

CoreInstance lower_virtual(const CoreInstance& inst, const ProvidesSet& provides) {
    CoreInstance out;
    out.repo = inst.repo;
    out.root = inst.root;
    for (const auto& d : inst.deps) {
        auto prov = matching_providers(provides, d.on, d.versions);
        if (prov.empty()) {
            out.deps.insert(d);
            continue;
        }
        NameRef choice = provider_choice(d.from, d.on);
        VersionSet encs;
        for (const auto& q : prov) {
            Version enc = Version::encoded(q);
            out.repo.packages.insert({choice, enc});
            out.deps.insert({{choice, enc}, q.name, {q.version}});
            encs.insert(enc);
        }
        for (const auto& u : d.versions) {
            if (!inst.repo.contains({d.on, u})) continue;
            Version enc = Version::encoded({d.on, u});
            out.repo.packages.insert({choice, enc});
            out.deps.insert({{choice, enc}, d.on, {u}});
            encs.insert(enc);
        }
        out.deps.insert({d.from, choice, encs});
    }
    return out;
}

VirtualResolution lift_virtual(const Resolution& lowered, const CoreInstance& original) {
    VirtualResolution out;
    for (const auto& p : lowered.selected)
        if (original.repo.contains(p)) out.selected.insert(p);
    for (const auto& p : lowered.selected) {
        const auto* choice = std::get_if<Name::ProviderChoice>(&p.name->repr());
        if (!choice) continue;
        const auto* enc = std::get_if<Version::Encoded>(&p.version.repr());
        if (!enc || same_name(enc->pkg->name, choice->target)) continue;
        // a gratuitously selected choice witnesses nothing
        if (!out.selected.count(*choice->depender)) continue;
        out.providers.insert({*enc->pkg, *choice->depender});
    }
    return out;
}

Resolution embed_virtual(const VirtualResolution& rv, const CoreInstance& original,
                         const ProvidesSet& provides) {
    Resolution out;
    out.selected = rv.selected;
    for (const auto& d : original.deps) {
        if (!rv.selected.count(d.from)) continue;
        auto prov = matching_providers(provides, d.on, d.versions);
        if (prov.empty()) continue;
        NameRef choice = provider_choice(d.from, d.on);
        bool via_provider = false;
        for (const auto& q : prov)
            if (rv.providers.count({q, d.from})) {
                out.selected.insert({choice, Version::encoded(q)});
                via_provider = true;
            }
        // the provider edge wins when both are present
        if (via_provider) continue;
        for (const auto& u : d.versions)
            if (rv.selected.count({d.on, u}))
                out.selected.insert({choice, Version::encoded({d.on, u})});
    }
    return out;
}

}  // namespace pkgcalc
