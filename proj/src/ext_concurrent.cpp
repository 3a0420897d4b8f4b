#include "pkgcalc/ext_concurrent.hpp"

#include <map>

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

namespace {

struct GranTokenLess {
    bool operator()(const GranToken& a, const GranToken& b) const {
        return compare(a, b) < 0;
    }
};

// Buckets a version set by granularity token.
std::map<GranToken, VersionSet, GranTokenLess> bucket_by_token(const VersionSet& vs,
                                                               const GranularitySpec& g) {
    std::map<GranToken, VersionSet, GranTokenLess> out;
    for (const auto& v : vs) out[g.apply(v)].insert(v);
    return out;
}

Package rename(const Package& p, const Package& root, const GranularitySpec& g) {
    if (p == root) return p;
    return {granular(p.name, g.apply(p.version)), p.version};
}

}  // namespace

GranToken GranularitySpec::apply(const Version& v) const {
    switch (kind) {
        case Kind::Identity:
            return GranToken::of_version(v);
        case Kind::Major:
            if (!v.is_numeric())
                throw InvalidInput("major granularity of non-numeric version " + to_string(v));
            return GranToken::major(v.segments().empty() ? 0 : v.segments()[0]);
        case Kind::Constant:
            return GranToken::epsilon();
        case Kind::Table: {
            auto it = table.find(v);
            if (it == table.end())
                throw InvalidInput("granularity table misses version " + to_string(v));
            return it->second;
        }
    }
    throw InvalidInput("bad granularity kind");
}

int compare(const ParentEdge& a, const ParentEdge& b) {
    if (int c = compare(a.child, b.child)) return c;
    return compare(a.parent, b.parent);
}

ValidityReport validate_concurrent(const CoreInstance& inst, const GranularitySpec& g,
                                   const PackageSet& s, const ParentRelation& pi) {
    ValidityReport report;
    if (!s.count(inst.root))
        report.add(Violation::Kind::RootInclusion, "root " + to_string(inst.root) + " not selected");

    for (const auto& e : pi) {
        if (!s.count(e.child) || !s.count(e.parent)) {
            report.add(Violation::Kind::ParentClosure,
                       "parent edge " + to_string(e.child) + " -> " + to_string(e.parent) +
                           " has an unselected endpoint");
            continue;
        }
        bool witnessed = false;
        for (const auto& d : inst.deps)
            if (d.from == e.parent && same_name(d.on, e.child.name) &&
                d.versions.count(e.child.version)) {
                witnessed = true;
                break;
            }
        if (!witnessed)
            report.add(Violation::Kind::ParentClosure,
                       "parent edge " + to_string(e.child) + " -> " + to_string(e.parent) +
                           " matches no dependency");
    }

    for (const auto& d : inst.deps) {
        if (!s.count(d.from)) continue;
        std::size_t hits = 0;
        for (const auto& v : d.versions) {
            Package child{d.on, v};
            if (s.count(child) && pi.count({child, d.from})) ++hits;
        }
        if (hits != 1)
            report.add(Violation::Kind::ParentClosure,
                       to_string(d.from) + " -> " + to_string(d.on) + " " + to_string(d.versions) +
                           " witnessed by " + std::to_string(hits) + " children");
    }

    // Same-name selections must land in distinct granularities.
    std::map<NameRef, std::vector<Version>, NameLess> by_name;
    for (const auto& p : s) by_name[p.name].push_back(p.version);
    for (const auto& [name, versions] : by_name) {
        if (versions.size() < 2) continue;
        std::set<GranToken, GranTokenLess> seen;
        for (const auto& v : versions)
            if (!seen.insert(g.apply(v)).second)
                report.add(Violation::Kind::VersionGranularity,
                           "granularity collision on " + to_string(name));
    }
    return report;
}

CoreInstance lower_concurrent(const CoreInstance& inst, const GranularitySpec& g) {
    CoreInstance out;
    out.root = inst.root;
    for (const auto& p : inst.repo.packages)
        out.repo.packages.insert(rename(p, inst.root, g));

    for (const auto& d : inst.deps) {
        Package from = rename(d.from, inst.root, g);
        auto buckets = bucket_by_token(d.versions, g);
        if (buckets.empty()) {
            out.deps.insert({from, granular(d.on, GranToken::epsilon()), {}});
        } else if (buckets.size() == 1) {
            out.deps.insert({from, granular(d.on, buckets.begin()->first), d.versions});
        } else {
            NameRef inter = intermediate(d.from.name, d.from.version, d.on);
            VersionSet tokens;
            for (const auto& [w, bucket] : buckets) {
                Package iw{inter, Version::gran(w)};
                out.repo.packages.insert(iw);
                out.deps.insert({iw, granular(d.on, w), bucket});
                tokens.insert(iw.version);
            }
            out.deps.insert({from, inter, tokens});
        }
    }
    return out;
}

ConcurrentResolution lift_concurrent(const Resolution& lowered, const CoreInstance& original,
                                     const GranularitySpec& g) {
    ConcurrentResolution out;
    for (const auto& p : original.repo.packages)
        if (lowered.contains(rename(p, original.root, g))) out.selected.insert(p);

    // Split-case witnesses come from selected intermediates.
    for (const auto& p : lowered.selected) {
        const auto* inter = std::get_if<Name::Intermediate>(&p.name->repr());
        if (!inter || !std::holds_alternative<Version::Gran>(p.version.repr())) continue;
        const auto& w = std::get<Version::Gran>(p.version.repr()).token;
        Package parent{inter->owner, inter->owner_version};
        // a gratuitously selected intermediate witnesses nothing
        if (!out.selected.count(parent) && !(parent == original.root)) continue;
        for (const auto& q : original.repo.packages)
            if (same_name(q.name, inter->target) && compare(g.apply(q.version), w) == 0 &&
                out.selected.count(q))
                out.parents.insert({q, parent});
    }
    // Direct-case witnesses come straight from single-granularity deps.
    for (const auto& d : original.deps) {
        if (bucket_by_token(d.versions, g).size() != 1) continue;
        if (!out.selected.count(d.from)) continue;
        for (const auto& u : d.versions)
            if (out.selected.count({d.on, u})) out.parents.insert({{d.on, u}, d.from});
    }
    return out;
}

Resolution embed_concurrent(const ConcurrentResolution& rc, const CoreInstance& original,
                            const GranularitySpec& g) {
    Resolution out;
    for (const auto& p : rc.selected) out.selected.insert(rename(p, original.root, g));
    for (const auto& d : original.deps) {
        if (bucket_by_token(d.versions, g).size() < 2) continue;
        if (!rc.selected.count(d.from)) continue;
        NameRef inter = intermediate(d.from.name, d.from.version, d.on);
        for (const auto& u : d.versions) {
            Package child{d.on, u};
            if (rc.selected.count(child) && rc.parents.count({child, d.from}))
                out.selected.insert({inter, Version::gran(g.apply(u))});
        }
    }
    return out;
}

ValidityReport validate_peer(const CoreInstance& inst, const PeerSet& peers,
                             const GranularitySpec& g, const PackageSet& s,
                             const ParentRelation& pi) {
    ValidityReport report = validate_concurrent(inst, g, s, pi);
    for (const auto& peer : peers) {
        if (!s.count(peer.from)) continue;
        for (const auto& e : pi) {
            if (!(e.child == peer.from)) continue;
            const Package& parent = e.parent;
            for (const auto& d : inst.deps) {
                if (!(d.from == parent) || !same_name(d.on, peer.on)) continue;
                // The version witnessed for the parent must also satisfy the
                // child's peer constraint.
                for (const auto& u : d.versions) {
                    Package chosen{d.on, u};
                    if (s.count(chosen) && pi.count({chosen, parent}) && !peer.versions.count(u))
                        report.add(Violation::Kind::PeerSatisfaction,
                                   to_string(peer.from) + " peer on " + to_string(peer.on) +
                                       " unsatisfied by " + to_string(chosen));
                }
            }
        }
    }
    return report;
}

CoreInstance lower_peer(const CoreInstance& inst, const PeerSet& peers, const GranularitySpec& g) {
    CoreInstance out;
    out.root = inst.root;
    for (const auto& p : inst.repo.packages)
        out.repo.packages.insert(rename(p, inst.root, g));

    for (const auto& d : inst.deps) {
        NameRef inter = intermediate(d.from.name, d.from.version, d.on);
        for (const auto& u : d.versions) {
            Package iu{inter, u};
            out.repo.packages.insert(iu);
            out.deps.insert({iu, granular(d.on, g.apply(u)), {u}});
        }
        out.deps.insert({rename(d.from, inst.root, g), inter, d.versions});

        // Sibling children with a peer constraint on this dependency's target
        // narrow the intermediate's choice to the peer set.
        for (const auto& sib : inst.deps) {
            if (!(sib.from == d.from) || same_name(sib.on, d.on)) continue;
            NameRef sib_inter = intermediate(d.from.name, d.from.version, sib.on);
            for (const auto& u : sib.versions) {
                for (const auto& peer : peers) {
                    if (!(peer.from == Package{sib.on, u}) || !same_name(peer.on, d.on)) continue;
                    for (const auto& w : peer.versions) {
                        Package iw{inter, w};
                        out.repo.packages.insert(iw);
                        out.deps.insert({iw, granular(d.on, g.apply(w)), {w}});
                    }
                    out.deps.insert({{sib_inter, u}, inter, peer.versions});
                }
            }
        }
    }
    return out;
}

ConcurrentResolution lift_peer(const Resolution& lowered, const CoreInstance& original,
                               const GranularitySpec& g) {
    ConcurrentResolution out;
    for (const auto& p : original.repo.packages)
        if (lowered.contains(rename(p, original.root, g))) out.selected.insert(p);
    for (const auto& p : lowered.selected) {
        const auto* inter = std::get_if<Name::Intermediate>(&p.name->repr());
        if (!inter) continue;
        Package child{inter->target, p.version};
        Package parent{inter->owner, inter->owner_version};
        if (out.selected.count(child) &&
            (out.selected.count(parent) || parent == original.root))
            out.parents.insert({child, parent});
    }
    return out;
}

Resolution embed_peer(const ConcurrentResolution& rc, const CoreInstance& original,
                      const GranularitySpec& g) {
    Resolution out;
    for (const auto& p : rc.selected) out.selected.insert(rename(p, original.root, g));
    for (const auto& d : original.deps) {
        if (!rc.selected.count(d.from)) continue;
        NameRef inter = intermediate(d.from.name, d.from.version, d.on);
        for (const auto& u : d.versions) {
            Package child{d.on, u};
            if (rc.selected.count(child) && rc.parents.count({child, d.from}))
                out.selected.insert({inter, u});
        }
    }
    return out;
}

}  // namespace pkgcalc
