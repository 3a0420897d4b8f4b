#include "pkgcalc/restricted.hpp"

#include <deque>
#include <map>

#include "pkgcalc/errors.hpp"
#include "pkgcalc/versions.hpp"

namespace pkgcalc {

int compare(const MinBoundDependency& a, const MinBoundDependency& b) {
    if (int c = compare(a.from, b.from)) return c;
    if (int c = compare(a.on, b.on)) return c;
    return compare(a.min_version, b.min_version);
}

int compare(const SingularDependency& a, const SingularDependency& b) {
    if (int c = compare(a.from, b.from)) return c;
    return compare(a.to, b.to);
}

namespace {

// Numeric versions of each name, ascending, indexed once up front so the
// traversal stays linear.
std::map<NameRef, std::vector<Version>, NameLess> numeric_versions(const Repository& repo) {
    std::map<NameRef, std::vector<Version>, NameLess> out;
    for (const auto& p : repo.packages)
        if (p.version.is_numeric()) out[p.name].push_back(p.version);
    for (auto& [n, vs] : out)
        std::sort(vs.begin(), vs.end(), [](const Version& a, const Version& b) {
            return compare_versions(a, b) == Ordering::LT;
        });
    return out;
}

// Smallest existing version at or above the bound.
std::optional<Version> realize(const std::vector<Version>& ascending, const Version& bound) {
    for (const auto& v : ascending)
        if (compare_versions(v, bound) != Ordering::LT) return v;
    return std::nullopt;
}

}  // namespace

std::optional<Resolution> mvs_resolve(const Repository& repo, const MinBoundDependencySet& mdeps,
                                      const Package& root, MvsPolicy policy) {
    if (!repo.contains(root)) throw InvalidInput("root not in repository");
    std::map<Package, std::vector<const MinBoundDependency*>, PackageLess> edges;
    for (const auto& d : mdeps) {
        if (!repo.contains(d.from))
            throw InvalidInput("min-bound dependency from unknown package " + to_string(d.from));
        if (!d.min_version.is_numeric())
            throw InvalidInput("minimum bound must be a numeric version");
        edges[d.from].push_back(&d);
    }
    auto existing = numeric_versions(repo);

    // The traversal walks the requirement lists of every version a bound
    // names (its realization) plus the version the policy would select, so a
    // selection above the bound still contributes its own requirements.
    std::map<NameRef, Version, NameLess> max_bound;
    std::map<NameRef, Version, NameLess> selection;
    PackageSet reached;
    std::deque<Package> work;
    auto reach = [&](const Package& p) {
        if (reached.insert(p).second) work.push_back(p);
    };
    reach(root);

    while (!work.empty()) {
        Package p = work.front();
        work.pop_front();
        auto eit = edges.find(p);
        if (eit == edges.end()) continue;
        for (const MinBoundDependency* d : eit->second) {
            auto bit = max_bound.find(d->on);
            bool raised = bit == max_bound.end() ||
                          compare_versions(bit->second, d->min_version) == Ordering::LT;
            if (raised) max_bound[d->on] = d->min_version;

            auto vit = existing.find(d->on);
            if (vit == existing.end()) return std::nullopt;
            auto realized = realize(vit->second, max_bound.at(d->on));
            if (!realized) return std::nullopt;
            reach({d->on, *realized});

            Version pick =
                policy == MvsPolicy::Latest ? vit->second.back() : *realized;
            auto sit = selection.find(d->on);
            if (sit == selection.end() || compare(sit->second, pick) != 0) {
                selection[d->on] = pick;
            }
            reach({d->on, pick});
        }
    }

    Resolution s;
    s.selected.insert(root);
    for (const auto& [n, v] : selection) s.selected.insert({n, v});
    return s;
}

bool check_min_bound_closure(const Repository& repo, const MinBoundDependencySet& mdeps,
                             const Package& root, const Resolution& s) {
    if (!s.contains(root)) return false;
    for (const auto& p : s.selected)
        if (!repo.contains(p)) return false;
    for (const auto& d : mdeps) {
        if (!s.contains(d.from)) continue;
        bool met = false;
        for (const auto& p : s.selected) {
            if (!same_name(p.name, d.on) || !p.version.is_numeric()) continue;
            if (compare_versions(p.version, d.min_version) != Ordering::LT) { met = true; break; }
        }
        if (!met) return false;
    }
    return true;
}

std::optional<PackageSet> multiversion_greedy_resolve(const CoreInstance& inst) {
    check_well_formed(inst);
    std::map<Package, std::vector<const Dependency*>, PackageLess> edges;
    for (const auto& d : inst.deps) edges[d.from].push_back(&d);

    PackageSet out;
    std::deque<Package> work{inst.root};
    out.insert(inst.root);
    while (!work.empty()) {
        Package p = work.front();
        work.pop_front();
        auto eit = edges.find(p);
        if (eit == edges.end()) continue;
        for (const Dependency* d : eit->second) {
            std::optional<Version> pick;  // highest existing version in the set
            for (const auto& v : d->versions) {
                if (!inst.repo.contains({d->on, v})) continue;
                if (!pick) { pick = v; continue; }
                if (v.is_numeric() && pick->is_numeric()) {
                    if (compare_versions(v, *pick) == Ordering::GT) pick = v;
                } else if (compare(v, *pick) > 0) {
                    pick = v;
                }
            }
            if (!pick) return std::nullopt;
            Package dep{d->on, *pick};
            if (out.insert(dep).second) work.push_back(dep);
        }
    }
    return out;
}

std::optional<Resolution> singular_resolve(const Repository& repo,
                                           const SingularDependencySet& sdeps,
                                           const Package& root) {
    if (!repo.contains(root)) throw InvalidInput("root not in repository");
    std::map<Package, std::vector<const Package*>, PackageLess> edges;
    for (const auto& d : sdeps) {
        if (!repo.contains(d.from) || !repo.contains(d.to))
            throw InvalidInput("singular dependency endpoint outside repository");
        edges[d.from].push_back(&d.to);
    }

    Resolution s;
    std::deque<Package> work{root};
    s.selected.insert(root);
    while (!work.empty()) {
        Package p = work.front();
        work.pop_front();
        auto eit = edges.find(p);
        if (eit == edges.end()) continue;
        for (const Package* to : eit->second)
            if (s.selected.insert(*to).second) work.push_back(*to);
    }
    // Uniqueness over the closure.
    const Package* prev = nullptr;
    for (const auto& p : s.selected) {
        if (prev && same_name(prev->name, p.name)) return std::nullopt;
        prev = &p;
    }
    return s;
}

}  // namespace pkgcalc
