#include "pkgcalc/core.hpp"

#include <algorithm>
#include <map>

#include "pkgcalc/errors.hpp"
#include "pkgcalc/versions.hpp"

namespace pkgcalc {

int compare(const Dependency& a, const Dependency& b) {
    if (int c = compare(a.from, b.from)) return c;
    if (int c = compare(a.on, b.on)) return c;
    auto ia = a.versions.begin(), ib = b.versions.begin();
    for (; ia != a.versions.end() && ib != b.versions.end(); ++ia, ++ib)
        if (int c = compare(*ia, *ib)) return c;
    if (a.versions.size() != b.versions.size())
        return a.versions.size() < b.versions.size() ? -1 : 1;
    return 0;
}

VersionSet Repository::versions_of(const NameRef& n) const {
    VersionSet out;
    for (const auto& p : packages)
        if (same_name(p.name, n)) out.insert(p.version);
    return out;
}

bool ResolutionLess::operator()(const Resolution& a, const Resolution& b) const {
    auto ia = a.selected.begin(), ib = b.selected.begin();
    for (; ia != a.selected.end() && ib != b.selected.end(); ++ia, ++ib)
        if (int c = compare(*ia, *ib)) return c < 0;
    return a.selected.size() < b.selected.size();
}

CoreInstance make_instance(Repository repo, DependencySet deps,
                           const std::vector<QueryItem>& query) {
    Package root = root_package();
    repo.packages.insert(root);
    for (const auto& q : query) deps.insert(Dependency{root, q.on, q.versions});
    return CoreInstance{std::move(repo), std::move(deps), root};
}

std::vector<std::string> check_well_formed(const CoreInstance& inst) {
    std::vector<std::string> warnings;
    if (!inst.repo.contains(inst.root))
        throw InvalidInput("root package " + to_string(inst.root) + " is not in the repository");
    for (const auto& p : inst.repo.packages)
        if (p.version.is_wildcard())
            throw InvalidInput("wildcard version in repository: " + to_string(p));
    for (const auto& d : inst.deps) {
        if (!inst.repo.contains(d.from))
            throw InvalidInput("dependency from unknown package " + to_string(d.from));
        for (const auto& v : d.versions)
            if (!inst.repo.contains(Package{d.on, v}))
                throw InvalidInput("dependency of " + to_string(d.from) + " on " +
                                   to_string(d.on) + " references missing version " +
                                   to_string(v));
        if (d.versions.empty())
            warnings.push_back("dependency of " + to_string(d.from) + " on " + to_string(d.on) +
                               " has an empty version set (unsatisfiable)");
    }
    return warnings;
}

ValidityReport validate_resolution(const CoreInstance& inst, const Resolution& s) {
    for (const auto& p : s.selected)
        if (!inst.repo.contains(p))
            throw InvalidInput("resolution references package outside the repository: " +
                               to_string(p));

    ValidityReport report;
    if (!s.contains(inst.root))
        report.add(Violation::Kind::RootInclusion, "root " + to_string(inst.root) + " missing");

    for (const auto& d : inst.deps) {
        if (!s.contains(d.from)) continue;
        bool satisfied = false;
        for (const auto& v : d.versions)
            if (s.contains(Package{d.on, v})) { satisfied = true; break; }
        if (!satisfied)
            report.add(Violation::Kind::DependencyClosure,
                       to_string(d.from) + " depends on " + to_string(d.on) +
                           to_string(d.versions) + " which is unsatisfied");
    }

    const Package* prev = nullptr;
    for (const auto& p : s.selected) {
        if (prev && same_name(prev->name, p.name))
            report.add(Violation::Kind::VersionUniqueness,
                       "two versions of " + to_string(p.name) + ": " + to_string(prev->version) +
                           " and " + to_string(p.version));
        prev = &p;
    }
    return report;
}

ResolutionSet enumerate_resolutions(const CoreInstance& inst, std::size_t limit,
                                    std::size_t oracle_bound) {
    if (inst.repo.packages.size() > oracle_bound)
        throw LimitExceeded("repository of " + std::to_string(inst.repo.packages.size()) +
                            " packages exceeds the oracle bound of " +
                            std::to_string(oracle_bound));

    // Group packages by name; pick at most one version per name. Subsets with
    // two versions of a name always fail uniqueness, so this choice space is
    // exhaustive over candidate resolutions.
    std::map<NameRef, std::vector<Version>, NameLess> by_name;
    for (const auto& p : inst.repo.packages) by_name[p.name].push_back(p.version);

    std::vector<std::pair<NameRef, std::vector<Version>>> groups(by_name.begin(), by_name.end());
    ResolutionSet out;
    PackageSet current;

    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == groups.size()) {
            Resolution cand{current};
            if (validate_resolution(inst, cand).valid) {
                out.insert(std::move(cand));
                if (out.size() > limit)
                    throw LimitExceeded("more than " + std::to_string(limit) +
                                        " resolutions enumerated");
            }
            return;
        }
        self(self, i + 1);  // name absent
        for (const auto& v : groups[i].second) {
            Package p{groups[i].first, v};
            current.insert(p);
            self(self, i + 1);
            current.erase(p);
        }
    };
    recurse(recurse, 0);
    return out;
}

namespace {

// One direction of the freshness order: every name in s2 is covered by a
// <=_v-smaller or equal same-name entry in s1.
bool pointwise_le(const Resolution& s1, const Resolution& s2) {
    for (const auto& p2 : s2.selected) {
        bool covered = false;
        for (const auto& p1 : s1.selected) {
            if (!same_name(p1.name, p2.name)) continue;
            if (version_le(p1.version, p2.version)) { covered = true; break; }
        }
        if (!covered) return false;
    }
    return true;
}

}  // namespace

ResolutionOrder compare_resolutions(const Resolution& s1, const Resolution& s2) {
    bool le = pointwise_le(s1, s2);
    bool ge = pointwise_le(s2, s1);
    if (le && ge) return ResolutionOrder::Eq;
    if (le) return ResolutionOrder::LEq;
    if (ge) return ResolutionOrder::GEq;
    return ResolutionOrder::Incomparable;
}

ResolutionSet maximal_resolutions(const ResolutionSet& rs) {
    ResolutionSet out;
    for (const auto& s : rs) {
        bool dominated = false;
        for (const auto& t : rs) {
            if (&t == &s) continue;
            ResolutionOrder o = compare_resolutions(s, t);
            if (o == ResolutionOrder::LEq) { dominated = true; break; }
        }
        if (!dominated) out.insert(s);
    }
    return out;
}

}  // namespace pkgcalc
