#include "pkgcalc/ext_conflicts.hpp"

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

namespace {

int compare_version_sets(const VersionSet& a, const VersionSet& b) {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib)
        if (int c = compare(*ia, *ib)) return c;
    if (ia != a.end()) return 1;
    if (ib != b.end()) return -1;
    return 0;
}

}  // namespace

int compare(const Conflict& a, const Conflict& b) {
    if (int c = compare(a.from, b.from)) return c;
    if (int c = compare(a.on, b.on)) return c;
    return compare_version_sets(a.versions, b.versions);
}

ValidityReport validate_conflict_resolution(const CoreInstance& inst, const ConflictSet& conflicts,
                                            const Resolution& s) {
    ValidityReport report = validate_resolution(inst, s);
    for (const auto& c : conflicts) {
        if (!s.contains(c.from)) continue;
        for (const auto& u : c.versions) {
            Package target{c.on, u};
            if (s.contains(target))
                report.add(Violation::Kind::ConflictAvoidance,
                           to_string(c.from) + " conflicts with selected " + to_string(target));
        }
    }
    return report;
}

CoreInstance lower_conflicts(const CoreInstance& inst, const ConflictSet& conflicts) {
    CoreInstance out = inst;
    for (const auto& c : conflicts) {
        NameRef guard = conflict_guard(c.on, c.versions);
        Package g0{guard, Version::marker0()};
        Package g1{guard, Version::marker1()};
        out.repo.packages.insert(g0);
        out.repo.packages.insert(g1);
        out.deps.insert({c.from, guard, {Version::marker1()}});
        for (const auto& u : c.versions) {
            Package target{c.on, u};
            if (inst.repo.contains(target))
                out.deps.insert({target, guard, {Version::marker0()}});
        }
    }
    return out;
}

Resolution lift_conflict_resolution(const Resolution& lowered, const CoreInstance& original) {
    Resolution out;
    for (const auto& p : lowered.selected)
        if (original.repo.contains(p) || p == original.root) out.selected.insert(p);
    return out;
}

Resolution embed_conflict_resolution(const Resolution& s, const CoreInstance& original,
                                     const ConflictSet& conflicts) {
    (void)original;
    Resolution out = s;
    for (const auto& c : conflicts) {
        NameRef guard = conflict_guard(c.on, c.versions);
        if (s.contains(c.from)) out.selected.insert({guard, Version::marker1()});
        for (const auto& u : c.versions)
            if (s.contains({c.on, u})) out.selected.insert({guard, Version::marker0()});
    }
    return out;
}

}  // namespace pkgcalc
