#include "pkgcalc/ext_features.hpp"

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

namespace {

int compare_feature_sets(const FeatureSet& a, const FeatureSet& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int compare_version_sets(const VersionSet& a, const VersionSet& b) {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib)
        if (int c = compare(*ia, *ib)) return c;
    return ia != a.end() ? 1 : (ib != b.end() ? -1 : 0);
}

bool superset(const FeatureSet& big, const FeatureSet& small) {
    for (const auto& f : small)
        if (!big.count(f)) return false;
    return true;
}

}  // namespace

int compare(const FeatureDep& a, const FeatureDep& b) {
    if (int c = compare(a.from, b.from)) return c;
    if (int c = compare(a.on, b.on)) return c;
    if (int c = compare_version_sets(a.versions, b.versions)) return c;
    return compare_feature_sets(a.requires_, b.requires_);
}

int compare(const AdditionalDep& a, const AdditionalDep& b) {
    if (int c = compare(a.from, b.from)) return c;
    if (int c = a.feature.compare(b.feature)) return c < 0 ? -1 : 1;
    if (int c = compare(a.on, b.on)) return c;
    if (int c = compare_version_sets(a.versions, b.versions)) return c;
    return compare_feature_sets(a.requires_, b.requires_);
}

int compare(const SupportEntry& a, const SupportEntry& b) {
    if (int c = compare(a.pkg, b.pkg)) return c;
    if (int c = a.feature.compare(b.feature)) return c < 0 ? -1 : 1;
    return 0;
}

void check_feature_model(const Repository& repo, const FeatureModel& model) {
    for (const auto& s : model.support)
        if (!repo.contains(s.pkg))
            throw InvalidInput("support entry for unknown package " + to_string(s.pkg));
    for (const auto& d : model.fdeps)
        for (const auto& u : d.versions)
            for (const auto& f : d.requires_)
                if (repo.contains({d.on, u}) && !model.support.count({{d.on, u}, f}))
                    throw InvalidInput("dependee " + to_string(Package{d.on, u}) +
                                       " does not support required feature " + f);
    for (const auto& a : model.adeps) {
        if (!model.support.count({a.from, a.feature}))
            throw InvalidInput("additional dependency key " + to_string(a.from) + "/" + a.feature +
                               " not supported");
        for (const auto& u : a.versions)
            for (const auto& f : a.requires_)
                if (repo.contains({a.on, u}) && !model.support.count({{a.on, u}, f}))
                    throw InvalidInput("dependee " + to_string(Package{a.on, u}) +
                                       " does not support required feature " + f);
    }
}

ValidityReport validate_feature_resolution(const Repository& repo, const FeatureModel& model,
                                           const Package& root, const FeatureResolution& sf) {
    ValidityReport report;
    for (const auto& [p, fs] : sf) {
        if (!repo.contains(p) && !(p == root))
            throw InvalidInput("selected package not in repository: " + to_string(p));
        for (const auto& f : fs)
            if (!model.support.count({p, f}))
                report.add(Violation::Kind::FeatureClosure,
                           to_string(p) + " selected with unsupported feature " + f);
    }

    auto it = sf.find(root);
    if (it == sf.end() || !it->second.empty())
        report.add(Violation::Kind::RootInclusion,
                   "root must be selected with no features");

    auto satisfied = [&](const NameRef& on, const VersionSet& vs, const FeatureSet& req) {
        for (const auto& v : vs) {
            auto jt = sf.find({on, v});
            if (jt != sf.end() && superset(jt->second, req)) return true;
        }
        return false;
    };

    for (const auto& [p, fs] : sf) {
        for (const auto& d : model.fdeps)
            if (d.from == p && !satisfied(d.on, d.versions, d.requires_))
                report.add(Violation::Kind::FeatureClosure,
                           to_string(p) + " -> " + to_string(d.on) + " unsatisfied");
        for (const auto& f : fs)
            for (const auto& a : model.adeps)
                if (a.from == p && a.feature == f && !satisfied(a.on, a.versions, a.requires_))
                    report.add(Violation::Kind::FeatureClosure,
                               to_string(p) + "/" + f + " -> " + to_string(a.on) + " unsatisfied");
    }

    // One version per name, and every selection of a name agrees on features.
    for (auto a = sf.begin(); a != sf.end(); ++a) {
        auto b = std::next(a);
        if (b == sf.end() || !same_name(a->first.name, b->first.name)) continue;
        report.add(Violation::Kind::VersionUniqueness,
                   "multiple versions of " + to_string(a->first.name));
        if (a->second != b->second)
            report.add(Violation::Kind::FeatureUnification,
                       "feature sets differ for " + to_string(a->first.name));
    }
    return report;
}

CoreInstance lower_features(const Repository& repo, const FeatureModel& model,
                            const Package& root) {
    CoreInstance out;
    out.root = root;
    out.repo = repo;
    for (const auto& s : model.support) {
        NameRef gate = feature_gate(s.pkg.name, s.feature);
        out.repo.packages.insert({gate, s.pkg.version});
        out.deps.insert({{gate, s.pkg.version}, s.pkg.name, {s.pkg.version}});
    }
    for (const auto& d : model.fdeps) {
        if (d.requires_.empty())
            out.deps.insert({d.from, d.on, d.versions});
        else
            for (const auto& f : d.requires_)
                out.deps.insert({d.from, feature_gate(d.on, f), d.versions});
    }
    for (const auto& a : model.adeps) {
        Package gate{feature_gate(a.from.name, a.feature), a.from.version};
        if (a.requires_.empty())
            out.deps.insert({gate, a.on, a.versions});
        else
            for (const auto& f : a.requires_)
                out.deps.insert({gate, feature_gate(a.on, f), a.versions});
    }
    return out;
}

FeatureResolution lift_feature_resolution(const Resolution& lowered, const Repository& originalRepo,
                                          const Package& root) {
    FeatureResolution sf;
    for (const auto& p : lowered.selected)
        if (originalRepo.contains(p) || p == root) sf[p];
    for (const auto& p : lowered.selected) {
        const auto* gate = std::get_if<Name::FeatureGate>(&p.name->repr());
        if (!gate) continue;
        auto it = sf.find({gate->base, p.version});
        if (it != sf.end()) it->second.insert(gate->feature);
    }
    return sf;
}

Resolution embed_feature_resolution(const FeatureResolution& sf) {
    Resolution out;
    for (const auto& [p, fs] : sf) {
        out.selected.insert(p);
        for (const auto& f : fs)
            out.selected.insert({feature_gate(p.name, f), p.version});
    }
    return out;
}

}  // namespace pkgcalc
