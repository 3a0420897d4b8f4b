// End-to-end acceptance gate: one pass/fail line per criterion, nonzero
// exit on any failure. Each criterion re-derives its expectation from the
// brute-force oracles rather than trusting the code under test.

#include <algorithm>
#include <chrono>
#include <map>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pkgcalc/buildgraph.hpp"
#include "pkgcalc/errors.hpp"
#include "pkgcalc/frontends.hpp"
#include "pkgcalc/pipeline.hpp"
#include "pkgcalc/restricted.hpp"
#include "pkgcalc/sat.hpp"
#include "pkgcalc/versions.hpp"
#include "support/ext_oracles.hpp"
#include "support/oracles.hpp"

using namespace pkgcalc;
using namespace pkgcalc::testing;

namespace {

struct CheckFailure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure{what};
}

std::string render_resolution(const Resolution& s) { return render(s.selected); }

Rendered rendered_resolutions(const ResolutionSet& rs) {
    Rendered out;
    for (const auto& s : rs) out.insert(render_resolution(s));
    return out;
}

// --- criterion 1/2/3: the worked goldens ---------------------------------

Resolution golden_shared_resolution() {
    Resolution s;
    s.selected = {root_package(), P("A", "1"), P("B", "1"), P("C", "1"), P("D", "2")};
    return s;
}

void criterion_shared_golden() {
    auto inst = shared_dep_instance();
    auto all = enumerate_resolutions(inst);
    require(all.size() == 1, "expected exactly one resolution");
    require(all.begin()->selected == golden_shared_resolution().selected,
            "oracle resolution differs from the golden set");
    auto got = sat_resolve(inst);
    require(got.has_value(), "sat resolver returned unresolvable");
    require(got->selected == golden_shared_resolution().selected,
            "sat resolution differs from the golden set");
}

void criterion_diamond() {
    auto inst = diamond_conflict_instance();
    require(enumerate_resolutions(inst).empty(), "oracle found a core resolution");
    require(!sat_resolve(inst).has_value(), "sat resolver found a core resolution");
    for (const auto& g : {GranularitySpec::major(), GranularitySpec::identity()}) {
        auto low = lower_concurrent(inst, g);
        require(sat_resolve(low).has_value(), "lowered diamond did not resolve");
        require(!enumerate_resolutions(low, kNoLimit, 64).empty(),
                "oracle found no lowered resolution");
    }
}

std::multiset<std::set<std::string>> clause_fingerprint(const CnfInstance& cnf) {
    std::multiset<std::set<std::string>> out;
    for (const auto& c : cnf.clauses) {
        std::set<std::string> lits;
        for (const auto& l : c)
            lits.insert((l.positive ? "+" : "-") + to_string(cnf.vars[l.var]));
        out.insert(std::move(lits));
    }
    return out;
}

void criterion_cnf_golden() {
    auto cnf = encode(shared_dep_instance(), false);
    std::multiset<std::set<std::string>> expected{
        {"+" + to_string(root_package())},
        {"-" + to_string(root_package()), "+A@1"},
        {"-A@1", "+B@1"},
        {"-A@1", "+C@1"},
        {"-B@1", "+D@1", "+D@2"},
        {"-C@1", "+D@2", "+D@3"},
        {"-D@1", "-D@2"},
        {"-D@1", "-D@3"},
        {"-D@2", "-D@3"},
    };
    require(cnf.clauses.size() == 9, "expected nine clauses");
    require(clause_fingerprint(cnf) == expected, "clause sets differ");
}

// --- criterion 4: 3-SAT equivalence --------------------------------------

// Assignment-driven resolvability oracle: every valid resolution selects one
// version per clause name whose variable markers match an assignment, so
// exhausting the assignments and validating each canonical candidate covers
// the whole resolution space.
bool oracle_resolvable_3cnf(const CoreInstance& inst, const ThreeCnf& cnf) {
    for (std::uint64_t a = 0; a < (1ull << cnf.num_vars); ++a) {
        PackageSet s{inst.root};
        for (std::size_t i = 0; i < cnf.num_vars; ++i)
            s.insert({atom("x" + std::to_string(i + 1)),
                      (a >> i) & 1 ? Version::marker1() : Version::marker0()});
        bool stuck = false;
        for (std::size_t j = 0; j < cnf.clauses.size() && !stuck; ++j) {
            std::size_t slot = 0;
            for (std::size_t k = 0; k < 3; ++k) {
                long lit = cnf.clauses[j][k];
                std::size_t vi = static_cast<std::size_t>(lit < 0 ? -lit : lit) - 1;
                if ((lit > 0) == (((a >> vi) & 1) != 0)) { slot = k + 1; break; }
            }
            if (slot == 0)
                stuck = true;
            else
                s.insert({atom("c" + std::to_string(j + 1)),
                          Version::numeric({static_cast<std::uint64_t>(slot)})});
        }
        if (!stuck && validate_resolution(inst, Resolution{s}).valid) return true;
    }
    return false;
}

void criterion_3sat() {
    auto& g = rng();
    for (int round = 0; round < 200; ++round) {
        auto cnf = random_3cnf(g, 10, 15);
        bool sat = brute_3cnf_sat(cnf);
        auto inst = gen_from_3cnf(cnf);
        require(sat_resolve(inst).has_value() == sat,
                "sat resolver disagrees with the truth table");
        require(oracle_resolvable_3cnf(inst, cnf) == sat,
                "oracle disagrees with the truth table");
    }
}

// --- criterion 5: per-extension round trips ------------------------------

VersionFormula random_version_formula(std::mt19937& g, int depth = 0) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> op(0, 5);
    std::uniform_int_distribution<std::uint64_t> seg(1, 4);
    int k = depth > 2 ? 3 : kind(g);
    switch (k) {
        case 0:
            return VersionFormula::conj(random_version_formula(g, depth + 1),
                                        random_version_formula(g, depth + 1));
        case 1:
            return VersionFormula::disj(random_version_formula(g, depth + 1),
                                        random_version_formula(g, depth + 1));
        case 2: return VersionFormula::top();
        default:
            return VersionFormula::cmp(static_cast<CmpOp>(op(g)),
                                       Version::numeric({(unsigned)seg(g)}));
    }
}

void roundtrip_version_formulae() {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(g, 4, 3);
        FormulaDependencySet fdeps;
        for (const auto& d : inst.deps)
            fdeps.push_back({d.from, d.on, random_version_formula(g)});
        auto low = lower_version_formulae(inst.repo, fdeps, inst.root);

        // independent oracle: one version choice (or none) per name, kept
        // when the root is in and every formula dependency is witnessed
        std::vector<NameRef> names;
        for (const auto& p : low.repo.packages)
            if (names.empty() || !same_name(names.back(), p.name)) {
                if (std::none_of(names.begin(), names.end(),
                                 [&](const NameRef& n) { return same_name(n, p.name); }))
                    names.push_back(p.name);
            }
        Rendered expected;
        std::function<void(std::size_t, PackageSet&)> walk = [&](std::size_t i,
                                                                 PackageSet& acc) {
            if (i == names.size()) {
                if (!acc.count(inst.root)) return;
                for (const auto& fd : fdeps) {
                    if (!acc.count(fd.from)) continue;
                    bool met = false;
                    for (const auto& v : eval_formula(fd.formula, fd.on, inst.repo))
                        if (acc.count({fd.on, v})) met = true;
                    if (!met) return;
                }
                expected.insert(render(acc));
                return;
            }
            walk(i + 1, acc);
            for (const auto& v : low.repo.versions_of(names[i])) {
                acc.insert({names[i], v});
                walk(i + 1, acc);
                acc.erase({names[i], v});
            }
        };
        PackageSet acc;
        walk(0, acc);
        require(rendered_resolutions(enumerate_resolutions(low, kNoLimit, 64)) == expected,
                "version-formula lowering disagrees with the semantic oracle");
    }
}

void roundtrip_conflicts() {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(g, 4, 3);
        auto gamma = random_conflicts(g, inst, 3);
        auto low = lower_conflicts(inst, gamma);
        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto l = lift_conflict_resolution(s, inst);
            for (const auto& p : l.selected)
                require(inst.repo.contains(p), "lifted package outside the repository");
            lifted.insert(render(l.selected));
            auto embedded = embed_conflict_resolution(l, inst, gamma);
            require(validate_resolution(low, embedded).valid, "embed is not core-valid");
        }
        require(lifted == enumerate_conflict_resolutions(inst, gamma),
                "conflict lift image differs from the brute enumeration");
    }
}

void roundtrip_concurrent() {
    auto& g = rng();
    const GranularitySpec specs[] = {GranularitySpec::identity(), GranularitySpec::major(),
                                     GranularitySpec::constant()};
    for (int round = 0; round < 100; ++round) {
        auto inst = random_concurrent_instance(g);
        const auto& spec = specs[round % 3];
        auto low = lower_concurrent(inst, spec);
        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto rc = lift_concurrent(s, inst, spec);
            lifted.insert(render(rc.selected) + "|" + render(rc.parents));
            require(validate_resolution(low, embed_concurrent(rc, inst, spec)).valid,
                    "embed is not core-valid");
        }
        require(lifted == enumerate_concurrent_resolutions(inst, spec),
                "concurrent lift image differs from the brute enumeration");
    }
}

void roundtrip_peer() {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(g, 3, 2);
        if (inst.deps.size() > 6) continue;
        auto peers = random_peers(g, inst, 2);
        GranularitySpec spec =
            (round % 2) ? GranularitySpec::identity() : GranularitySpec::major();
        auto low = lower_peer(inst, peers, spec);
        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto rc = lift_peer(s, inst, spec);
            lifted.insert(render(rc.selected) + "|" + render(rc.parents));
            require(validate_resolution(low, embed_peer(rc, inst, spec)).valid,
                    "embed is not core-valid");
        }
        require(lifted == enumerate_peer_resolutions(inst, peers, spec),
                "peer lift image differs from the brute enumeration");
    }
}

void roundtrip_features() {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto [repo, model] = random_feature_model(g);
        Package root = root_package();
        check_feature_model(repo, model);
        auto low = lower_features(repo, model, root);
        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto sf = lift_feature_resolution(s, repo, root);
            lifted.insert(render(sf));
            require(validate_resolution(low, embed_feature_resolution(sf)).valid,
                    "embed is not core-valid");
        }
        require(lifted == enumerate_feature_resolutions(repo, model, root),
                "feature lift image differs from the brute enumeration");
    }
}

void roundtrip_formulae(bool with_variables) {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_formula_instance(g, with_variables);
        auto low = lower_formulae(inst);
        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto fr = lift_formula_resolution(s, inst);
            lifted.insert(render(fr.selected) + "|" + render(fr.sigma));
            require(
                validate_resolution(low, embed_formula_resolution(fr.selected, fr.sigma, inst))
                    .valid,
                "embed is not core-valid");
        }
        require(lifted == enumerate_formula_resolutions(inst),
                "formula lift image differs from the brute enumeration");
    }
}

void roundtrip_virtual() {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(g, 4, 2);
        auto provides = random_provides(g, inst, 3);
        auto low = lower_virtual(inst, provides);
        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto rv = lift_virtual(s, inst);
            lifted.insert(render(rv.selected) + "|" + render(rv.providers));
            require(validate_resolution(low, embed_virtual(rv, inst, provides)).valid,
                    "embed is not core-valid");
        }
        require(lifted == enumerate_virtual_resolutions(inst, provides),
                "virtual lift image differs from the brute enumeration");
    }
}

void criterion_round_trips() {
    roundtrip_version_formulae();
    roundtrip_conflicts();
    roundtrip_concurrent();
    roundtrip_peer();
    roundtrip_features();
    roundtrip_formulae(false);
    roundtrip_formulae(true);
    roundtrip_virtual();
}

// --- criterion 6: composition --------------------------------------------

ExtendedInstance showcase_instance() {
    ExtendedInstance e;
    e.repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1"), P("D", "1"), P("D", "2"),
                      P("D", "3")});
    e.repo.packages.insert(root_package());
    e.gran = GranularitySpec::identity();
    e.features.support = {{P("D", "1"), "alpha"},
                          {P("D", "2"), "alpha"},
                          {P("D", "2"), "beta"},
                          {P("D", "3"), "beta"}};
    e.features.fdeps = {{root_package(), N("A"), VS({"1"}), {}},
                        {P("A", "1"), N("B"), VS({"1"}), {}},
                        {P("A", "1"), N("C"), VS({"1"}), {}},
                        {P("B", "1"), N("D"), VS({"1", "2"}), {"alpha"}},
                        {P("C", "1"), N("D"), VS({"2", "3"}), {"beta"}}};
    return e;
}

void criterion_composition() {
    auto e = showcase_instance();
    auto bundle = lower_stack(e, {ExtensionTag::Features, ExtensionTag::Concurrent});

    auto gn = [](const char* n, const char* v) {
        return granular(N(n), GranToken::of_version(V(v)));
    };
    auto ggate = [](const char* n, const char* f, const char* v) {
        return granular(feature_gate(N(n), f), GranToken::of_version(V(v)));
    };
    auto vg = [](const char* v) { return Version::gran(GranToken::of_version(V(v))); };
    NameRef interB = intermediate(N("B"), V("1"), feature_gate(N("D"), "alpha"));
    NameRef interC = intermediate(N("C"), V("1"), feature_gate(N("D"), "beta"));
    DependencySet expected = {
        {{gn("A", "1"), V("1")}, gn("B", "1"), VS({"1"})},
        {{gn("A", "1"), V("1")}, gn("C", "1"), VS({"1"})},
        {{gn("B", "1"), V("1")}, interB, {vg("1"), vg("2")}},
        {{gn("C", "1"), V("1")}, interC, {vg("2"), vg("3")}},
        {{interB, vg("1")}, ggate("D", "alpha", "1"), VS({"1"})},
        {{interB, vg("2")}, ggate("D", "alpha", "2"), VS({"2"})},
        {{interC, vg("2")}, ggate("D", "beta", "2"), VS({"2"})},
        {{interC, vg("3")}, ggate("D", "beta", "3"), VS({"3"})},
        {{ggate("D", "alpha", "1"), V("1")}, gn("D", "1"), VS({"1"})},
        {{ggate("D", "alpha", "2"), V("2")}, gn("D", "2"), VS({"2"})},
        {{ggate("D", "beta", "2"), V("2")}, gn("D", "2"), VS({"2"})},
        {{ggate("D", "beta", "3"), V("3")}, gn("D", "3"), VS({"3"})},
    };
    DependencySet bare;
    for (const auto& d : bundle.core.deps)
        if (!(d.from == root_package())) bare.insert(d);
    require(bare.size() == expected.size() && bundle.core.deps.size() == expected.size() + 1,
            "lowered showcase has the wrong dependency count");
    for (const auto& d : expected)
        require(bare.count(d) == 1, "lowered showcase misses an expected dependency");

    // composed round trips against the concurrent-feature oracle
    auto& g = rng();
    GranularitySpec specs[] = {GranularitySpec::identity(), GranularitySpec::major(),
                               GranularitySpec::constant()};
    for (int round = 0; round < 50; ++round) {
        auto [repo, model] = random_feature_model(g);
        ExtendedInstance inst;
        inst.repo = repo;
        inst.features = model;
        inst.gran = specs[round % 3];

        LoweredBundle b;
        try {
            b = lower_stack(inst, {ExtensionTag::Features, ExtensionTag::Concurrent});
        } catch (const InvalidInput&) {
            continue;  // granularity does not apply to these versions
        }
        ResolutionSet rs;
        try {
            rs = enumerate_resolutions(b.core, kNoLimit, 64);
        } catch (const LimitExceeded&) {
            continue;
        }
        Rendered lifted;
        const CoreInstance& feature_stage = b.stages[1].before;
        for (const auto& r : rs) {
            auto ext = lift_stack(r, b);
            require(validate_concurrent_feature(inst.repo, inst.features, inst.gran, inst.root,
                                                {ext.features, ext.parents})
                        .valid,
                    "composed lift is not valid");
            lifted.insert(render(ext.features) + "|" + render(ext.parents));
            Resolution sc = embed_feature_resolution(ext.features);
            Resolution low =
                embed_concurrent({sc.selected, ext.parents}, feature_stage, inst.gran);
            require(validate_resolution(b.core, low).valid, "composed embed is not core-valid");
        }
        require(lifted ==
                    enumerate_cf_resolutions(inst.repo, inst.features, inst.gran, inst.root),
                "composed lift image differs from the brute enumeration");
    }
}

// --- criterion 7: version formula table ----------------------------------

void criterion_version_table() {
    Repository n = repo_of({P("n", "1.0.0"), P("n", "1.2.3"), P("n", "1.9.0"), P("n", "2.0.0")});
    require(eval_formula(parse_version_formula(">1.0.0"), N("n"), n) ==
                VS({"1.2.3", "1.9.0", "2.0.0"}),
            "'>1.0.0' row evaluated wrongly");
    require(eval_formula(parse_version_formula(">=1.2.3 & <2.0.0"), N("n"), n) ==
                VS({"1.2.3", "1.9.0"}),
            "caret-range row evaluated wrongly");
    Repository m = repo_of({P("m", "1.3.0"), P("m", "1.4.0"), P("m", "1.4.2"), P("m", "1.5.0")});
    require(eval_formula(parse_version_formula("<1.4.0 | >=1.5.0"), N("m"), m) ==
                VS({"1.3.0", "1.5.0"}),
            "'!=1.4.*' expansion row evaluated wrongly");
}

// --- criterion 8: build graph --------------------------------------------

void criterion_build_graph() {
    auto example = [](std::initializer_list<QueryItem> query) {
        Repository repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1"), P("D", "1")});
        DependencySet deps{
            dep(P("A", "1"), "B", {"1"}),
            dep(P("A", "1"), "D", {"1"}),
            dep(P("B", "1"), "C", {"1"}),
        };
        return make_instance(std::move(repo), std::move(deps), query);
    };
    OptionalSet optional{dep(P("B", "1"), "D", {"1"})};

    auto narrow = example({{N("B"), VS({"1"})}});
    Resolution s{{narrow.root, P("B", "1"), P("C", "1")}};
    auto g1 = build_graph(narrow, optional, s, /*include_root_edges=*/false);
    require(g1.edges.size() == 1 && g1.edges.count({P("B", "1"), P("C", "1")}) == 1,
            "narrow query edge set differs");

    auto wide = example({{N("A"), VS({"1"})}});
    Resolution all{{wide.root, P("A", "1"), P("B", "1"), P("C", "1"), P("D", "1")}};
    auto g2 = build_graph(wide, optional, all, false);
    require(g2.edges.count({P("B", "1"), P("D", "1")}) == 1,
            "optional edge missing from the wide query");

    // optional dependencies never change what resolves
    auto& rg = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(rg, 4, 3);
        OptionalSet opt;
        DependencySet kept;
        std::bernoulli_distribution demote(0.3);
        for (const auto& d : inst.deps) {
            if (!(d.from == inst.root) && demote(rg))
                opt.insert(d);
            else
                kept.insert(d);
        }
        CoreInstance pruned{inst.repo, kept, inst.root};
        auto with = rendered_resolutions(enumerate_resolutions(pruned));
        auto without = with;
        for (const auto& r : enumerate_resolutions(pruned)) {
            auto ga = build_graph(pruned, opt, r);
            auto gb = build_graph(pruned, {}, r);
            require(ga.vertices == r.selected && gb.vertices == r.selected,
                    "graph vertices differ from the selection");
            for (const auto& e : gb.edges)
                require(ga.edges.count(e) == 1, "optional set dropped a mandatory edge");
        }
        require(with == without, "optional set changed the resolution set");
    }
}

// --- criterion 9: prefer-fresh suite -------------------------------------

void criterion_prefer_fresh() {
    for (int i = 0; i < 20; ++i) {
        // independent per-name choices: the root wants every name, chains
        // pass the full version set along, so the pointwise maximum exists
        std::size_t names = 2 + i % 3;
        std::size_t versions = 2 + (i / 4) % 2;
        Repository repo;
        DependencySet deps;
        std::vector<QueryItem> query;
        std::vector<std::string> all;
        for (std::size_t v = 1; v <= versions; ++v) all.push_back(std::to_string(v));
        for (std::size_t j = 0; j < names; ++j) {
            std::string name = "n" + std::to_string(j);
            VersionSet vs;
            for (const auto& t : all) {
                repo.packages.insert(P(name, t));
                vs.insert(V(t));
            }
            query.push_back({N(name), vs});
            if (i % 2 && j > 0)
                for (const auto& t : all)
                    deps.insert({P("n" + std::to_string(j - 1), t), N(name), vs});
        }
        auto inst = make_instance(std::move(repo), std::move(deps), query);

        auto fresh = sat_resolve(inst, true);
        require(fresh.has_value(), "prefer-fresh found no resolution");
        require(validate_resolution(inst, *fresh).valid, "prefer-fresh output is invalid");
        auto rs = enumerate_resolutions(inst);
        require(rs.size() > 1, "crafted instance is not actually a choice");
        for (const auto& r : rs) {
            auto ord = compare_resolutions(r, *fresh);
            require(ord == ResolutionOrder::LEq || ord == ResolutionOrder::Eq,
                    "a fresher resolution exists");
        }
        for (std::size_t j = 0; j < names; ++j)
            require(fresh->selected.count(P("n" + std::to_string(j), all.back())) == 1,
                    "a name is not at its newest version");
    }
}

// --- criterion 10: mvs linearity ------------------------------------------

void criterion_mvs_chain() {
    Repository repo;
    Package root = root_package();
    repo.packages.insert(root);
    const std::size_t kChain = 10000;
    MinBoundDependencySet mdeps;
    Package prev = root;
    for (std::size_t i = 0; i < kChain; ++i) {
        std::string name = "pkg" + std::to_string(i);
        repo.packages.insert(P(name, "1"));
        repo.packages.insert(P(name, "2"));
        Version bound = V(i % 3 == 0 ? "2" : "1");
        mdeps.insert({prev, N(name), bound});
        prev = {N(name), bound};
    }
    auto started = std::chrono::steady_clock::now();
    auto got = mvs_resolve(repo, mdeps, root, MvsPolicy::Minimum);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    require(got.has_value(), "chain did not resolve");
    require(elapsed < 1000, "mvs took " + std::to_string(elapsed) + " ms");

    // independent pass: walk outward from the root keeping, per name, the
    // max applicable bound and the smallest existing version at or above it
    std::map<std::string, std::vector<const MinBoundDependency*>> outgoing;
    for (const auto& d : mdeps) outgoing[to_string(d.from)].push_back(&d);
    std::map<std::string, Version> bounds;
    std::map<std::string, Version> picks;
    std::vector<Package> work{root};
    while (!work.empty()) {
        Package p = work.back();
        work.pop_back();
        auto og = outgoing.find(to_string(p));
        if (og == outgoing.end()) continue;
        for (const auto* d : og->second) {
            auto key = to_string(d->on);
            auto it = bounds.find(key);
            if (it != bounds.end() &&
                compare_versions(d->min_version, it->second) != Ordering::GT)
                continue;
            bounds.insert_or_assign(key, d->min_version);
            bool found = false;
            Version pick = d->min_version;
            for (const auto& v : repo.versions_of(d->on))
                if (!found && compare_versions(v, d->min_version) != Ordering::LT) {
                    pick = v;
                    found = true;
                }
            require(found, "brute pass hit an unsatisfiable bound");
            picks.insert_or_assign(key, pick);
            work.push_back({d->on, pick});
        }
    }
    PackageSet expected{root};
    for (std::size_t i = 0; i < kChain; ++i) {
        std::string name = "pkg" + std::to_string(i);
        expected.insert({N(name), picks.at(to_string(N(name)))});
    }
    require(got->selected == expected, "mvs output differs from the brute pass");
}

// --- criterion 11: stack validation ---------------------------------------

void criterion_stack_rules() {
    ExtendedInstance e;
    e.repo.packages.insert(root_package());

    auto rule = [&](const ExtensionStack& stack) -> std::string {
        try {
            validate_stack(stack, e);
        } catch (const StackError& err) {
            return err.rule;
        }
        return "";
    };
    require(rule({ExtensionTag::Conflicts, ExtensionTag::Concurrent}) ==
                "concurrent-before-conflicts",
            "[conflicts, concurrent] not rejected with the named rule");
    require(rule({ExtensionTag::Concurrent, ExtensionTag::Conflicts}).empty(),
            "[concurrent, conflicts] rejected");
    require(rule({ExtensionTag::Features, ExtensionTag::Concurrent}).empty(),
            "[features, concurrent] rejected");
    require(rule({ExtensionTag::Concurrent, ExtensionTag::Features}) ==
                "features-before-concurrent",
            "[concurrent, features] not rejected with the named rule");
}

// --- criterion 12: translation round trip ---------------------------------

void check_preserved(const std::string& text, Dialect from, Dialect to) {
    auto inst = from == Dialect::Debian ? parse_debctl(text) : parse_cargotoml(text);
    auto tr = translate_detailed(text, from, to);
    auto bundle = lower_stack(inst, infer_stack(inst));

    Rendered expected;
    for (const auto& r : enumerate_resolutions(bundle.core)) {
        PackageSet mapped;
        for (const auto& p : r.selected) mapped.insert(tr.renames.at(p));
        expected.insert(render(mapped));
    }

    auto target = to == Dialect::Debian ? parse_debctl(tr.text) : parse_cargotoml(tr.text);
    auto tb = lower_stack(target, infer_stack(target));
    Rendered got;
    for (const auto& r : enumerate_resolutions(tb.core))
        got.insert(render(lift_stack(r, tb).base.selected));
    require(got == expected, "translated resolution set differs under the name mapping");
}

void criterion_translation() {
    const char* shared =
        "Package: A\nVersion: 1\nDepends: B (= 1), C (= 1)\n\n"
        "Package: B\nVersion: 1\nDepends: D (>= 1), D (<< 3)\n\n"
        "Package: C\nVersion: 1\nDepends: D (>= 2)\n\n"
        "Package: D\nVersion: 1\n\nPackage: D\nVersion: 2\n\nPackage: D\nVersion: 3\n\n"
        "Query: A (= 1)\n";
    const char* conflicts =
        "Package: A\nVersion: 1\nConflicts: B (<< 3)\n\n"
        "Package: B\nVersion: 1\n\nPackage: B\nVersion: 2\n\nPackage: B\nVersion: 3\n\n"
        "Query: A, B\n";
    const char* virt =
        "Package: A\nVersion: 1\nDepends: V\n\n"
        "Package: B\nVersion: 1\nProvides: V\n\n"
        "Package: C\nVersion: 1\nProvides: V\n\n"
        "Query: A\n";
    check_preserved(shared, Dialect::Debian, Dialect::Cargo);
    check_preserved(conflicts, Dialect::Debian, Dialect::Cargo);
    check_preserved(virt, Dialect::Debian, Dialect::Cargo);

    const char* dup =
        "[package]\nname = \"B\"\nversion = \"1\"\n\n[dependencies]\nD = \"=1\"\n\n"
        "[package]\nname = \"C\"\nversion = \"1\"\n\n[dependencies]\nD = \"=3\"\n\n"
        "[package]\nname = \"D\"\nversion = \"1\"\n\n"
        "[package]\nname = \"D\"\nversion = \"3\"\n\n"
        "[query]\nB = \"=1\"\nC = \"=1\"\n";
    const char* feats =
        "[package]\nname = \"A\"\nversion = \"1\"\n\n"
        "[dependencies]\nD = { version = \"=1\", features = [\"alpha\"] }\n\n"
        "[package]\nname = \"D\"\nversion = \"1\"\n\n"
        "[dependencies]\nE = { version = \"=1\", optional = true }\n\n"
        "[features]\nalpha = [\"dep:E\"]\n\n"
        "[package]\nname = \"E\"\nversion = \"1\"\n\n"
        "[query]\nA = \"=1\"\n";
    check_preserved(dup, Dialect::Cargo, Dialect::Debian);
    check_preserved(feats, Dialect::Cargo, Dialect::Debian);
}

struct Criterion {
    int id;
    const char* title;
    void (*body)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "unique shared-dependency resolution (oracle and sat)", criterion_shared_golden},
        {2, "diamond unresolvable until lowered for concurrency", criterion_diamond},
        {3, "nine-clause cnf encoding golden", criterion_cnf_golden},
        {4, "3-sat equivalence on 200 random formulas", criterion_3sat},
        {5, "per-extension soundness/completeness round trips", criterion_round_trips},
        {6, "composed features+concurrent lowering and round trips", criterion_composition},
        {7, "version formula table rows", criterion_version_table},
        {8, "build graph edges and optional inertness", criterion_build_graph},
        {9, "prefer-fresh returns the pointwise-maximal choice", criterion_prefer_fresh},
        {10, "mvs chain under one second, matches brute pass", criterion_mvs_chain},
        {11, "stack validation orders and named rules", criterion_stack_rules},
        {12, "debian/cargo translation preserves resolution sets", criterion_translation},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string verdict = "PASS";
        std::string detail;
        try {
            c.body();
        } catch (const CheckFailure& f) {
            verdict = "FAIL";
            detail = f.what;
            ++failures;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failures;
        }
        std::cout << verdict << " " << (c.id < 10 ? " " : "") << c.id << ": " << c.title;
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
    }
    return failures;
}
