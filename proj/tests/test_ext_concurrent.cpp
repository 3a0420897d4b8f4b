#include <doctest.h>

#include "pkgcalc/ext_concurrent.hpp"
#include "support/ext_oracles.hpp"

using namespace pkgcalc;
using namespace pkgcalc::testing;

namespace {

// A/B/C at 1.0.0, D at four versions; B and C want overlapping D ranges.
CoreInstance semver_instance(std::initializer_list<QueryItem> query) {
    Repository repo = repo_of({P("A", "1.0.0"), P("B", "1.0.0"), P("C", "1.0.0"), P("D", "1.0.0"),
                               P("D", "2.0.0"), P("D", "2.0.1"), P("D", "3.0.0")});
    DependencySet deps{
        dep(P("A", "1.0.0"), "B", {"1.0.0"}),
        dep(P("A", "1.0.0"), "C", {"1.0.0"}),
        dep(P("B", "1.0.0"), "D", {"1.0.0", "2.0.0", "2.0.1"}),
        dep(P("C", "1.0.0"), "D", {"2.0.0", "2.0.1", "3.0.0"}),
    };
    return make_instance(std::move(repo), std::move(deps), query);
}

ParentEdge edge(const Package& child, const Package& parent) { return {child, parent}; }

}  // namespace

TEST_CASE("major-granularity lowering splits shared ranges through intermediates") {
    auto inst = semver_instance({});
    auto low = lower_concurrent(inst, GranularitySpec::major());

    auto gn = [](const char* n, std::uint64_t m) { return granular(N(n), GranToken::major(m)); };
    Version g1 = Version::gran(GranToken::major(1));
    Version g2 = Version::gran(GranToken::major(2));
    Version g3 = Version::gran(GranToken::major(3));
    NameRef iB = intermediate(N("B"), V("1.0.0"), N("D"));
    NameRef iC = intermediate(N("C"), V("1.0.0"), N("D"));

    DependencySet expected{
        {{gn("A", 1), V("1.0.0")}, gn("B", 1), VS({"1.0.0"})},
        {{gn("A", 1), V("1.0.0")}, gn("C", 1), VS({"1.0.0"})},
        {{gn("B", 1), V("1.0.0")}, iB, {g1, g2}},
        {{iB, g1}, gn("D", 1), VS({"1.0.0"})},
        {{iB, g2}, gn("D", 2), VS({"2.0.0", "2.0.1"})},
        {{gn("C", 1), V("1.0.0")}, iC, {g2, g3}},
        {{iC, g2}, gn("D", 2), VS({"2.0.0", "2.0.1"})},
        {{iC, g3}, gn("D", 3), VS({"3.0.0"})},
    };
    CHECK(low.deps.size() == expected.size());
    for (const auto& d : expected) CHECK(low.deps.count(d));

    // 7 renamed packages, 4 intermediate versions, the root
    CHECK(low.repo.packages.size() == 12);
}

TEST_CASE("distinct majors may coexist but one major may not") {
    auto inst = semver_instance({{N("A"), VS({"1.0.0"})}});
    GranularitySpec g = GranularitySpec::major();

    PackageSet s{inst.root, P("A", "1.0.0"), P("B", "1.0.0"), P("C", "1.0.0"), P("D", "1.0.0"),
                 P("D", "3.0.0")};
    ParentRelation pi{
        edge(P("A", "1.0.0"), inst.root),
        edge(P("B", "1.0.0"), P("A", "1.0.0")),
        edge(P("C", "1.0.0"), P("A", "1.0.0")),
        edge(P("D", "1.0.0"), P("B", "1.0.0")),
        edge(P("D", "3.0.0"), P("C", "1.0.0")),
    };
    CHECK(validate_concurrent(inst, g, s, pi).valid);

    PackageSet clash{inst.root,      P("A", "1.0.0"), P("B", "1.0.0"), P("C", "1.0.0"),
                     P("D", "2.0.0"), P("D", "2.0.1")};
    ParentRelation pi2{
        edge(P("A", "1.0.0"), inst.root),
        edge(P("B", "1.0.0"), P("A", "1.0.0")),
        edge(P("C", "1.0.0"), P("A", "1.0.0")),
        edge(P("D", "2.0.0"), P("B", "1.0.0")),
        edge(P("D", "2.0.1"), P("C", "1.0.0")),
    };
    auto report = validate_concurrent(inst, g, clash, pi2);
    CHECK_FALSE(report.valid);
    REQUIRE(!report.violations.empty());
    CHECK(report.violations.front().kind == Violation::Kind::VersionGranularity);
}

TEST_CASE("constant granularity collapses onto the single-version calculus") {
    auto inst = shared_dep_instance();
    auto conc = enumerate_concurrent_resolutions(inst, GranularitySpec::constant());
    Rendered conc_selected;
    for (const auto& entry : conc) conc_selected.insert(entry.substr(0, entry.find('|')));
    Rendered core;
    for (const auto& s : enumerate_resolutions(inst)) core.insert(render(s.selected));
    CHECK(conc_selected == core);
}

TEST_CASE("identity granularity resolves the conflicting diamond") {
    auto inst = diamond_conflict_instance();
    CHECK(enumerate_resolutions(inst).empty());
    auto low = lower_concurrent(inst, GranularitySpec::identity());
    CHECK_FALSE(enumerate_resolutions(low, kNoLimit, 64).empty());
}

TEST_CASE("single-bucket dependencies lower directly without intermediates") {
    Repository repo = repo_of({P("A", "1.0.0"), P("B", "2.0.0"), P("B", "2.1.0")});
    DependencySet deps{dep(P("A", "1.0.0"), "B", {"2.0.0", "2.1.0"})};
    auto inst = make_instance(std::move(repo), std::move(deps), {{N("A"), VS({"1.0.0"})}});
    auto low = lower_concurrent(inst, GranularitySpec::major());
    CHECK(low.repo.packages.size() == inst.repo.packages.size());
    CHECK(low.deps.count({{granular(N("A"), GranToken::major(1)), V("1.0.0")},
                          granular(N("B"), GranToken::major(2)), VS({"2.0.0", "2.1.0"})}));
}

TEST_CASE("concurrent lift image equals the brute-force resolution set") {
    auto& g = rng();
    const GranularitySpec specs[] = {GranularitySpec::identity(), GranularitySpec::major(),
                                     GranularitySpec::constant()};
    for (int round = 0; round < 99; ++round) {
        auto inst = random_concurrent_instance(g);
        const auto& spec = specs[round % 3];
        auto low = lower_concurrent(inst, spec);

        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto rc = lift_concurrent(s, inst, spec);
            for (const auto& p : rc.selected) CHECK(inst.repo.contains(p));
            for (const auto& e : rc.parents) {
                CHECK(rc.selected.count(e.child));
                CHECK(rc.selected.count(e.parent));
            }
            lifted.insert(render(rc.selected) + "|" + render(rc.parents));
            CHECK(validate_resolution(low, embed_concurrent(rc, inst, spec)).valid);
        }
        CHECK(lifted == enumerate_concurrent_resolutions(inst, spec));
    }
}

TEST_CASE("a peer constraint pins the parent's sibling version") {
    Repository repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1"), P("C", "2"), P("C", "3")});
    DependencySet deps{
        dep(P("A", "1"), "B", {"1"}),
        dep(P("A", "1"), "C", {"2", "3"}),
    };
    auto inst = make_instance(std::move(repo), std::move(deps), {{N("A"), VS({"1"})}});
    PeerSet peers{dep(P("B", "1"), "C", {"1", "2"})};
    GranularitySpec g = GranularitySpec::identity();

    PackageSet ok{inst.root, P("A", "1"), P("B", "1"), P("C", "2")};
    ParentRelation pi{
        edge(P("A", "1"), inst.root),
        edge(P("B", "1"), P("A", "1")),
        edge(P("C", "2"), P("A", "1")),
    };
    CHECK(validate_peer(inst, peers, g, ok, pi).valid);

    PackageSet bad{inst.root, P("A", "1"), P("B", "1"), P("C", "3")};
    ParentRelation pi2{
        edge(P("A", "1"), inst.root),
        edge(P("B", "1"), P("A", "1")),
        edge(P("C", "3"), P("A", "1")),
    };
    auto report = validate_peer(inst, peers, g, bad, pi2);
    CHECK_FALSE(report.valid);
    REQUIRE(!report.violations.empty());
    CHECK(report.violations.front().kind == Violation::Kind::PeerSatisfaction);

    // no peers: plain concurrent validity
    CHECK(validate_peer(inst, {}, g, bad, pi2).valid ==
          validate_concurrent(inst, g, bad, pi2).valid);
}

TEST_CASE("peer lowering routes the sibling through the parent's intermediate") {
    Repository repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1"), P("C", "2"), P("C", "3")});
    DependencySet deps{
        dep(P("A", "1"), "B", {"1"}),
        dep(P("A", "1"), "C", {"2", "3"}),
    };
    auto inst = make_instance(std::move(repo), std::move(deps), {});
    PeerSet peers{dep(P("B", "1"), "C", {"1", "2"})};
    auto low = lower_peer(inst, peers, GranularitySpec::identity());

    NameRef iB = intermediate(N("A"), V("1"), N("B"));
    NameRef iC = intermediate(N("A"), V("1"), N("C"));
    // the peer constraint from B's slot onto A's C-intermediate
    CHECK(low.deps.count({{iB, V("1")}, iC, VS({"1", "2"})}));
    // the peer widens the C intermediate with version 1
    CHECK(low.repo.contains({iC, V("1")}));
}

TEST_CASE("peer lift image equals the brute-force resolution set") {
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
            for (const auto& p : rc.selected) CHECK(inst.repo.contains(p));
            lifted.insert(render(rc.selected) + "|" + render(rc.parents));
            CHECK(validate_resolution(low, embed_peer(rc, inst, spec)).valid);
        }
        CHECK(lifted == enumerate_peer_resolutions(inst, peers, spec));
    }
}
