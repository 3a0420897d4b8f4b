#include <doctest.h>

#include "pkgcalc/buildgraph.hpp"
#include "support/oracles.hpp"

using namespace pkgcalc;
using namespace pkgcalc::testing;

namespace {

// A needs B and D; B needs C and optionally uses D.
CoreInstance optional_example(std::initializer_list<QueryItem> query) {
    Repository repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1"), P("D", "1")});
    DependencySet deps{
        dep(P("A", "1"), "B", {"1"}),
        dep(P("A", "1"), "D", {"1"}),
        dep(P("B", "1"), "C", {"1"}),
    };
    return make_instance(std::move(repo), std::move(deps), query);
}

OptionalSet optional_edge() { return {dep(P("B", "1"), "D", {"1"})}; }

}  // namespace

TEST_CASE("optional edges appear only when the dependee is selected") {
    auto narrow = optional_example({{N("B"), VS({"1"})}});
    Resolution s{{narrow.root, P("B", "1"), P("C", "1")}};
    REQUIRE(validate_resolution(narrow, s).valid);
    auto g = build_graph(narrow, optional_edge(), s, /*include_root_edges=*/false);
    CHECK(g.edges.size() == 1);
    CHECK(g.edges.count({P("B", "1"), P("C", "1")}));

    auto wide = optional_example({{N("A"), VS({"1"})}});
    Resolution all{{wide.root, P("A", "1"), P("B", "1"), P("C", "1"), P("D", "1")}};
    REQUIRE(validate_resolution(wide, all).valid);
    auto g2 = build_graph(wide, optional_edge(), all, false);
    CHECK(g2.edges.count({P("B", "1"), P("D", "1")}));
}

TEST_CASE("an empty graph has no edges") {
    auto inst = make_instance(Repository{}, {}, {});
    auto g = build_graph(inst, {}, Resolution{{inst.root}});
    CHECK(g.edges.empty());
    CHECK(g.vertices == PackageSet{inst.root});
}

TEST_CASE("optional dependencies never change what resolves") {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(g, 4, 3);
        // peel off some dependencies and mark them optional instead
        OptionalSet optional;
        DependencySet kept;
        std::bernoulli_distribution demote(0.3);
        for (const auto& d : inst.deps) {
            if (!(d.from == inst.root) && demote(g))
                optional.insert(d);
            else
                kept.insert(d);
        }
        CoreInstance pruned{inst.repo, kept, inst.root};
        auto all = enumerate_resolutions(pruned);
        for (const auto& s : all) {
            auto with = build_graph(pruned, optional, s);
            auto without = build_graph(pruned, {}, s);
            CHECK(with.vertices == s.selected);
            CHECK(without.vertices == s.selected);
            for (const auto& e : without.edges) CHECK(with.edges.count(e));
        }
    }
}

TEST_CASE("a chain builds bottom up") {
    Repository repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1")});
    DependencySet deps{dep(P("A", "1"), "B", {"1"}), dep(P("B", "1"), "C", {"1"})};
    auto inst = make_instance(std::move(repo), std::move(deps), {{N("A"), VS({"1"})}});
    Resolution s{{inst.root, P("A", "1"), P("B", "1"), P("C", "1")}};
    auto g = build_graph(inst, {}, s);
    auto got = topo_order(g);
    REQUIRE(std::holds_alternative<std::vector<Package>>(got));
    auto order = std::get<std::vector<Package>>(got);
    std::vector<Package> expected{P("C", "1"), P("B", "1"), P("A", "1"), inst.root};
    REQUIRE(order.size() == expected.size());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == expected[i]);
}

TEST_CASE("a two-package cycle is reported, not ordered") {
    Repository repo = repo_of({P("X", "1"), P("Y", "1")});
    DependencySet deps{dep(P("X", "1"), "Y", {"1"}), dep(P("Y", "1"), "X", {"1"})};
    auto inst = make_instance(std::move(repo), std::move(deps), {{N("X"), VS({"1"})}});
    Resolution s{{inst.root, P("X", "1"), P("Y", "1")}};
    REQUIRE(validate_resolution(inst, s).valid);
    auto got = topo_order(build_graph(inst, {}, s));
    REQUIRE(std::holds_alternative<CycleReport>(got));
    auto cycle = std::get<CycleReport>(got).cycle;
    CHECK(cycle.size() == 2);
    PackageSet members(cycle.begin(), cycle.end());
    CHECK(members == PackageSet{P("X", "1"), P("Y", "1")});
}

TEST_CASE("topological output respects every edge and is deterministic") {
    auto inst = optional_example({{N("A"), VS({"1"})}});
    Resolution s{{inst.root, P("A", "1"), P("B", "1"), P("C", "1"), P("D", "1")}};
    auto g = build_graph(inst, optional_edge(), s);
    auto got = topo_order(g);
    REQUIRE(std::holds_alternative<std::vector<Package>>(got));
    auto order = std::get<std::vector<Package>>(got);

    auto pos = [&](const Package& p) {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == p) return i;
        REQUIRE(false);
        return std::size_t{0};
    };
    for (const auto& e : g.edges) CHECK(pos(e.dependee) < pos(e.depender));
    CHECK(pos(P("C", "1")) < pos(P("B", "1")));
    CHECK(pos(P("D", "1")) < pos(P("B", "1")));
    CHECK(pos(P("A", "1")) < pos(inst.root));

    auto again = topo_order(build_graph(inst, optional_edge(), s));
    CHECK(std::get<std::vector<Package>>(again) == order);
}

TEST_CASE("dot output lists each vertex and edge on its own line") {
    Repository repo = repo_of({P("A", "1"), P("B", "1")});
    auto inst = make_instance(std::move(repo), {dep(P("A", "1"), "B", {"1"})},
                              {{N("A"), VS({"1"})}});
    Resolution s{{inst.root, P("A", "1"), P("B", "1")}};
    auto dot = to_dot(build_graph(inst, {}, s, false));
    CHECK(dot.find("digraph build {") == 0);
    CHECK(dot.find("\"A 1\";") != std::string::npos);
    CHECK(dot.find("\"A 1\" -> \"B 1\";") != std::string::npos);
    CHECK(dot.back() == '\n');
}
