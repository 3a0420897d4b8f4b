#include <doctest.h>

#include "pkgcalc/ext_virtual.hpp"
#include "support/ext_oracles.hpp"

using namespace pkgcalc;
using namespace pkgcalc::testing;

namespace {

// A wants V; B and C both provide it. V has no real packages.
struct VirtualExample {
    CoreInstance inst;
    ProvidesSet provides;
};

VirtualExample two_providers() {
    Repository repo = repo_of({P("A", "1"), P("B", "1"), P("C", "1")});
    DependencySet deps{{P("A", "1"), N("V"), VS({"1"})}};
    VirtualExample ex{make_instance(std::move(repo), std::move(deps), {{N("A"), VS({"1"})}}), {}};
    ex.provides = {{P("B", "1"), N("V"), V("1")}, {P("C", "1"), N("V"), V("1")}};
    return ex;
}

}  // namespace

TEST_CASE("exactly one witnessed provider satisfies a virtual dependency") {
    auto ex = two_providers();

    ProviderRelation rho{{P("B", "1"), P("A", "1")}};
    CHECK(validate_virtual(ex.inst, ex.provides, {ex.inst.root, P("A", "1"), P("B", "1")}, rho)
              .valid);

    ProviderRelation both{{P("B", "1"), P("A", "1")}, {P("C", "1"), P("A", "1")}};
    auto report = validate_virtual(ex.inst, ex.provides,
                                   {ex.inst.root, P("A", "1"), P("B", "1"), P("C", "1")}, both);
    CHECK_FALSE(report.valid);
    REQUIRE(!report.violations.empty());
    CHECK(report.violations.front().kind == Violation::Kind::ProviderClosure);

    // no provides: plain core validity
    Repository repo = repo_of({P("A", "1"), P("B", "1")});
    auto inst = make_instance(std::move(repo), {dep(P("A", "1"), "B", {"1"})},
                              {{N("A"), VS({"1"})}});
    Resolution s{{inst.root, P("A", "1"), P("B", "1")}};
    CHECK(validate_virtual(inst, {}, s.selected, {}).valid == validate_resolution(inst, s).valid);
}

TEST_CASE("the provider choice package lists each provider as a version") {
    auto ex = two_providers();
    CoreInstance bare = ex.inst;
    // drop the root dependency to compare against the three-line reduction
    DependencySet nonroot;
    for (const auto& d : bare.deps)
        if (!(d.from == bare.root)) nonroot.insert(d);
    bare.deps = nonroot;

    auto low = lower_virtual(bare, ex.provides);
    NameRef choice = provider_choice(P("A", "1"), N("V"));
    Version encB = Version::encoded(P("B", "1"));
    Version encC = Version::encoded(P("C", "1"));

    DependencySet expected{
        {P("A", "1"), choice, {encB, encC}},
        {{choice, encB}, N("B"), VS({"1"})},
        {{choice, encC}, N("C"), VS({"1"})},
    };
    CHECK(low.deps.size() == expected.size());
    for (const auto& d : expected) CHECK(low.deps.count(d));
    CHECK(low.repo.packages.size() == bare.repo.packages.size() + 2);
}

TEST_CASE("a wildcard provide matches any requested version set") {
    Repository repo = repo_of({P("A", "1"), P("B", "1")});
    DependencySet deps{{P("A", "1"), N("V"), VS({"7", "9"})}};
    auto inst = make_instance(std::move(repo), std::move(deps), {{N("A"), VS({"1"})}});
    ProvidesSet provides{{P("B", "1"), N("V"), Version::wildcard()}};

    ProviderRelation rho{{P("B", "1"), P("A", "1")}};
    CHECK(validate_virtual(inst, provides, {inst.root, P("A", "1"), P("B", "1")}, rho).valid);

    auto low = lower_virtual(inst, provides);
    NameRef choice = provider_choice(P("A", "1"), N("V"));
    CHECK(low.deps.count({P("A", "1"), choice, {Version::encoded(P("B", "1"))}}));
}

TEST_CASE("a provided name that also exists keeps its real versions as choices") {
    Repository repo = repo_of({P("A", "1"), P("B", "1"), P("V", "1"), P("V", "2")});
    DependencySet deps{{P("A", "1"), N("V"), VS({"1", "2"})}};
    auto inst = make_instance(std::move(repo), std::move(deps), {{N("A"), VS({"1"})}});
    ProvidesSet provides{{P("B", "1"), N("V"), V("1")}};

    auto low = lower_virtual(inst, provides);
    NameRef choice = provider_choice(P("A", "1"), N("V"));
    // one provider choice, two real-version choices
    std::size_t versions = 0;
    for (const auto& p : low.repo.packages)
        if (same_name(p.name, choice)) ++versions;
    CHECK(versions == 3);
    CHECK(low.deps.count({{choice, Version::encoded(P("V", "1"))}, N("V"), VS({"1"})}));
    CHECK(low.deps.count({{choice, Version::encoded(P("B", "1"))}, N("B"), VS({"1"})}));
}

TEST_CASE("untouched dependencies pass through the virtual lowering") {
    Repository repo = repo_of({P("A", "1"), P("B", "1")});
    auto inst = make_instance(std::move(repo), {dep(P("A", "1"), "B", {"1"})},
                              {{N("A"), VS({"1"})}});
    auto low = lower_virtual(inst, {});
    CHECK(low.deps.size() == inst.deps.size());
    for (const auto& d : inst.deps) CHECK(low.deps.count(d));
}

TEST_CASE("lifting reads the provider relation off the choice packages") {
    auto ex = two_providers();
    auto low = lower_virtual(ex.inst, ex.provides);
    auto all = enumerate_resolutions(low, kNoLimit, 64);
    REQUIRE(!all.empty());
    bool saw_b = false, saw_c = false;
    for (const auto& s : all) {
        auto rv = lift_virtual(s, ex.inst);
        CHECK(validate_virtual(ex.inst, ex.provides, rv.selected, rv.providers).valid);
        for (const auto& e : rv.providers) {
            if (e.provider == P("B", "1")) saw_b = true;
            if (e.provider == P("C", "1")) saw_c = true;
        }
        CHECK(validate_resolution(low, embed_virtual(rv, ex.inst, ex.provides)).valid);
    }
    CHECK(saw_b);
    CHECK(saw_c);
}

TEST_CASE("virtual lift image equals the brute-force resolution set") {
    auto& g = rng();
    for (int round = 0; round < 100; ++round) {
        auto inst = random_core_instance(g, 4, 2);
        auto provides = random_provides(g, inst, 3);
        auto low = lower_virtual(inst, provides);

        Rendered lifted;
        for (const auto& s : enumerate_resolutions(low, kNoLimit, 64)) {
            auto rv = lift_virtual(s, inst);
            for (const auto& p : rv.selected) CHECK(inst.repo.contains(p));
            lifted.insert(render(rv.selected) + "|" + render(rv.providers));
            CHECK(validate_resolution(low, embed_virtual(rv, inst, provides)).valid);
        }
        CHECK(lifted == enumerate_virtual_resolutions(inst, provides));
    }
}
