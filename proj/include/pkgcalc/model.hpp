#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

// The domain model: package names (atoms plus the synthetic constructors
// introduced by the lowering passes), versions, packages, and the canonical
// total order used everywhere for deterministic output.

namespace pkgcalc {

class Name;
class Version;
struct Package;

using NameRef = std::shared_ptr<const Name>;

// Granularity tokens: the codomain of a granularity function. A token is
// either the empty token (epsilon), a major-version number, the identity
// image of a full version, or an explicit table entry.
class GranToken {
public:
    struct Epsilon {};
    struct MajorOf { std::uint64_t major = 0; };
    struct VersionOf { std::shared_ptr<const Version> version; };
    struct Label { std::string label; };

    using Repr = std::variant<Epsilon, MajorOf, VersionOf, Label>;

    GranToken() : repr_(Epsilon{}) {}
    explicit GranToken(Repr r) : repr_(std::move(r)) {}

    static GranToken epsilon() { return GranToken(Epsilon{}); }
    static GranToken major(std::uint64_t m) { return GranToken(MajorOf{m}); }
    static GranToken of_version(const Version& v);
    static GranToken label(std::string s) { return GranToken(Label{std::move(s)}); }

    const Repr& repr() const { return repr_; }

private:
    Repr repr_;
};

int compare(const GranToken& a, const GranToken& b);
std::string to_string(const GranToken& t);

// Versions. Numeric versions are dot-separated non-negative integer
// segments; the remaining variants exist only so lowering passes can mint
// versions that can never collide with user versions.
class Version {
public:
    struct Numeric { std::vector<std::uint64_t> segments; };
    struct Marker { bool one = false; };            // the 0/1 guard versions
    struct Gran { GranToken token; };               // granularity-as-version
    struct Encoded { std::shared_ptr<const Package> pkg; };  // provider-choice targets
    struct VarValue { std::string value; };         // variable domain values
    struct Wildcard {};                             // legal only inside a provides relation

    using Repr = std::variant<Numeric, Marker, Gran, Encoded, VarValue, Wildcard>;

    Version() : repr_(Numeric{{0}}) {}
    explicit Version(Repr r) : repr_(std::move(r)) {}

    static Version numeric(std::vector<std::uint64_t> segs) {
        return Version(Numeric{std::move(segs)});
    }
    static Version marker0() { return Version(Marker{false}); }
    static Version marker1() { return Version(Marker{true}); }
    static Version gran(GranToken t) { return Version(Gran{std::move(t)}); }
    static Version encoded(const Package& p);
    static Version var_value(std::string v) { return Version(VarValue{std::move(v)}); }
    static Version wildcard() { return Version(Wildcard{}); }

    const Repr& repr() const { return repr_; }

    bool is_numeric() const { return std::holds_alternative<Numeric>(repr_); }
    bool is_wildcard() const { return std::holds_alternative<Wildcard>(repr_); }
    bool is_marker() const { return std::holds_alternative<Marker>(repr_); }
    const std::vector<std::uint64_t>& segments() const {
        return std::get<Numeric>(repr_).segments;
    }

private:
    Repr repr_;
};

// Canonical total order over all version variants: variant index first, then
// value. Distinct from the semantic ordering <=_v, which is total only on
// Numeric versions (see versions.hpp).
int compare(const Version& a, const Version& b);
std::string to_string(const Version& v);

struct VersionLess {
    bool operator()(const Version& a, const Version& b) const { return compare(a, b) < 0; }
};
using VersionSet = std::set<Version, VersionLess>;

std::string to_string(const VersionSet& vs);

struct NameLess {
    bool operator()(const NameRef& a, const NameRef& b) const;
};

struct Package {
    NameRef name;
    Version version;
};

int compare(const Package& a, const Package& b);
std::string to_string(const Package& p);

inline bool operator==(const Package& a, const Package& b) { return compare(a, b) == 0; }
inline bool operator==(const Version& a, const Version& b) { return compare(a, b) == 0; }

struct PackageLess {
    bool operator()(const Package& a, const Package& b) const { return compare(a, b) < 0; }
};
using PackageSet = std::set<Package, PackageLess>;

// Package names. Atoms come from user input; every other constructor is
// minted by a lowering pass and carries enough structure to decode it again.
// Constructors are injective and the synthetic namespace is disjoint from
// atoms (atoms never contain '(' , see frontends).
class Name {
public:
    struct Root {};
    struct Atom { std::string label; };
    struct ConflictGuard { NameRef base; VersionSet versions; };
    struct Granular { NameRef base; GranToken gran; };
    struct Intermediate { NameRef owner; Version owner_version; NameRef target; };
    struct FeatureGate { NameRef base; std::string feature; };
    struct DisjunctionNode { std::string id; };
    struct GlobalVar { std::string var; };
    struct LocalVar { std::shared_ptr<const Package> pkg; std::string var; };
    struct ProviderChoice { std::shared_ptr<const Package> depender; NameRef target; };

    using Repr = std::variant<Root, Atom, ConflictGuard, Granular, Intermediate,
                              FeatureGate, DisjunctionNode, GlobalVar, LocalVar,
                              ProviderChoice>;

    explicit Name(Repr r) : repr_(std::move(r)) {}
    const Repr& repr() const { return repr_; }

    bool is_atom() const { return std::holds_alternative<Atom>(repr_); }
    bool is_root() const { return std::holds_alternative<Root>(repr_); }
    bool is_synthetic() const { return !is_atom(); }

private:
    Repr repr_;
};

NameRef root_name();
NameRef atom(std::string label);
NameRef conflict_guard(NameRef base, VersionSet versions);
NameRef granular(NameRef base, GranToken gran);
NameRef intermediate(NameRef owner, Version owner_version, NameRef target);
NameRef feature_gate(NameRef base, std::string feature);
NameRef disjunction_node(std::string id);
NameRef global_var(std::string var);
NameRef local_var(const Package& pkg, std::string var);
NameRef provider_choice(const Package& depender, NameRef target);

int compare(const Name& a, const Name& b);
int compare(const NameRef& a, const NameRef& b);
std::string to_string(const Name& n);
inline std::string to_string(const NameRef& n) { return to_string(*n); }

inline bool NameLess::operator()(const NameRef& a, const NameRef& b) const {
    return compare(a, b) < 0;
}

inline bool same_name(const NameRef& a, const NameRef& b) { return compare(a, b) == 0; }

// The reserved synthetic root package injected by instance builders.
Package root_package();

}  // namespace pkgcalc
