#include "pkgcalc/model.hpp"

#include <sstream>

namespace pkgcalc {

namespace {

template <typename T>
int cmp_scalar(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int cmp_segments(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    // Canonical order over segment vectors is plain lexicographic; padding
    // equivalence (1.4 == 1.4.0) belongs to the semantic order <=_v only.
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = cmp_scalar(a[i], b[i])) return c;
    return cmp_scalar(a.size(), b.size());
}

}  // namespace

GranToken GranToken::of_version(const Version& v) {
    return GranToken(VersionOf{std::make_shared<const Version>(v)});
}

int compare(const GranToken& a, const GranToken& b) {
    if (int c = cmp_scalar(a.repr().index(), b.repr().index())) return c;
    struct Cmp {
        const GranToken::Repr& other;
        int operator()(const GranToken::Epsilon&) const { return 0; }
        int operator()(const GranToken::MajorOf& x) const {
            return cmp_scalar(x.major, std::get<GranToken::MajorOf>(other).major);
        }
        int operator()(const GranToken::VersionOf& x) const {
            return compare(*x.version, *std::get<GranToken::VersionOf>(other).version);
        }
        int operator()(const GranToken::Label& x) const {
            return x.label.compare(std::get<GranToken::Label>(other).label);
        }
    };
    return std::visit(Cmp{b.repr()}, a.repr());
}

std::string to_string(const GranToken& t) {
    struct Str {
        std::string operator()(const GranToken::Epsilon&) const { return "eps"; }
        std::string operator()(const GranToken::MajorOf& x) const {
            return std::to_string(x.major);
        }
        std::string operator()(const GranToken::VersionOf& x) const {
            return to_string(*x.version);
        }
        std::string operator()(const GranToken::Label& x) const { return x.label; }
    };
    return std::visit(Str{}, t.repr());
}

Version Version::encoded(const Package& p) {
    return Version(Encoded{std::make_shared<const Package>(p)});
}

int compare(const Version& a, const Version& b) {
    if (int c = cmp_scalar(a.repr().index(), b.repr().index())) return c;
    struct Cmp {
        const Version::Repr& other;
        int operator()(const Version::Numeric& x) const {
            return cmp_segments(x.segments, std::get<Version::Numeric>(other).segments);
        }
        int operator()(const Version::Marker& x) const {
            return cmp_scalar(x.one, std::get<Version::Marker>(other).one);
        }
        int operator()(const Version::Gran& x) const {
            return compare(x.token, std::get<Version::Gran>(other).token);
        }
        int operator()(const Version::Encoded& x) const {
            return compare(*x.pkg, *std::get<Version::Encoded>(other).pkg);
        }
        int operator()(const Version::VarValue& x) const {
            return x.value.compare(std::get<Version::VarValue>(other).value);
        }
        int operator()(const Version::Wildcard&) const { return 0; }
    };
    return std::visit(Cmp{b.repr()}, a.repr());
}

std::string to_string(const Version& v) {
    struct Str {
        std::string operator()(const Version::Numeric& x) const {
            std::string s;
            for (std::size_t i = 0; i < x.segments.size(); ++i) {
                if (i) s += '.';
                s += std::to_string(x.segments[i]);
            }
            return s;
        }
        std::string operator()(const Version::Marker& x) const { return x.one ? "#1" : "#0"; }
        std::string operator()(const Version::Gran& x) const { return "~" + to_string(x.token); }
        std::string operator()(const Version::Encoded& x) const {
            return "enc(" + to_string(*x.pkg) + ")";
        }
        std::string operator()(const Version::VarValue& x) const { return "'" + x.value + "'"; }
        std::string operator()(const Version::Wildcard&) const { return "*"; }
    };
    return std::visit(Str{}, v.repr());
}

std::string to_string(const VersionSet& vs) {
    std::string s = "{";
    bool first = true;
    for (const auto& v : vs) {
        if (!first) s += ",";
        first = false;
        s += to_string(v);
    }
    return s + "}";
}

int compare(const Package& a, const Package& b) {
    if (int c = compare(a.name, b.name)) return c;
    return compare(a.version, b.version);
}

std::string to_string(const Package& p) {
    return to_string(*p.name) + "@" + to_string(p.version);
}

NameRef root_name() {
    static const NameRef n = std::make_shared<const Name>(Name::Repr{Name::Root{}});
    return n;
}

NameRef atom(std::string label) {
    return std::make_shared<const Name>(Name::Repr{Name::Atom{std::move(label)}});
}

NameRef conflict_guard(NameRef base, VersionSet versions) {
    return std::make_shared<const Name>(
        Name::Repr{Name::ConflictGuard{std::move(base), std::move(versions)}});
}

NameRef granular(NameRef base, GranToken gran) {
    return std::make_shared<const Name>(
        Name::Repr{Name::Granular{std::move(base), std::move(gran)}});
}

NameRef intermediate(NameRef owner, Version owner_version, NameRef target) {
    return std::make_shared<const Name>(Name::Repr{
        Name::Intermediate{std::move(owner), std::move(owner_version), std::move(target)}});
}

NameRef feature_gate(NameRef base, std::string feature) {
    return std::make_shared<const Name>(
        Name::Repr{Name::FeatureGate{std::move(base), std::move(feature)}});
}

NameRef disjunction_node(std::string id) {
    return std::make_shared<const Name>(Name::Repr{Name::DisjunctionNode{std::move(id)}});
}

NameRef global_var(std::string var) {
    return std::make_shared<const Name>(Name::Repr{Name::GlobalVar{std::move(var)}});
}

NameRef local_var(const Package& pkg, std::string var) {
    return std::make_shared<const Name>(
        Name::Repr{Name::LocalVar{std::make_shared<const Package>(pkg), std::move(var)}});
}

NameRef provider_choice(const Package& depender, NameRef target) {
    return std::make_shared<const Name>(Name::Repr{
        Name::ProviderChoice{std::make_shared<const Package>(depender), std::move(target)}});
}

int compare(const Name& a, const Name& b) {
    if (int c = cmp_scalar(a.repr().index(), b.repr().index())) return c;
    struct Cmp {
        const Name::Repr& other;
        int operator()(const Name::Root&) const { return 0; }
        int operator()(const Name::Atom& x) const {
            return x.label.compare(std::get<Name::Atom>(other).label);
        }
        int operator()(const Name::ConflictGuard& x) const {
            const auto& o = std::get<Name::ConflictGuard>(other);
            if (int c = compare(x.base, o.base)) return c;
            auto ia = x.versions.begin(), ib = o.versions.begin();
            for (; ia != x.versions.end() && ib != o.versions.end(); ++ia, ++ib)
                if (int c = compare(*ia, *ib)) return c;
            return cmp_scalar(x.versions.size(), o.versions.size());
        }
        int operator()(const Name::Granular& x) const {
            const auto& o = std::get<Name::Granular>(other);
            if (int c = compare(x.base, o.base)) return c;
            return compare(x.gran, o.gran);
        }
        int operator()(const Name::Intermediate& x) const {
            const auto& o = std::get<Name::Intermediate>(other);
            if (int c = compare(x.owner, o.owner)) return c;
            if (int c = compare(x.owner_version, o.owner_version)) return c;
            return compare(x.target, o.target);
        }
        int operator()(const Name::FeatureGate& x) const {
            const auto& o = std::get<Name::FeatureGate>(other);
            if (int c = compare(x.base, o.base)) return c;
            return x.feature.compare(o.feature);
        }
        int operator()(const Name::DisjunctionNode& x) const {
            return x.id.compare(std::get<Name::DisjunctionNode>(other).id);
        }
        int operator()(const Name::GlobalVar& x) const {
            return x.var.compare(std::get<Name::GlobalVar>(other).var);
        }
        int operator()(const Name::LocalVar& x) const {
            const auto& o = std::get<Name::LocalVar>(other);
            if (int c = compare(*x.pkg, *o.pkg)) return c;
            return x.var.compare(o.var);
        }
        int operator()(const Name::ProviderChoice& x) const {
            const auto& o = std::get<Name::ProviderChoice>(other);
            if (int c = compare(*x.depender, *o.depender)) return c;
            return compare(x.target, o.target);
        }
    };
    return std::visit(Cmp{b.repr()}, a.repr());
}

int compare(const NameRef& a, const NameRef& b) {
    if (a == b) return 0;
    return compare(*a, *b);
}

std::string to_string(const Name& n) {
    struct Str {
        std::string operator()(const Name::Root&) const { return "root"; }
        std::string operator()(const Name::Atom& x) const { return x.label; }
        std::string operator()(const Name::ConflictGuard& x) const {
            return "guard(" + to_string(*x.base) + "," + to_string(x.versions) + ")";
        }
        std::string operator()(const Name::Granular& x) const {
            return "gran(" + to_string(*x.base) + "," + to_string(x.gran) + ")";
        }
        std::string operator()(const Name::Intermediate& x) const {
            return "mid(" + to_string(*x.owner) + "," + to_string(x.owner_version) + "," +
                   to_string(*x.target) + ")";
        }
        std::string operator()(const Name::FeatureGate& x) const {
            return "feat(" + to_string(*x.base) + "," + x.feature + ")";
        }
        std::string operator()(const Name::DisjunctionNode& x) const {
            return "or(" + x.id + ")";
        }
        std::string operator()(const Name::GlobalVar& x) const { return "var(" + x.var + ")"; }
        std::string operator()(const Name::LocalVar& x) const {
            return "lvar(" + to_string(*x.pkg) + "," + x.var + ")";
        }
        std::string operator()(const Name::ProviderChoice& x) const {
            return "choice(" + to_string(*x.depender) + "," + to_string(*x.target) + ")";
        }
    };
    return std::visit(Str{}, n.repr());
}

Package root_package() { return Package{root_name(), Version::marker1()}; }

}  // namespace pkgcalc
