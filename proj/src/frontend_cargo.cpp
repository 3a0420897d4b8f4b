#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pkgcalc/errors.hpp"
#include "pkgcalc/frontends.hpp"

// The Cargo-manifest subset. A document is a sequence of [package] blocks
// (name/version), each optionally followed by [dependencies] and [features]
// sections, plus one optional [query] section. Requirement strings are
// conjunctions of comparisons ("=1", ">=1, <3", "*", "^1.2"); evaluation is
// deferred until the whole document is read. Major-version granularity is
// implied for every manifest.

namespace pkgcalc {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool bare_key(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

// a scanned key = value line; values are strings, arrays of strings,
// booleans, or one-level inline tables
struct TomlValue {
    enum class Kind { String, Array, Bool, Table } kind = Kind::String;
    std::string str;
    bool boolean = false;
    std::vector<std::string> array;
    std::map<std::string, TomlValue> table;
};

struct Scanner {
    const std::string& s;
    std::size_t i = 0;
    int line;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line); }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    std::string quoted() {
        skip_ws();
        if (i >= s.size() || s[i] != '"') fail("expected a quoted string");
        auto end = s.find('"', i + 1);
        if (end == std::string::npos) fail("unterminated string");
        auto out = s.substr(i + 1, end - i - 1);
        i = end + 1;
        return out;
    }

    std::string key() {
        skip_ws();
        if (i < s.size() && s[i] == '"') return quoted();
        auto start = i;
        while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                                s[i] == '-' || s[i] == '.'))
            ++i;
        if (i == start) fail("expected a key");
        return s.substr(start, i - start);
    }

    TomlValue value() {
        skip_ws();
        if (i >= s.size()) fail("expected a value");
        TomlValue v;
        if (s[i] == '"') {
            v.kind = TomlValue::Kind::String;
            v.str = quoted();
            return v;
        }
        if (s[i] == '[') {
            ++i;
            v.kind = TomlValue::Kind::Array;
            if (!eat(']'))
                while (true) {
                    v.array.push_back(quoted());
                    if (eat(']')) break;
                    if (!eat(',')) fail("expected , or ] in array");
                }
            return v;
        }
        if (s[i] == '{') {
            ++i;
            v.kind = TomlValue::Kind::Table;
            if (!eat('}'))
                while (true) {
                    auto k = key();
                    if (!eat('=')) fail("expected = in inline table");
                    if (!v.table.emplace(k, value()).second) fail("duplicate key " + k);
                    if (eat('}')) break;
                    if (!eat(',')) fail("expected , or } in inline table");
                }
            return v;
        }
        if (s.compare(i, 4, "true") == 0 || s.compare(i, 5, "false") == 0) {
            v.kind = TomlValue::Kind::Bool;
            v.boolean = s[i] == 't';
            i += v.boolean ? 4 : 5;
            return v;
        }
        fail("unsupported value");
    }

    void expect_end() {
        skip_ws();
        if (i < s.size()) fail("trailing characters");
    }
};

// "=1" | ">=1, <3" | "*" | "^1.2" | bare "1" (caret shorthand)
VersionFormula parse_req(const std::string& req, int line) {
    auto text = trim(req);
    if (text == "*") return VersionFormula::top();
    std::optional<VersionFormula> out;
    std::stringstream ss(text);
    std::string part;
    auto add = [&](VersionFormula f) {
        out = out ? VersionFormula::conj(*out, std::move(f)) : std::move(f);
    };
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) throw ParseError("empty requirement", line);
        static const std::vector<std::pair<std::string, CmpOp>> ops = {
            {">=", CmpOp::Ge}, {"<=", CmpOp::Le}, {"=", CmpOp::Eq},
            {">", CmpOp::Gt},  {"<", CmpOp::Lt},
        };
        bool done = false;
        for (const auto& [tok, op] : ops) {
            if (part.rfind(tok, 0) == 0) {
                add(VersionFormula::cmp(op, parse_numeric_version(trim(part.substr(tok.size())))));
                done = true;
                break;
            }
        }
        if (done) continue;
        // caret (also the bare-version shorthand): compatible within the major
        auto body = part[0] == '^' ? trim(part.substr(1)) : part;
        Version lo = parse_numeric_version(body);
        Version hi = Version::numeric({lo.segments()[0] + 1});
        add(VersionFormula::conj(VersionFormula::cmp(CmpOp::Ge, lo),
                                 VersionFormula::cmp(CmpOp::Lt, hi)));
    }
    if (!out) throw ParseError("empty requirement", line);
    return *out;
}

std::string version_str(const Version& v) {
    if (!v.is_numeric()) throw EmitError("version " + to_string(v) + " is not expressible");
    return to_string(v);
}

std::string atom_label(const NameRef& n) {
    if (!n->is_atom()) throw EmitError("name " + to_string(n) + " is not a plain package name");
    return std::get<Name::Atom>(n->repr()).label;
}

std::string key_str(const std::string& label) {
    return bare_key(label) ? label : "\"" + label + "\"";
}

// requirement string for a version set, relative to the existing versions
std::string req_of(const std::string& name, const VersionSet& vs, const Repository& repo) {
    VersionSet all = repo.versions_of(atom(name));
    // "*" over a versionless (purely virtual) name reads back as empty
    if (vs == all) return "*";
    if (vs.empty()) throw EmitError("empty version set on " + name + " is not expressible");
    if (vs.size() == 1) return "=" + version_str(*vs.begin());
    std::vector<Version> order(all.begin(), all.end());
    std::sort(order.begin(), order.end(),
              [](const Version& a, const Version& b) {
                  return compare_versions(a, b) == Ordering::LT;
              });
    auto lo = std::find_if(order.begin(), order.end(),
                           [&](const Version& v) { return vs.count(v); });
    auto hi = lo;
    for (auto it = lo; it != order.end(); ++it)
        if (vs.count(*it)) hi = it;
    if (static_cast<std::size_t>(hi - lo) + 1 != vs.size())
        throw EmitError("version set on " + name + " is not a contiguous range");
    for (auto it = lo; it != hi + 1; ++it)
        if (!vs.count(*it)) throw EmitError("version set on " + name + " is not contiguous");
    return ">=" + version_str(*lo) + ", <=" + version_str(*hi);
}

std::string req_of_formula(const VersionFormula& phi) {
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, VersionFormula::Top>) {
                return "*";
            } else if constexpr (std::is_same_v<T, VersionFormula::And>) {
                return req_of_formula(*node.l) + ", " + req_of_formula(*node.r);
            } else if constexpr (std::is_same_v<T, VersionFormula::Cmp>) {
                if (node.op == CmpOp::Ne)
                    throw EmitError("!= has no requirement-string form");
                return to_string(node.op) + version_str(node.bound);
            } else {
                throw EmitError("disjunctive requirement has no requirement-string form");
            }
        },
        phi.repr());
}

struct RawDep {
    std::string key;
    std::string req = "*";
    std::vector<std::string> features;
    bool optional = false;
    int line = 0;
};

struct RawPkg {
    std::string name;
    std::string version;
    int line = 0;
    std::vector<RawDep> deps;
    std::vector<std::pair<std::string, std::vector<std::string>>> features;  // name -> entries
};

}  // namespace

ExtendedInstance parse_cargotoml(const std::string& text) {
    enum class Section { None, Package, Dependencies, Features, Query };
    Section section = Section::None;
    std::vector<RawPkg> pkgs;
    std::vector<std::pair<RawDep, int>> query;  // (entry, line)
    bool saw_query = false;

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", lineno);
            auto name = trim(t.substr(1, t.size() - 2));
            if (name == "package") {
                section = Section::Package;
                pkgs.push_back(RawPkg{});
                pkgs.back().line = lineno;
            } else if (name == "dependencies" || name == "features") {
                if (pkgs.empty())
                    throw ParseError("[" + name + "] before any [package]", lineno);
                section = name == "dependencies" ? Section::Dependencies : Section::Features;
            } else if (name == "query") {
                if (saw_query) throw ParseError("duplicate [query] section", lineno);
                saw_query = true;
                section = Section::Query;
            } else {
                throw ParseError("unknown section [" + name + "]", lineno);
            }
            continue;
        }

        Scanner sc{t, 0, lineno};
        auto key = sc.key();
        if (!sc.eat('=')) throw ParseError("expected \"key = value\"", lineno);
        TomlValue value = sc.value();
        sc.expect_end();

        switch (section) {
            case Section::None:
                throw ParseError("entry outside any section", lineno);
            case Section::Package: {
                if (value.kind != TomlValue::Kind::String)
                    throw ParseError("expected a string", lineno);
                auto& pkg = pkgs.back();
                if (key == "name") {
                    if (!pkg.name.empty()) throw ParseError("duplicate name", lineno);
                    pkg.name = value.str;
                } else if (key == "version") {
                    if (!pkg.version.empty()) throw ParseError("duplicate version", lineno);
                    pkg.version = value.str;
                } else {
                    throw ParseError("unknown [package] field " + key, lineno);
                }
                break;
            }
            case Section::Dependencies: {
                RawDep dep;
                dep.key = key;
                dep.line = lineno;
                if (value.kind == TomlValue::Kind::String) {
                    dep.req = value.str;
                } else if (value.kind == TomlValue::Kind::Table) {
                    for (const auto& [k, v] : value.table) {
                        if (k == "version" && v.kind == TomlValue::Kind::String)
                            dep.req = v.str;
                        else if (k == "features" && v.kind == TomlValue::Kind::Array)
                            dep.features = v.array;
                        else if (k == "optional" && v.kind == TomlValue::Kind::Bool)
                            dep.optional = v.boolean;
                        else
                            throw ParseError("unsupported dependency field " + k, lineno);
                    }
                } else {
                    throw ParseError("unsupported dependency value", lineno);
                }
                pkgs.back().deps.push_back(std::move(dep));
                break;
            }
            case Section::Features: {
                if (value.kind != TomlValue::Kind::Array)
                    throw ParseError("expected an entry array", lineno);
                for (const auto& e : value.array)
                    if (e.rfind("dep:", 0) != 0)
                        throw ParseError("only dep: feature entries are supported", lineno);
                pkgs.back().features.emplace_back(key, value.array);
                break;
            }
            case Section::Query: {
                if (value.kind != TomlValue::Kind::String)
                    throw ParseError("expected a requirement string", lineno);
                RawDep dep;
                dep.key = key;
                dep.req = value.str;
                query.emplace_back(std::move(dep), lineno);
                break;
            }
        }
    }

    ExtendedInstance out;
    out.root = root_package();
    out.repo.packages.insert(out.root);
    out.gran = GranularitySpec::major();
    out.concurrent = true;

    for (const auto& raw : pkgs) {
        if (raw.name.empty()) throw ParseError("[package] without a name", raw.line);
        if (raw.version.empty()) throw ParseError("[package] without a version", raw.line);
        Package p{atom(raw.name), parse_numeric_version(raw.version)};
        if (!out.repo.packages.insert(p).second)
            throw ParseError("duplicate package " + to_string(p), raw.line);
    }

    // second phase: requirements evaluate against the complete repository
    for (const auto& raw : pkgs) {
        Package p{atom(raw.name), parse_numeric_version(raw.version)};
        for (const auto& dep : raw.deps) {
            if (dep.optional) continue;  // reachable only through a feature
            auto phi = parse_req(dep.req, dep.line);
            if (dep.features.empty()) {
                out.vdeps.push_back({p, atom(dep.key), std::move(phi)});
            } else {
                FeatureSet req(dep.features.begin(), dep.features.end());
                out.features.fdeps.insert(
                    {p, atom(dep.key), eval_formula(phi, atom(dep.key), out.repo), req});
            }
        }
        for (const auto& [feature, entries] : raw.features) {
            out.features.support.insert({p, feature});
            for (const auto& e : entries) {
                auto target = e.substr(4);
                const RawDep* decl = nullptr;
                for (const auto& dep : raw.deps)
                    if (dep.key == target) decl = &dep;
                VersionFormula phi =
                    decl ? parse_req(decl->req, decl->line) : VersionFormula::top();
                FeatureSet req;
                if (decl) req.insert(decl->features.begin(), decl->features.end());
                out.features.adeps.insert(
                    {p, feature, atom(target), eval_formula(phi, atom(target), out.repo), req});
            }
        }
    }
    for (const auto& [dep, qline] : query)
        out.vdeps.push_back({out.root, atom(dep.key), parse_req(dep.req, qline)});
    return out;
}

std::string emit_cargotoml(const ExtendedInstance& inst) {
    if (!inst.conflicts.empty() || !inst.provides.empty() || !inst.pdeps.empty() ||
        !inst.peers.empty() || inst.decl || !inst.optionals.empty() || !inst.singular.empty())
        throw EmitError("instance carries relations with no manifest form");
    if (inst.concurrent && inst.gran.kind != GranularitySpec::Kind::Major)
        throw EmitError("manifests imply major-version granularity");

    std::ostringstream os;
    bool first = true;
    for (const auto& p : inst.repo.packages) {
        if (p == inst.root) continue;
        // [dependencies] lines, keyed for canonical order
        std::map<std::string, std::string> deps;
        auto put_dep = [&](const std::string& key, const std::string& rendered) {
            if (!deps.emplace(key, rendered).second)
                throw EmitError("duplicate dependency on " + key);
        };

        for (const auto& d : inst.deps)
            if (d.from == p)
                put_dep(atom_label(d.on),
                        "\"" + req_of(atom_label(d.on), d.versions, inst.repo) + "\"");
        for (const auto& d : inst.vdeps)
            if (d.from == p)
                put_dep(atom_label(d.on), "\"" + req_of_formula(d.formula) + "\"");
        for (const auto& d : inst.features.fdeps) {
            if (!(d.from == p)) continue;
            std::string feats;
            for (const auto& f : d.requires_) feats += (feats.empty() ? "" : ", ") + ("\"" + f + "\"");
            put_dep(atom_label(d.on), "{ version = \"" + req_of(atom_label(d.on), d.versions,
                                                                inst.repo) +
                                          "\", features = [" + feats + "] }");
        }

        // optional dependencies backing the feature table
        std::map<std::string, std::pair<std::string, FeatureSet>> optional_deps;
        std::map<std::string, std::vector<std::string>> feature_entries;
        for (const auto& s : inst.features.support)
            if (s.pkg == p) feature_entries[s.feature];
        for (const auto& d : inst.features.adeps) {
            if (!(d.from == p)) continue;
            auto label = atom_label(d.on);
            auto rendered = std::make_pair(req_of(label, d.versions, inst.repo), d.requires_);
            auto [it, fresh] = optional_deps.emplace(label, rendered);
            if (!fresh && it->second != rendered)
                throw EmitError("feature entries for " + label + " disagree");
            feature_entries[d.feature].push_back("dep:" + label);
        }
        for (const auto& [label, spec] : optional_deps) {
            std::string feats;
            for (const auto& f : spec.second)
                feats += (feats.empty() ? "" : ", ") + ("\"" + f + "\"");
            std::string table = "{ version = \"" + spec.first + "\"";
            if (!spec.second.empty()) table += ", features = [" + feats + "]";
            table += ", optional = true }";
            put_dep(label, table);
        }

        if (!first) os << "\n";
        first = false;
        os << "[package]\n";
        os << "name = \"" << atom_label(p.name) << "\"\n";
        os << "version = \"" << version_str(p.version) << "\"\n";
        if (!deps.empty()) {
            os << "\n[dependencies]\n";
            for (const auto& [key, rendered] : deps)
                os << key_str(key) << " = " << rendered << "\n";
        }
        if (!feature_entries.empty()) {
            os << "\n[features]\n";
            for (auto& [feature, entries] : feature_entries) {
                std::sort(entries.begin(), entries.end());
                std::string list;
                for (const auto& e : entries)
                    list += (list.empty() ? "" : ", ") + ("\"" + e + "\"");
                os << key_str(feature) << " = [" << list << "]\n";
            }
        }
    }

    std::map<std::string, std::string> query;
    for (const auto& d : inst.deps)
        if (d.from == inst.root)
            query.emplace(atom_label(d.on), req_of(atom_label(d.on), d.versions, inst.repo));
    for (const auto& d : inst.vdeps)
        if (d.from == inst.root) query.emplace(atom_label(d.on), req_of_formula(d.formula));
    if (!query.empty()) {
        if (!first) os << "\n";
        os << "[query]\n";
        for (const auto& [key, req] : query) os << key_str(key) << " = \"" << req << "\"\n";
    }
    return os.str();
}

}  // namespace pkgcalc
