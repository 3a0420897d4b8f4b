#include <charconv>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pkgcalc/errors.hpp"
#include "pkgcalc/frontends.hpp"

// The canonical JSON interchange format. Parsing is strict: unknown keys and
// malformed values are ParseErrors; emission is canonical (sorted keys and
// collections) so emitting a parsed document is a fixpoint.

namespace pkgcalc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& expect(const json& j, json::value_t t, const std::string& where) {
    if (j.type() != t) fail(where + ": unexpected value type");
    return j;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : allowed)
            if (key == k) ok = true;
        if (!ok) fail(where + ": unknown field \"" + key + "\"");
    }
}

std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where + ": expected a string");
    return j.get<std::string>();
}

Version parse_json_version(const std::string& s, bool allow_wildcard) {
    if (s == "#0") return Version::marker0();
    if (s == "#1") return Version::marker1();
    if (s == "*" && allow_wildcard) return Version::wildcard();
    return parse_numeric_version(s);
}

std::string version_str(const Version& v) {
    if (v.is_numeric() || v.is_marker() || v.is_wildcard()) return to_string(v);
    throw EmitError("version " + to_string(v) + " has no interchange form");
}

Package parse_pkg(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where + ": expected [name, version]");
    return {atom(str(j[0], where)), parse_json_version(str(j[1], where), false)};
}

json emit_pkg(const Package& p) {
    if (!p.name->is_atom()) throw EmitError("package " + to_string(p) + " is not an atom");
    return json::array({std::get<Name::Atom>(p.name->repr()).label, version_str(p.version)});
}

VersionSet parse_vset(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + ": expected a version array");
    VersionSet out;
    for (const auto& e : j) out.insert(parse_json_version(str(e, where), false));
    return out;
}

json emit_vset(const VersionSet& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back(version_str(v));
    return out;
}

FeatureSet parse_fset(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + ": expected a feature array");
    FeatureSet out;
    for (const auto& e : j) out.insert(str(e, where));
    return out;
}

std::optional<CmpOp> parse_cmp_op(const std::string& s) {
    if (s == ">=") return CmpOp::Ge;
    if (s == ">") return CmpOp::Gt;
    if (s == "<=") return CmpOp::Le;
    if (s == "<") return CmpOp::Lt;
    if (s == "=") return CmpOp::Eq;
    if (s == "!=") return CmpOp::Ne;
    return std::nullopt;
}

FormulaRef parse_psi(const json& j) {
    if (!j.is_object() || j.size() != 1) fail("formula: expected a one-key object");
    const auto& [key, val] = *j.items().begin();
    if (key == "dep") {
        check_keys(val, {"on", "versions"}, "formula dep");
        return PackageFormula::dep(atom(str(val.at("on"), "formula dep")),
                                   parse_vset(val.at("versions"), "formula dep"));
    }
    if (key == "and" || key == "or") {
        if (!val.is_array() || val.size() != 2) fail("formula " + key + ": expected [l, r]");
        auto l = parse_psi(val[0]), r = parse_psi(val[1]);
        return key == "and" ? PackageFormula::conj(l, r) : PackageFormula::disj(l, r);
    }
    if (key == "not") return PackageFormula::neg(parse_psi(val));
    if (key == "global" || key == "local") {
        check_keys(val, {"var", "op", "value"}, "formula comparison");
        auto op = parse_cmp_op(str(val.at("op"), "formula comparison"));
        if (!op) fail("formula comparison: bad operator");
        auto var = str(val.at("var"), "formula comparison");
        auto value = str(val.at("value"), "formula comparison");
        return key == "global" ? PackageFormula::gcmp(var, *op, value)
                               : PackageFormula::lcmp(var, *op, value);
    }
    fail("formula: unknown node \"" + key + "\"");
}

json emit_psi(const PackageFormula& psi) {
    return std::visit(
        [](const auto& node) -> json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, PackageFormula::Dep>) {
                if (!node.on->is_atom()) throw EmitError("formula atom is not a plain name");
                return {{"dep",
                         {{"on", std::get<Name::Atom>(node.on->repr()).label},
                          {"versions", emit_vset(node.versions)}}}};
            } else if constexpr (std::is_same_v<T, PackageFormula::And>) {
                return {{"and", json::array({emit_psi(*node.l), emit_psi(*node.r)})}};
            } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                return {{"or", json::array({emit_psi(*node.l), emit_psi(*node.r)})}};
            } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                return {{"not", emit_psi(*node.inner)}};
            } else if constexpr (std::is_same_v<T, PackageFormula::GCmp>) {
                return {{"global",
                         {{"var", node.var}, {"op", to_string(node.op)}, {"value", node.value}}}};
            } else {
                return {{"local",
                         {{"var", node.var}, {"op", to_string(node.op)}, {"value", node.value}}}};
            }
        },
        psi.repr());
}

// One dependency-shaped record: "versions" gives a set dependency,
// "formula" a version formula.
void parse_dep_record(const json& j, const Package& from, ExtendedInstance& out,
                      const std::string& where) {
    check_keys(j, {"from", "on", "versions", "formula"}, where);
    NameRef on = atom(str(j.at("on"), where));
    if (j.contains("versions") == j.contains("formula"))
        fail(where + ": exactly one of \"versions\"/\"formula\" required");
    if (j.contains("versions"))
        out.deps.insert({from, on, parse_vset(j.at("versions"), where)});
    else
        out.vdeps.push_back({from, on, parse_version_formula(str(j.at("formula"), where))});
}

}  // namespace

namespace {
ExtendedInstance parse_repo_impl(const json& doc);
}

ExtendedInstance parse_repo(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return parse_repo_impl(doc);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

namespace {
ExtendedInstance parse_repo_impl(const json& doc) {
    if (!doc.is_object()) fail("document must be an object");
    if (!doc.contains("packages")) fail("document needs a \"packages\" array");
    check_keys(doc,
               {"packages", "dependencies", "query", "conflicts", "provides", "peers", "features",
                "granularity", "optional", "singular", "variables", "formulas"},
               "document");

    ExtendedInstance out;
    out.repo.packages.insert(out.root);

    for (const auto& e : expect(doc.at("packages"), json::value_t::array, "packages")) {
        check_keys(e, {"name", "version"}, "packages");
        Package p{atom(str(e.at("name"), "packages")),
                  parse_json_version(str(e.at("version"), "packages"), false)};
        if (!out.repo.packages.insert(p).second) fail("duplicate package " + to_string(p));
    }

    auto known = [&](const Package& p, const std::string& where) {
        if (!out.repo.contains(p)) fail(where + ": unknown package " + to_string(p));
        return p;
    };

    if (doc.contains("dependencies"))
        for (const auto& e : expect(doc["dependencies"], json::value_t::array, "dependencies"))
            parse_dep_record(e, known(parse_pkg(e.at("from"), "dependencies"), "dependencies"),
                             out, "dependencies");

    if (doc.contains("query"))
        for (const auto& e : expect(doc["query"], json::value_t::array, "query")) {
            check_keys(e, {"on", "versions", "formula"}, "query");
            parse_dep_record(e, out.root, out, "query");
        }

    if (doc.contains("conflicts"))
        for (const auto& e : expect(doc["conflicts"], json::value_t::array, "conflicts")) {
            check_keys(e, {"from", "on", "versions"}, "conflicts");
            out.conflicts.insert({known(parse_pkg(e.at("from"), "conflicts"), "conflicts"),
                                  atom(str(e.at("on"), "conflicts")),
                                  parse_vset(e.at("versions"), "conflicts")});
        }

    if (doc.contains("provides"))
        for (const auto& e : expect(doc["provides"], json::value_t::array, "provides")) {
            check_keys(e, {"provider", "name", "version"}, "provides");
            out.provides.insert({known(parse_pkg(e.at("provider"), "provides"), "provides"),
                                 atom(str(e.at("name"), "provides")),
                                 parse_json_version(str(e.at("version"), "provides"), true)});
        }

    if (doc.contains("peers"))
        for (const auto& e : expect(doc["peers"], json::value_t::array, "peers")) {
            check_keys(e, {"from", "on", "versions"}, "peers");
            out.peers.insert({known(parse_pkg(e.at("from"), "peers"), "peers"),
                              atom(str(e.at("on"), "peers")),
                              parse_vset(e.at("versions"), "peers")});
        }

    if (doc.contains("features")) {
        const auto& f = expect(doc["features"], json::value_t::object, "features");
        check_keys(f, {"support", "deps", "additional"}, "features");
        if (f.contains("support"))
            for (const auto& e : expect(f["support"], json::value_t::array, "features.support")) {
                check_keys(e, {"package", "feature"}, "features.support");
                out.features.support.insert(
                    {known(parse_pkg(e.at("package"), "features.support"), "features.support"),
                     str(e.at("feature"), "features.support")});
            }
        if (f.contains("deps"))
            for (const auto& e : expect(f["deps"], json::value_t::array, "features.deps")) {
                check_keys(e, {"from", "on", "versions", "requires"}, "features.deps");
                Package from = known(parse_pkg(e.at("from"), "features.deps"), "features.deps");
                out.features.fdeps.insert({from, atom(str(e.at("on"), "features.deps")),
                                           parse_vset(e.at("versions"), "features.deps"),
                                           parse_fset(e.at("requires"), "features.deps")});
            }
        if (f.contains("additional"))
            for (const auto& e :
                 expect(f["additional"], json::value_t::array, "features.additional")) {
                check_keys(e, {"from", "feature", "on", "versions", "requires"},
                           "features.additional");
                out.features.adeps.insert(
                    {known(parse_pkg(e.at("from"), "features.additional"), "features.additional"),
                     str(e.at("feature"), "features.additional"),
                     atom(str(e.at("on"), "features.additional")),
                     parse_vset(e.at("versions"), "features.additional"),
                     parse_fset(e.at("requires"), "features.additional")});
            }
    }

    if (doc.contains("granularity")) {
        auto g = str(doc["granularity"], "granularity");
        if (g == "identity")
            out.gran = GranularitySpec::identity();
        else if (g == "major")
            out.gran = GranularitySpec::major();
        else if (g == "constant")
            out.gran = GranularitySpec::constant();
        else
            fail("granularity: expected identity/major/constant");
        out.concurrent = true;
    }

    if (doc.contains("optional"))
        for (const auto& e : expect(doc["optional"], json::value_t::array, "optional")) {
            check_keys(e, {"from", "on", "versions"}, "optional");
            out.optionals.insert({known(parse_pkg(e.at("from"), "optional"), "optional"),
                                  atom(str(e.at("on"), "optional")),
                                  parse_vset(e.at("versions"), "optional")});
        }

    if (doc.contains("singular"))
        for (const auto& e : expect(doc["singular"], json::value_t::array, "singular")) {
            check_keys(e, {"from", "to"}, "singular");
            // a missing "from" means the root
            Package from = e.contains("from") ? parse_pkg(e.at("from"), "singular") : out.root;
            if (!(from == out.root)) known(from, "singular");
            out.singular.insert({from, known(parse_pkg(e.at("to"), "singular"), "singular")});
        }

    if (doc.contains("variables")) {
        const auto& v = expect(doc["variables"], json::value_t::object, "variables");
        check_keys(v, {"globals", "locals", "domains"}, "variables");
        VariableDecl decl;
        if (v.contains("globals"))
            for (const auto& e : expect(v["globals"], json::value_t::array, "variables.globals"))
                decl.globals.insert(str(e, "variables.globals"));
        if (v.contains("locals"))
            for (const auto& e : expect(v["locals"], json::value_t::array, "variables.locals"))
                decl.locals.insert(str(e, "variables.locals"));
        if (v.contains("domains"))
            for (const auto& [var, dom] :
                 expect(v["domains"], json::value_t::object, "variables.domains").items()) {
                std::vector<std::string> values;
                for (const auto& e : expect(dom, json::value_t::array, "variables.domains"))
                    values.push_back(str(e, "variables.domains"));
                decl.domains[var] = std::move(values);
            }
        out.decl = std::move(decl);
    }

    if (doc.contains("formulas"))
        for (const auto& e : expect(doc["formulas"], json::value_t::array, "formulas")) {
            check_keys(e, {"from", "psi"}, "formulas");
            Package from = known(parse_pkg(e.at("from"), "formulas"), "formulas");
            out.pdeps.push_back({from, parse_psi(e.at("psi"))});
        }

    return out;
}
}  // namespace

std::string emit_repo(const ExtendedInstance& inst) {
    json doc = json::object();

    json packages = json::array();
    for (const auto& p : inst.repo.packages) {
        if (p == inst.root) continue;
        if (!p.name->is_atom()) throw EmitError("package " + to_string(p) + " is not an atom");
        packages.push_back({{"name", std::get<Name::Atom>(p.name->repr()).label},
                            {"version", version_str(p.version)}});
    }
    doc["packages"] = std::move(packages);

    json deps = json::array(), query = json::array();
    for (const auto& d : inst.deps) {
        if (!d.on->is_atom()) throw EmitError("dependency target is not a plain name");
        json rec{{"on", std::get<Name::Atom>(d.on->repr()).label},
                 {"versions", emit_vset(d.versions)}};
        if (d.from == inst.root) {
            query.push_back(std::move(rec));
        } else {
            rec["from"] = emit_pkg(d.from);
            deps.push_back(std::move(rec));
        }
    }
    for (const auto& d : inst.vdeps) {
        if (!d.on->is_atom()) throw EmitError("dependency target is not a plain name");
        json rec{{"on", std::get<Name::Atom>(d.on->repr()).label},
                 {"formula", to_string(d.formula)}};
        if (d.from == inst.root) {
            query.push_back(std::move(rec));
        } else {
            rec["from"] = emit_pkg(d.from);
            deps.push_back(std::move(rec));
        }
    }
    if (!deps.empty()) doc["dependencies"] = std::move(deps);
    if (!query.empty()) doc["query"] = std::move(query);

    if (!inst.conflicts.empty()) {
        json arr = json::array();
        for (const auto& c : inst.conflicts)
            arr.push_back({{"from", emit_pkg(c.from)},
                           {"on", std::get<Name::Atom>(c.on->repr()).label},
                           {"versions", emit_vset(c.versions)}});
        doc["conflicts"] = std::move(arr);
    }

    if (!inst.provides.empty()) {
        json arr = json::array();
        for (const auto& p : inst.provides)
            arr.push_back({{"provider", emit_pkg(p.provider)},
                           {"name", std::get<Name::Atom>(p.name->repr()).label},
                           {"version", version_str(p.version)}});
        doc["provides"] = std::move(arr);
    }

    if (!inst.peers.empty()) {
        json arr = json::array();
        for (const auto& d : inst.peers)
            arr.push_back({{"from", emit_pkg(d.from)},
                           {"on", std::get<Name::Atom>(d.on->repr()).label},
                           {"versions", emit_vset(d.versions)}});
        doc["peers"] = std::move(arr);
    }

    if (!inst.features.support.empty() || !inst.features.fdeps.empty() ||
        !inst.features.adeps.empty()) {
        json f = json::object();
        if (!inst.features.support.empty()) {
            json arr = json::array();
            for (const auto& s : inst.features.support)
                arr.push_back({{"package", emit_pkg(s.pkg)}, {"feature", s.feature}});
            f["support"] = std::move(arr);
        }
        if (!inst.features.fdeps.empty()) {
            json arr = json::array();
            for (const auto& d : inst.features.fdeps)
                arr.push_back({{"from", emit_pkg(d.from)},
                               {"on", std::get<Name::Atom>(d.on->repr()).label},
                               {"versions", emit_vset(d.versions)},
                               {"requires", json(d.requires_)}});
            f["deps"] = std::move(arr);
        }
        if (!inst.features.adeps.empty()) {
            json arr = json::array();
            for (const auto& d : inst.features.adeps)
                arr.push_back({{"from", emit_pkg(d.from)},
                               {"feature", d.feature},
                               {"on", std::get<Name::Atom>(d.on->repr()).label},
                               {"versions", emit_vset(d.versions)},
                               {"requires", json(d.requires_)}});
            f["additional"] = std::move(arr);
        }
        doc["features"] = std::move(f);
    }

    if (inst.concurrent) {
        switch (inst.gran.kind) {
            case GranularitySpec::Kind::Identity: doc["granularity"] = "identity"; break;
            case GranularitySpec::Kind::Major: doc["granularity"] = "major"; break;
            case GranularitySpec::Kind::Constant: doc["granularity"] = "constant"; break;
            case GranularitySpec::Kind::Table:
                throw EmitError("table granularities have no interchange form");
        }
    }

    if (!inst.optionals.empty()) {
        json arr = json::array();
        for (const auto& d : inst.optionals)
            arr.push_back({{"from", emit_pkg(d.from)},
                           {"on", std::get<Name::Atom>(d.on->repr()).label},
                           {"versions", emit_vset(d.versions)}});
        doc["optional"] = std::move(arr);
    }

    if (!inst.singular.empty()) {
        json arr = json::array();
        for (const auto& d : inst.singular) {
            json rec{{"to", emit_pkg(d.to)}};
            if (!(d.from == inst.root)) rec["from"] = emit_pkg(d.from);
            arr.push_back(std::move(rec));
        }
        doc["singular"] = std::move(arr);
    }

    if (inst.decl) {
        json v = json::object();
        if (!inst.decl->globals.empty()) v["globals"] = json(inst.decl->globals);
        if (!inst.decl->locals.empty()) v["locals"] = json(inst.decl->locals);
        if (!inst.decl->domains.empty()) v["domains"] = json(inst.decl->domains);
        doc["variables"] = std::move(v);
    }

    if (!inst.pdeps.empty()) {
        json arr = json::array();
        for (const auto& d : inst.pdeps)
            arr.push_back({{"from", emit_pkg(d.from)}, {"psi", emit_psi(*d.formula)}});
        doc["formulas"] = std::move(arr);
    }

    return doc.dump(2) + "\n";
}

ExtensionStack infer_stack(const ExtendedInstance& inst) {
    ExtensionStack stack;
    if (!inst.vdeps.empty()) stack.push_back(ExtensionTag::VersionFormulae);
    if (!inst.singular.empty()) {
        if (!inst.optionals.empty()) stack.push_back(ExtensionTag::Optional);
        stack.push_back(ExtensionTag::Singular);
        return stack;
    }
    if (!inst.features.support.empty() || !inst.features.adeps.empty() ||
        !inst.features.fdeps.empty())
        stack.push_back(ExtensionTag::Features);
    if (!inst.peers.empty())
        stack.push_back(ExtensionTag::Peer);
    else if (inst.concurrent)
        stack.push_back(ExtensionTag::Concurrent);
    if (!inst.conflicts.empty()) stack.push_back(ExtensionTag::Conflicts);
    if (!inst.pdeps.empty())
        stack.push_back(inst.decl ? ExtensionTag::VariableFormulae
                                  : ExtensionTag::PackageFormulae);
    if (!inst.provides.empty()) stack.push_back(ExtensionTag::Virtual);
    if (!inst.optionals.empty()) stack.push_back(ExtensionTag::Optional);
    return stack;
}

std::string emit_resolution(const ExtendedResolution& r) {
    json doc = json::object();

    json sel = json::array();
    for (const auto& p : r.base.selected) {
        json rec{{"name", to_string(p.name)}, {"version", to_string(p.version)}};
        auto it = r.features.find(p);
        if (it != r.features.end() && !it->second.empty()) rec["features"] = json(it->second);
        sel.push_back(std::move(rec));
    }
    doc["selected"] = std::move(sel);

    if (!r.parents.empty()) {
        json arr = json::array();
        for (const auto& e : r.parents)
            arr.push_back({{"child", to_string(e.child)}, {"parent", to_string(e.parent)}});
        doc["parents"] = std::move(arr);
    }
    if (!r.providers.empty()) {
        json arr = json::array();
        for (const auto& e : r.providers)
            arr.push_back(
                {{"provider", to_string(e.provider)}, {"depender", to_string(e.depender)}});
        doc["providers"] = std::move(arr);
    }
    if (!r.sigma.globals.empty() || !r.sigma.locals.empty()) {
        json v = json::object();
        if (!r.sigma.globals.empty()) v["globals"] = json(r.sigma.globals);
        if (!r.sigma.locals.empty()) {
            json arr = json::array();
            for (const auto& [key, value] : r.sigma.locals)
                arr.push_back(
                    {{"var", key.first}, {"package", to_string(key.second)}, {"value", value}});
            v["locals"] = std::move(arr);
        }
        doc["assignment"] = std::move(v);
    }

    return doc.dump(2) + "\n";
}

}  // namespace pkgcalc
