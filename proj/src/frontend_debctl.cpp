#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pkgcalc/errors.hpp"
#include "pkgcalc/frontends.hpp"

// The Debian-control subset. Paragraphs are blank-line separated; recognised
// fields are Package, Version, Depends, Conflicts and Provides, plus a
// root-query paragraph holding only a Query field. Relation items carry at
// most one operator constraint, evaluated against the repository once the
// whole document is read.

namespace pkgcalc {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
    return !s.empty() && s.find_first_of(" \t,()|:") == std::string::npos;
}

struct RawItem {
    std::string name;
    bool constrained = false;
    CmpOp op = CmpOp::Eq;
    Version bound;
    int line = 0;
};

// "B", "B (= 1)", "D (>= 1)"; << and >> are the strict comparisons.
RawItem parse_item(const std::string& text, int line) {
    RawItem item;
    item.line = line;
    auto s = trim(text);
    auto paren = s.find('(');
    if (paren == std::string::npos) {
        item.name = trim(s);
        if (!valid_name(item.name)) throw ParseError("bad package name \"" + s + "\"", line);
        return item;
    }
    item.name = trim(s.substr(0, paren));
    if (!valid_name(item.name)) throw ParseError("bad package name \"" + item.name + "\"", line);
    if (s.back() != ')') throw ParseError("unterminated version constraint", line);
    auto inner = trim(s.substr(paren + 1, s.size() - paren - 2));
    static const std::vector<std::pair<std::string, CmpOp>> ops = {
        {">=", CmpOp::Ge}, {"<=", CmpOp::Le}, {"<<", CmpOp::Lt},
        {">>", CmpOp::Gt}, {"=", CmpOp::Eq},
    };
    for (const auto& [tok, op] : ops) {
        if (inner.rfind(tok, 0) == 0) {
            item.constrained = true;
            item.op = op;
            item.bound = parse_numeric_version(trim(inner.substr(tok.size())));
            return item;
        }
    }
    throw ParseError("bad version operator in \"" + inner + "\"", line);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

// A Depends group: |-separated alternatives.
using RawGroup = std::vector<RawItem>;

struct RawParagraph {
    std::map<std::string, std::pair<std::string, int>> fields;  // name -> (value, line)
    int line = 0;
};

VersionSet eval_item(const RawItem& item, const Repository& repo) {
    VersionSet all = repo.versions_of(atom(item.name));
    if (!item.constrained) return all;
    VersionSet out;
    for (const auto& v : all)
        if (cmp_holds(compare_versions(v, item.bound), item.op)) out.insert(v);
    return out;
}

std::string version_str(const Version& v) {
    if (!v.is_numeric()) throw EmitError("version " + to_string(v) + " is not expressible");
    return to_string(v);
}

std::string atom_label(const NameRef& n) {
    if (!n->is_atom()) throw EmitError("name " + to_string(n) + " is not a plain package name");
    auto label = std::get<Name::Atom>(n->repr()).label;
    if (!valid_name(label)) throw EmitError("name \"" + label + "\" is not expressible");
    return label;
}

// Pins for a version set: the bare name when the set covers every existing
// version, otherwise one (= v) alternative per member.
std::vector<std::string> pins(const std::string& name, const VersionSet& vs,
                              const Repository& repo) {
    VersionSet all = repo.versions_of(atom(name));
    // a bare item on a versionless (purely virtual) name reads back as empty
    if (vs == all) return {name};
    if (vs.empty()) throw EmitError("empty version set on " + name + " is not expressible");
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(name + " (= " + version_str(v) + ")");
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Alternatives of one |-group; only disjunctions of plain atoms fit.
void formula_alternatives(const PackageFormula& psi, const Repository& repo,
                          std::vector<std::string>& out) {
    if (const auto* o = std::get_if<PackageFormula::Or>(&psi.repr())) {
        formula_alternatives(*o->l, repo, out);
        formula_alternatives(*o->r, repo, out);
        return;
    }
    if (const auto* d = std::get_if<PackageFormula::Dep>(&psi.repr())) {
        for (auto& p : pins(atom_label(d->on), d->versions, repo)) out.push_back(std::move(p));
        return;
    }
    throw EmitError("formula is not a disjunction of package alternatives");
}

void formula_groups(const FormulaRef& psi, const Repository& repo,
                    std::vector<std::string>& groups) {
    if (const auto* a = std::get_if<PackageFormula::And>(&psi->repr())) {
        formula_groups(a->l, repo, groups);
        formula_groups(a->r, repo, groups);
        return;
    }
    std::vector<std::string> alts;
    formula_alternatives(*psi, repo, alts);
    groups.push_back(join(alts, " | "));
}

}  // namespace

ExtendedInstance parse_debctl(const std::string& text) {
    // split into paragraphs
    std::vector<RawParagraph> paragraphs;
    RawParagraph cur;
    int lineno = 0;
    std::stringstream ss(text);
    std::string line;
    auto flush = [&] {
        if (!cur.fields.empty()) paragraphs.push_back(std::move(cur));
        cur = {};
    };
    while (std::getline(ss, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty()) {
            flush();
            continue;
        }
        auto colon = t.find(':');
        if (colon == std::string::npos) throw ParseError("expected \"Field: value\"", lineno);
        auto field = trim(t.substr(0, colon));
        auto value = trim(t.substr(colon + 1));
        if (cur.fields.empty()) cur.line = lineno;
        if (!cur.fields.emplace(field, std::make_pair(value, lineno)).second)
            throw ParseError("duplicate field " + field, lineno);
    }
    flush();

    ExtendedInstance out;
    out.repo.packages.insert(out.root);

    struct PkgRaw {
        Package pkg;
        std::vector<RawGroup> depends;
        std::vector<RawItem> conflicts;
        std::vector<RawItem> provides;
    };
    std::vector<PkgRaw> pkgs;
    std::vector<RawGroup> query;
    bool saw_query = false;

    auto parse_groups = [](const std::string& value, int line) {
        std::vector<RawGroup> groups;
        for (const auto& part : split(value, ',')) {
            RawGroup group;
            for (const auto& alt : split(part, '|')) group.push_back(parse_item(alt, line));
            groups.push_back(std::move(group));
        }
        return groups;
    };

    for (const auto& para : paragraphs) {
        if (para.fields.count("Query")) {
            for (const auto& [field, fv] : para.fields)
                if (field != "Query")
                    throw ParseError("unexpected field " + field + " in query paragraph",
                                     fv.second);
            if (saw_query) throw ParseError("duplicate query paragraph", para.line);
            saw_query = true;
            auto [value, vline] = para.fields.at("Query");
            query = parse_groups(value, vline);
            continue;
        }
        for (const auto& [field, fv] : para.fields)
            if (field != "Package" && field != "Version" && field != "Depends" &&
                field != "Conflicts" && field != "Provides")
                throw ParseError("unknown field " + field, fv.second);
        if (!para.fields.count("Package"))
            throw ParseError("paragraph without a Package field", para.line);
        if (!para.fields.count("Version"))
            throw ParseError("paragraph without a Version field", para.line);

        PkgRaw raw;
        auto [name, nline] = para.fields.at("Package");
        if (!valid_name(name)) throw ParseError("bad package name \"" + name + "\"", nline);
        auto [ver, vline] = para.fields.at("Version");
        raw.pkg = {atom(name), parse_numeric_version(ver)};
        if (!out.repo.packages.insert(raw.pkg).second)
            throw ParseError("duplicate package " + to_string(raw.pkg), nline);

        if (para.fields.count("Depends")) {
            auto [value, dline] = para.fields.at("Depends");
            raw.depends = parse_groups(value, dline);
        }
        if (para.fields.count("Conflicts")) {
            auto [value, cline] = para.fields.at("Conflicts");
            for (const auto& part : split(value, ','))
                raw.conflicts.push_back(parse_item(part, cline));
        }
        if (para.fields.count("Provides")) {
            auto [value, pline] = para.fields.at("Provides");
            for (const auto& part : split(value, ','))
                raw.provides.push_back(parse_item(part, pline));
        }
        pkgs.push_back(std::move(raw));
    }

    // second phase: evaluate constraints against the now-complete repository
    auto add_groups = [&](const Package& from, const std::vector<RawGroup>& groups) {
        // several plain constraints on one name conjoin: intersect their sets
        std::map<std::string, VersionSet> singles;
        for (const auto& group : groups) {
            if (group.size() == 1) {
                const auto& item = group[0];
                VersionSet vs = eval_item(item, out.repo);
                auto [it, fresh] = singles.emplace(item.name, vs);
                if (!fresh) {
                    VersionSet both;
                    for (const auto& v : it->second)
                        if (vs.count(v)) both.insert(v);
                    it->second = std::move(both);
                }
                continue;
            }
            FormulaRef psi;
            for (const auto& item : group) {
                auto leaf = PackageFormula::dep(atom(item.name), eval_item(item, out.repo));
                psi = psi ? PackageFormula::disj(psi, leaf) : leaf;
            }
            out.pdeps.push_back({from, psi});
        }
        for (const auto& [name, vs] : singles) out.deps.insert({from, atom(name), vs});
    };

    for (const auto& raw : pkgs) {
        add_groups(raw.pkg, raw.depends);
        for (const auto& item : raw.conflicts)
            out.conflicts.insert({raw.pkg, atom(item.name), eval_item(item, out.repo)});
        for (const auto& item : raw.provides) {
            if (item.constrained && item.op != CmpOp::Eq)
                throw ParseError("Provides accepts only exact versions", item.line);
            out.provides.insert({raw.pkg, atom(item.name),
                                 item.constrained ? item.bound : Version::wildcard()});
        }
    }
    add_groups(out.root, query);
    return out;
}

std::string emit_debctl(const ExtendedInstance& inst) {
    if (!inst.vdeps.empty() || !inst.peers.empty() || inst.concurrent ||
        !inst.features.support.empty() || !inst.features.fdeps.empty() ||
        !inst.features.adeps.empty() || inst.decl || !inst.optionals.empty() ||
        !inst.singular.empty())
        throw EmitError("instance carries relations with no control-file form");

    std::ostringstream os;
    std::vector<std::string> query_groups;
    bool first = true;

    for (const auto& p : inst.repo.packages) {
        if (p == inst.root) continue;
        std::vector<std::string> groups;
        for (const auto& d : inst.deps) {
            if (!(d.from == p)) continue;
            groups.push_back(join(pins(atom_label(d.on), d.versions, inst.repo), " | "));
        }
        for (const auto& d : inst.pdeps)
            if (d.from == p) formula_groups(d.formula, inst.repo, groups);

        std::vector<std::string> conflict_items;
        for (const auto& c : inst.conflicts)
            if (c.from == p)
                for (auto& pin : pins(atom_label(c.on), c.versions, inst.repo))
                    conflict_items.push_back(std::move(pin));

        std::vector<std::string> provide_items;
        for (const auto& pr : inst.provides)
            if (pr.provider == p)
                provide_items.push_back(pr.version.is_wildcard()
                                            ? atom_label(pr.name)
                                            : atom_label(pr.name) + " (= " +
                                                  version_str(pr.version) + ")");

        if (!first) os << "\n";
        first = false;
        os << "Package: " << atom_label(p.name) << "\n";
        os << "Version: " << version_str(p.version) << "\n";
        if (!groups.empty()) os << "Depends: " << join(groups, ", ") << "\n";
        if (!conflict_items.empty()) os << "Conflicts: " << join(conflict_items, ", ") << "\n";
        if (!provide_items.empty()) os << "Provides: " << join(provide_items, ", ") << "\n";
    }

    for (const auto& d : inst.deps)
        if (d.from == inst.root)
            query_groups.push_back(join(pins(atom_label(d.on), d.versions, inst.repo), " | "));
    for (const auto& d : inst.pdeps)
        if (d.from == inst.root) formula_groups(d.formula, inst.repo, query_groups);
    if (!query_groups.empty()) {
        if (!first) os << "\n";
        os << "Query: " << join(query_groups, ", ") << "\n";
    }
    return os.str();
}

}  // namespace pkgcalc
