#include "pkgcalc/sat.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pkgcalc/errors.hpp"
#include "pkgcalc/versions.hpp"

namespace pkgcalc {

CnfInstance encode(const CoreInstance& inst, bool ordered) {
    CnfInstance cnf;
    std::map<Package, std::size_t, PackageLess> index;
    for (const auto& p : inst.repo.packages) {
        index.emplace(p, cnf.vars.size());
        cnf.vars.push_back(p);
    }
    auto var_of = [&](const Package& p) {
        auto it = index.find(p);
        if (it == index.end()) throw InvalidInput("package outside repository: " + to_string(p));
        return it->second;
    };

    cnf.clauses.push_back({{var_of(inst.root), true}});

    for (const auto& d : inst.deps) {
        std::vector<SatLiteral> clause{{var_of(d.from), false}};
        std::vector<Version> targets;
        for (const auto& v : d.versions)
            if (inst.repo.contains({d.on, v})) targets.push_back(v);
        if (ordered) {
            bool all_numeric = std::all_of(targets.begin(), targets.end(),
                                           [](const Version& v) { return v.is_numeric(); });
            if (all_numeric) {
                std::sort(targets.begin(), targets.end(), [](const Version& a, const Version& b) {
                    return compare_versions(a, b) == Ordering::GT;  // freshest first
                });
            }
        }
        for (const auto& v : targets) clause.push_back({var_of({d.on, v}), true});
        cnf.clauses.push_back(std::move(clause));
    }

    // Pairwise at-most-one per name.
    std::map<NameRef, std::vector<std::size_t>, NameLess> by_name;
    for (const auto& p : inst.repo.packages) by_name[p.name].push_back(var_of(p));
    for (const auto& [n, vars] : by_name)
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (std::size_t j = i + 1; j < vars.size(); ++j)
                cnf.clauses.push_back({{vars[i], false}, {vars[j], false}});

    return cnf;
}

namespace {

enum : signed char { kFalse = 0, kTrue = 1, kUnset = -1 };

bool literal_true(const SatLiteral& l, const std::vector<signed char>& assign) {
    return assign[l.var] == (l.positive ? kTrue : kFalse);
}
bool literal_false(const SatLiteral& l, const std::vector<signed char>& assign) {
    return assign[l.var] == (l.positive ? kFalse : kTrue);
}

}  // namespace

std::optional<SatAssignment> solve(const CnfInstance& cnf, std::size_t max_conflicts) {
    const std::size_t n = cnf.vars.size();
    for (const auto& c : cnf.clauses)
        for (const auto& l : c)
            if (l.var >= n) throw InvalidInput("undeclared SAT variable");

    std::vector<signed char> assign(n, kUnset);
    struct TrailEntry {
        std::size_t var;
        bool decision;  // second branch not yet tried
    };
    std::vector<TrailEntry> trail;
    std::size_t conflicts = 0;

    auto set_var = [&](std::size_t v, bool value, bool decision) {
        assign[v] = value ? kTrue : kFalse;
        trail.push_back({v, decision});
    };

    // Returns false on conflict.
    auto propagate = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : cnf.clauses) {
                const SatLiteral* unit = nullptr;
                bool satisfied = false;
                std::size_t unassigned = 0;
                for (const auto& l : c) {
                    if (literal_true(l, assign)) { satisfied = true; break; }
                    if (!literal_false(l, assign)) { ++unassigned; unit = &l; }
                }
                if (satisfied) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    set_var(unit->var, unit->positive, false);
                    changed = true;
                }
            }
        }
        return true;
    };

    auto backtrack = [&]() {
        if (max_conflicts != kNoLimit && ++conflicts > max_conflicts)
            throw LimitExceeded("SAT conflict budget exhausted");
        while (!trail.empty()) {
            TrailEntry e = trail.back();
            trail.pop_back();
            bool was = assign[e.var] == kTrue;
            assign[e.var] = kUnset;
            if (e.decision) {
                set_var(e.var, !was, false);  // flip; both branches now explored
                return true;
            }
        }
        return false;
    };

    while (true) {
        if (!propagate()) {
            if (!backtrack()) return std::nullopt;
            continue;
        }
        // Decision: first unassigned literal in the first unsatisfied clause.
        const SatLiteral* pick = nullptr;
        for (const auto& c : cnf.clauses) {
            bool satisfied = false;
            const SatLiteral* candidate = nullptr;
            for (const auto& l : c) {
                if (literal_true(l, assign)) { satisfied = true; break; }
                if (!candidate && !literal_false(l, assign)) candidate = &l;
            }
            if (!satisfied && candidate) { pick = candidate; break; }
        }
        if (!pick) break;  // every clause satisfied
        set_var(pick->var, pick->positive, true);
    }

    SatAssignment out(n, false);
    for (std::size_t i = 0; i < n; ++i) out[i] = assign[i] == kTrue;
    return out;
}

Resolution decode(const CnfInstance& cnf, const SatAssignment& a) {
    if (a.size() != cnf.vars.size()) throw InvalidInput("assignment arity mismatch");
    for (const auto& c : cnf.clauses) {
        bool sat = false;
        for (const auto& l : c)
            if (a[l.var] == l.positive) { sat = true; break; }
        if (!sat) throw InvalidInput("assignment does not satisfy the encoding");
    }
    Resolution s;
    for (std::size_t i = 0; i < cnf.vars.size(); ++i)
        if (a[i]) s.selected.insert(cnf.vars[i]);
    return s;
}

std::optional<Resolution> sat_resolve(const CoreInstance& inst, bool prefer_fresh) {
    CnfInstance cnf = encode(inst, prefer_fresh);
    auto a = solve(cnf);
    if (!a) return std::nullopt;
    return decode(cnf, *a);
}

CoreInstance gen_from_3cnf(const ThreeCnf& cnf) {
    Repository repo;
    DependencySet deps;
    Package root = root_package();
    repo.packages.insert(root);

    std::vector<NameRef> var_names;
    var_names.reserve(cnf.num_vars);
    for (std::size_t i = 1; i <= cnf.num_vars; ++i) {
        NameRef x = atom("x" + std::to_string(i));
        repo.packages.insert({x, Version::marker1()});
        repo.packages.insert({x, Version::marker0()});
        var_names.push_back(x);
    }

    for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
        NameRef cj = atom("c" + std::to_string(j + 1));
        VersionSet slots;
        for (std::size_t k = 0; k < 3; ++k) {
            long lit = cnf.clauses[j][k];
            if (lit == 0) throw InvalidInput("clause must have exactly three literals");
            std::size_t vi = static_cast<std::size_t>(lit < 0 ? -lit : lit);
            if (vi == 0 || vi > cnf.num_vars) throw InvalidInput("literal out of range");
            Version slot = Version::numeric({static_cast<std::uint64_t>(k + 1)});
            Package cp{cj, slot};
            repo.packages.insert(cp);
            slots.insert(slot);
            deps.insert({cp, var_names[vi - 1],
                         {lit > 0 ? Version::marker1() : Version::marker0()}});
        }
        deps.insert({root, cj, slots});
    }
    return {std::move(repo), std::move(deps), root};
}

ThreeCnf parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    ThreeCnf cnf;
    bool header = false;
    std::size_t declared_clauses = 0;
    std::vector<long> current;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == 'c') continue;
        std::istringstream ls(line);
        while (ls >> tok) {
            if (tok == "p") {
                std::string kind;
                if (!(ls >> kind >> cnf.num_vars >> declared_clauses) || kind != "cnf")
                    throw ParseError("bad DIMACS header");
                header = true;
                continue;
            }
            long lit;
            try {
                lit = std::stol(tok);
            } catch (const std::exception&) {
                throw ParseError("bad DIMACS token \"" + tok + "\"");
            }
            if (!header) throw ParseError("DIMACS literals before header");
            if (lit == 0) {
                if (current.size() != 3)
                    throw InvalidInput("DIMACS clause must have exactly three literals");
                cnf.clauses.push_back({current[0], current[1], current[2]});
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
    }
    if (!header) throw ParseError("missing DIMACS header");
    if (!current.empty()) throw ParseError("unterminated DIMACS clause");
    if (declared_clauses != cnf.clauses.size())
        throw ParseError("DIMACS clause count mismatch");
    return cnf;
}

}  // namespace pkgcalc
