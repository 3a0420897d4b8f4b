#include "pkgcalc/ext_formulae.hpp"

#include <algorithm>

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

std::shared_ptr<const PackageFormula> PackageFormula::dep(NameRef on, VersionSet vs) {
    return std::make_shared<PackageFormula>(Dep{std::move(on), std::move(vs)});
}
std::shared_ptr<const PackageFormula> PackageFormula::conj(FormulaRef l, FormulaRef r) {
    return std::make_shared<PackageFormula>(And{std::move(l), std::move(r)});
}
std::shared_ptr<const PackageFormula> PackageFormula::disj(FormulaRef l, FormulaRef r) {
    return std::make_shared<PackageFormula>(Or{std::move(l), std::move(r)});
}
std::shared_ptr<const PackageFormula> PackageFormula::neg(FormulaRef inner) {
    return std::make_shared<PackageFormula>(Not{std::move(inner)});
}
std::shared_ptr<const PackageFormula> PackageFormula::gcmp(std::string var, CmpOp op,
                                                           std::string value) {
    return std::make_shared<PackageFormula>(GCmp{std::move(var), op, std::move(value)});
}
std::shared_ptr<const PackageFormula> PackageFormula::lcmp(std::string var, CmpOp op,
                                                           std::string value) {
    return std::make_shared<PackageFormula>(LCmp{std::move(var), op, std::move(value)});
}

std::string to_string(const PackageFormula& psi) {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PackageFormula::Dep>) {
                std::string out = to_string(f.on) + "@{";
                bool first = true;
                for (const auto& v : f.versions) {
                    if (!first) out += ",";
                    out += to_string(v);
                    first = false;
                }
                return out + "}";
            } else if constexpr (std::is_same_v<T, PackageFormula::And>) {
                return "(" + to_string(*f.l) + " & " + to_string(*f.r) + ")";
            } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                return "(" + to_string(*f.l) + " | " + to_string(*f.r) + ")";
            } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                return "!" + to_string(*f.inner);
            } else if constexpr (std::is_same_v<T, PackageFormula::GCmp>) {
                return "$" + f.var + " " + to_string(f.op) + " " + f.value;
            } else {
                return "%" + f.var + " " + to_string(f.op) + " " + f.value;
            }
        },
        psi.repr());
}

bool operator==(const VarAssignment& a, const VarAssignment& b) {
    if (a.globals != b.globals) return false;
    if (a.locals.size() != b.locals.size()) return false;
    auto it = b.locals.begin();
    for (const auto& [k, v] : a.locals) {
        if (k.first != it->first.first || !(k.second == it->first.second) || v != it->second)
            return false;
        ++it;
    }
    return true;
}

namespace {

// Position of a value in its domain sequence; the sequence order is the
// value order.
std::size_t domain_pos(const VariableDecl& decl, const std::string& var,
                       const std::string& value) {
    auto it = decl.domains.find(var);
    if (it == decl.domains.end()) throw InvalidInput("undeclared variable " + var);
    auto jt = std::find(it->second.begin(), it->second.end(), value);
    if (jt == it->second.end())
        throw InvalidInput("value " + value + " outside domain of " + var);
    return static_cast<std::size_t>(jt - it->second.begin());
}

bool pos_cmp(std::size_t a, CmpOp op, std::size_t b) {
    switch (op) {
        case CmpOp::Ge: return a >= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
    }
    return false;
}

enum class Tri { False, True, Undef };

Tri tri_not(Tri t) {
    if (t == Tri::Undef) return Tri::Undef;
    return t == Tri::True ? Tri::False : Tri::True;
}

struct Eval {
    const PackageSet& s;
    const VarAssignment* sigma;
    const VariableDecl* decl;
    const Package& owner;

    Tri cmp(const std::string& var, CmpOp op, const std::string& value, bool local) const {
        if (!decl) throw InvalidInput("variable comparison without declarations");
        const std::string* assigned = nullptr;
        if (sigma) {
            if (local) {
                auto it = sigma->locals.find({var, owner});
                if (it != sigma->locals.end()) assigned = &it->second;
            } else {
                auto it = sigma->globals.find(var);
                if (it != sigma->globals.end()) assigned = &it->second;
            }
        }
        if (!assigned) return Tri::Undef;
        return pos_cmp(domain_pos(*decl, var, *assigned), op, domain_pos(*decl, var, value))
                   ? Tri::True
                   : Tri::False;
    }

    // Three-valued over partial assignments: a comparison on an unassigned
    // variable is undefined, and undefinedness propagates except where the
    // other operand decides.
    Tri eval(const PackageFormula& psi, bool neg) const {
        return std::visit(
            [&](const auto& f) -> Tri {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PackageFormula::Dep>) {
                    for (const auto& v : f.versions)
                        if (s.count({f.on, v})) return neg ? Tri::False : Tri::True;
                    return neg ? Tri::True : Tri::False;
                } else if constexpr (std::is_same_v<T, PackageFormula::And>) {
                    Tri l = eval(*f.l, neg), r = eval(*f.r, neg);
                    Tri zero = neg ? Tri::True : Tri::False;  // annihilator
                    Tri one = tri_not(zero);
                    if (l == zero || r == zero) return zero;
                    if (l == one && r == one) return one;
                    return Tri::Undef;
                } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                    Tri l = eval(*f.l, neg), r = eval(*f.r, neg);
                    Tri one = neg ? Tri::False : Tri::True;
                    Tri zero = tri_not(one);
                    if (l == one || r == one) return one;
                    if (l == zero && r == zero) return zero;
                    return Tri::Undef;
                } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                    return eval(*f.inner, !neg);
                } else if constexpr (std::is_same_v<T, PackageFormula::GCmp>) {
                    return cmp(f.var, neg ? complement(f.op) : f.op, f.value, false);
                } else {
                    return cmp(f.var, neg ? complement(f.op) : f.op, f.value, true);
                }
            },
            psi.repr());
    }
};

VersionSet marker_pair() { return {Version::marker0(), Version::marker1()}; }

struct Encoder {
    const Repository& repo;
    const std::optional<VariableDecl>& decl;
    CoreInstance& out;

    VersionSet passing_values(const std::string& var, CmpOp op, const std::string& value) const {
        if (!decl) throw InvalidInput("variable comparison without declarations");
        auto it = decl->domains.find(var);
        if (it == decl->domains.end()) throw InvalidInput("undeclared variable " + var);
        std::size_t bound = domain_pos(*decl, var, value);
        VersionSet vs;
        for (std::size_t i = 0; i < it->second.size(); ++i)
            if (pos_cmp(i, op, bound)) vs.insert(Version::var_value(it->second[i]));
        return vs;
    }

    void add_var_packages(const NameRef& name, const std::string& var) const {
        for (const auto& c : decl->domains.at(var))
            out.repo.packages.insert({name, Version::var_value(c)});
    }

    // `p` is the current depender (a real package or a disjunction node);
    // `owner` is the original declaring package, which scopes local
    // variables. Formulae arrive negation-normalized.
    void encode(const Package& p, const Package& owner, const PackageFormula& psi) {
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PackageFormula::Dep>) {
                    out.deps.insert({p, f.on, f.versions});
                } else if constexpr (std::is_same_v<T, PackageFormula::And>) {
                    encode(p, owner, *f.l);
                    encode(p, owner, *f.r);
                } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                    NameRef node = disjunction_node(to_string(p) + " " + to_string(psi));
                    out.repo.packages.insert({node, Version::marker0()});
                    out.repo.packages.insert({node, Version::marker1()});
                    out.deps.insert({p, node, marker_pair()});
                    encode({node, Version::marker0()}, owner, *f.l);
                    encode({node, Version::marker1()}, owner, *f.r);
                } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                    const auto& atom = std::get<PackageFormula::Dep>(f.inner->repr());
                    NameRef guard = conflict_guard(atom.on, atom.versions);
                    out.repo.packages.insert({guard, Version::marker0()});
                    out.repo.packages.insert({guard, Version::marker1()});
                    out.deps.insert({p, guard, {Version::marker1()}});
                    for (const auto& u : atom.versions)
                        if (repo.contains({atom.on, u}))
                            out.deps.insert({{atom.on, u}, guard, {Version::marker0()}});
                } else if constexpr (std::is_same_v<T, PackageFormula::GCmp>) {
                    NameRef name = global_var(f.var);
                    add_var_packages(name, f.var);
                    out.deps.insert({p, name, passing_values(f.var, f.op, f.value)});
                } else {
                    NameRef name = local_var(owner, f.var);
                    add_var_packages(name, f.var);
                    out.deps.insert({p, name, passing_values(f.var, f.op, f.value)});
                }
            },
            psi.repr());
    }
};

// Pushes negation down to atoms: De Morgan, double negation, complemented
// variable comparisons.
FormulaRef nnf(const FormulaRef& psi, bool neg) {
    return std::visit(
        [&](const auto& f) -> FormulaRef {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PackageFormula::Dep>) {
                FormulaRef atom = PackageFormula::dep(f.on, f.versions);
                return neg ? PackageFormula::neg(atom) : atom;
            } else if constexpr (std::is_same_v<T, PackageFormula::And>) {
                auto l = nnf(f.l, neg), r = nnf(f.r, neg);
                return neg ? PackageFormula::disj(l, r) : PackageFormula::conj(l, r);
            } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                auto l = nnf(f.l, neg), r = nnf(f.r, neg);
                return neg ? PackageFormula::conj(l, r) : PackageFormula::disj(l, r);
            } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                return nnf(f.inner, !neg);
            } else if constexpr (std::is_same_v<T, PackageFormula::GCmp>) {
                return PackageFormula::gcmp(f.var, neg ? complement(f.op) : f.op, f.value);
            } else {
                return PackageFormula::lcmp(f.var, neg ? complement(f.op) : f.op, f.value);
            }
        },
        psi->repr());
}

struct WitnessCollector {
    const PackageSet& s;
    const VarAssignment* sigma;
    const VariableDecl* decl;
    const Package& owner;
    PackageSet out;

    void collect(const Package& p, const PackageFormula& psi) {
        Eval ev{s, sigma, decl, owner};
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PackageFormula::And>) {
                    collect(p, *f.l);
                    collect(p, *f.r);
                } else if constexpr (std::is_same_v<T, PackageFormula::Or>) {
                    NameRef node = disjunction_node(to_string(p) + " " + to_string(psi));
                    if (ev.eval(*f.l, false) == Tri::True) {
                        out.insert({node, Version::marker0()});
                        collect({node, Version::marker0()}, *f.l);
                    } else {
                        out.insert({node, Version::marker1()});
                        collect({node, Version::marker1()}, *f.r);
                    }
                } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                    const auto& atom = std::get<PackageFormula::Dep>(f.inner->repr());
                    out.insert({conflict_guard(atom.on, atom.versions), Version::marker1()});
                }
                // Dep and variable comparisons witness nothing.
            },
            psi.repr());
    }
};

// Negated atoms of a negation-normalized formula.
void collect_neg_atoms(const FormulaRef& psi, std::vector<PackageFormula::Dep>& out) {
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PackageFormula::And> ||
                          std::is_same_v<T, PackageFormula::Or>) {
                collect_neg_atoms(f.l, out);
                collect_neg_atoms(f.r, out);
            } else if constexpr (std::is_same_v<T, PackageFormula::Not>) {
                out.push_back(std::get<PackageFormula::Dep>(f.inner->repr()));
            }
        },
        psi->repr());
}

}  // namespace

bool satisfies(const PackageSet& s, const VarAssignment* sigma, const VariableDecl* decl,
               const Package& from, const PackageFormula& psi) {
    Eval ev{s, sigma, decl, from};
    return ev.eval(psi, false) == Tri::True;
}

ValidityReport validate_formula_resolution(const FormulaInstance& inst, const PackageSet& s,
                                           const VarAssignment* sigma) {
    ValidityReport report;
    for (const auto& p : s)
        if (!inst.repo.contains(p) && !(p == inst.root))
            throw InvalidInput("selected package not in repository: " + to_string(p));
    if (!s.count(inst.root))
        report.add(Violation::Kind::RootInclusion, "root not selected");
    const VariableDecl* decl = inst.decl ? &*inst.decl : nullptr;
    for (const auto& d : inst.deps) {
        if (!s.count(d.from)) continue;
        FormulaRef norm = nnf(d.formula, false);
        Eval ev{s, sigma, decl, d.from};
        if (ev.eval(*norm, false) != Tri::True)
            report.add(Violation::Kind::FormulaClosure,
                       to_string(d.from) + " formula unsatisfied: " + to_string(*d.formula));
    }
    for (auto a = s.begin(); a != s.end(); ++a) {
        auto b = std::next(a);
        if (b != s.end() && same_name(a->name, b->name))
            report.add(Violation::Kind::VersionUniqueness,
                       "multiple versions of " + to_string(a->name));
    }
    return report;
}

CoreInstance lower_formulae(const FormulaInstance& inst) {
    CoreInstance out;
    out.repo = inst.repo;
    out.root = inst.root;
    Encoder enc{inst.repo, inst.decl, out};
    for (const auto& d : inst.deps) enc.encode(d.from, d.from, *nnf(d.formula, false));
    return out;
}

PackageSet witness_set(const PackageSet& s, const VarAssignment* sigma, const VariableDecl* decl,
                       const Package& from, const FormulaRef& psi) {
    FormulaRef norm = nnf(psi, false);
    Eval ev{s, sigma, decl, from};
    if (ev.eval(*norm, false) != Tri::True)
        throw InvalidInput("witness set of unsatisfied formula");
    WitnessCollector wc{s, sigma, decl, from, {}};
    wc.collect(from, *norm);
    return std::move(wc.out);
}

FormulaResolution lift_formula_resolution(const Resolution& lowered, const FormulaInstance& inst) {
    FormulaResolution out;
    for (const auto& p : lowered.selected) {
        if (inst.repo.contains(p) || p == inst.root) {
            out.selected.insert(p);
            continue;
        }
        if (const auto* gv = std::get_if<Name::GlobalVar>(&p.name->repr())) {
            out.sigma.globals[gv->var] = std::get<Version::VarValue>(p.version.repr()).value;
        } else if (const auto* lv = std::get_if<Name::LocalVar>(&p.name->repr())) {
            out.sigma.locals[{lv->var, *lv->pkg}] =
                std::get<Version::VarValue>(p.version.repr()).value;
        }
    }
    return out;
}

Resolution embed_formula_resolution(const PackageSet& s, const VarAssignment& sigma,
                                    const FormulaInstance& inst) {
    Resolution out;
    out.selected = s;
    const VariableDecl* decl = inst.decl ? &*inst.decl : nullptr;
    for (const auto& d : inst.deps) {
        if (!s.count(d.from)) continue;
        for (const auto& w : witness_set(s, &sigma, decl, d.from, d.formula))
            out.selected.insert(w);
    }
    // guard dependencies of negation targets exist whether or not the
    // declarer is selected
    std::vector<PackageFormula::Dep> atoms;
    for (const auto& d : inst.deps) collect_neg_atoms(nnf(d.formula, false), atoms);
    for (const auto& atom : atoms)
        for (const auto& u : atom.versions)
            if (s.count({atom.on, u}))
                out.selected.insert({conflict_guard(atom.on, atom.versions), Version::marker0()});
    for (const auto& [var, value] : sigma.globals)
        out.selected.insert({global_var(var), Version::var_value(value)});
    for (const auto& [key, value] : sigma.locals)
        out.selected.insert({local_var(key.second, key.first), Version::var_value(value)});
    return out;
}

}  // namespace pkgcalc
