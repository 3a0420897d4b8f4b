#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pkgcalc/core.hpp"
#include "pkgcalc/versions.hpp"  // CmpOp

// Package formulae: boolean combinations of package atoms as dependency
// targets, with negation, plus variable comparisons against finite ordered
// domains. Lowered Tseitin-style: one two-version node per disjunction, the
// conflict-guard scheme per negated atom, variable packages per domain
// value.

namespace pkgcalc {

class PackageFormula {
public:
    struct Dep { NameRef on; VersionSet versions; };
    struct And { std::shared_ptr<const PackageFormula> l, r; };
    struct Or { std::shared_ptr<const PackageFormula> l, r; };
    struct Not { std::shared_ptr<const PackageFormula> inner; };
    struct GCmp { std::string var; CmpOp op; std::string value; };
    struct LCmp { std::string var; CmpOp op; std::string value; };

    using Repr = std::variant<Dep, And, Or, Not, GCmp, LCmp>;

    explicit PackageFormula(Repr r) : repr_(std::move(r)) {}
    const Repr& repr() const { return repr_; }

    static std::shared_ptr<const PackageFormula> dep(NameRef on, VersionSet vs);
    static std::shared_ptr<const PackageFormula> conj(std::shared_ptr<const PackageFormula> l,
                                                      std::shared_ptr<const PackageFormula> r);
    static std::shared_ptr<const PackageFormula> disj(std::shared_ptr<const PackageFormula> l,
                                                      std::shared_ptr<const PackageFormula> r);
    static std::shared_ptr<const PackageFormula> neg(std::shared_ptr<const PackageFormula> inner);
    static std::shared_ptr<const PackageFormula> gcmp(std::string var, CmpOp op, std::string value);
    static std::shared_ptr<const PackageFormula> lcmp(std::string var, CmpOp op, std::string value);

private:
    Repr repr_;
};

using FormulaRef = std::shared_ptr<const PackageFormula>;

// Canonical text rendering; used for structural identity of disjunction
// nodes and by the frontends.
std::string to_string(const PackageFormula& psi);

struct VariableDecl {
    std::set<std::string> globals;
    std::set<std::string> locals;
    // Domains are ordered sequences; position order is the value order.
    std::map<std::string, std::vector<std::string>> domains;
};

struct LocalKeyLess {
    bool operator()(const std::pair<std::string, Package>& a,
                    const std::pair<std::string, Package>& b) const {
        if (int c = a.first.compare(b.first)) return c < 0;
        return compare(a.second, b.second) < 0;
    }
};

struct VarAssignment {
    std::map<std::string, std::string> globals;
    // keyed (var, package)
    std::map<std::pair<std::string, Package>, std::string, LocalKeyLess> locals;
};

bool operator==(const VarAssignment& a, const VarAssignment& b);

struct PackageFormulaDep {
    Package from;
    FormulaRef formula;
};
using PackageFormulaDeps = std::vector<PackageFormulaDep>;

struct FormulaInstance {
    Repository repo;
    PackageFormulaDeps deps;
    Package root;
    std::optional<VariableDecl> decl;
};

// The satisfaction rules, including variable comparisons under domain
// position order. sigma/decl may be null when no variables occur.
bool satisfies(const PackageSet& s, const VarAssignment* sigma, const VariableDecl* decl,
               const Package& from, const PackageFormula& psi);

ValidityReport validate_formula_resolution(const FormulaInstance& inst, const PackageSet& s,
                                           const VarAssignment* sigma);

CoreInstance lower_formulae(const FormulaInstance& inst);

// The completeness witness set: synthetic packages recording which branch of
// each disjunction and which negation guards justify satisfaction. Throws
// InvalidInput when psi is not satisfied.
PackageSet witness_set(const PackageSet& s, const VarAssignment* sigma, const VariableDecl* decl,
                       const Package& from, const FormulaRef& psi);

struct FormulaResolution {
    PackageSet selected;
    VarAssignment sigma;
};

FormulaResolution lift_formula_resolution(const Resolution& lowered, const FormulaInstance& inst);

Resolution embed_formula_resolution(const PackageSet& s, const VarAssignment& sigma,
                                    const FormulaInstance& inst);

}  // namespace pkgcalc
