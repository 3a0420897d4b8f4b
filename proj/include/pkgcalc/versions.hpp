#pragma once

#include <memory>
#include <string>

#include "pkgcalc/core.hpp"

// The semantic version order <=_v and the version formula calculus: formula
// AST, the evaluation semantics [[.]]_n, and the lowering that turns formula
// dependencies into set dependencies.

namespace pkgcalc {

enum class Ordering { LT, EQ, GT };

// Total order on Numeric versions: segment-wise comparison with the shorter
// sequence padded with zeros (1.4 == 1.4.0). Non-Numeric variants compare
// only by equality; any other cross-variant comparison throws InvalidInput.
Ordering compare_versions(const Version& v1, const Version& v2);

inline bool version_le(const Version& a, const Version& b) {
    return compare_versions(a, b) != Ordering::GT;
}

enum class CmpOp { Ge, Gt, Le, Lt, Eq, Ne };

CmpOp complement(CmpOp op);
std::string to_string(CmpOp op);

// Applies op under an ordering result (lhs compared to rhs).
bool cmp_holds(Ordering o, CmpOp op);

class VersionFormula {
public:
    struct Top {};
    struct And { std::shared_ptr<const VersionFormula> l, r; };
    struct Or { std::shared_ptr<const VersionFormula> l, r; };
    struct Cmp { CmpOp op; Version bound; };  // bound is Numeric

    using Repr = std::variant<Top, And, Or, Cmp>;

    explicit VersionFormula(Repr r) : repr_(std::move(r)) {}
    const Repr& repr() const { return repr_; }

    static VersionFormula top() { return VersionFormula(Top{}); }
    static VersionFormula cmp(CmpOp op, Version bound);
    static VersionFormula conj(VersionFormula l, VersionFormula r);
    static VersionFormula disj(VersionFormula l, VersionFormula r);

private:
    Repr repr_;
};

// [[phi]]_n: evaluates a formula against the versions of n that exist in the
// repository. Always a subset of V_n; unknown names evaluate to the empty set.
VersionSet eval_formula(const VersionFormula& phi, const NameRef& n, const Repository& repo);

struct FormulaDependency {
    Package from;
    NameRef on;
    VersionFormula formula;
};
using FormulaDependencySet = std::vector<FormulaDependency>;

// Lowers formula dependencies to set dependencies by evaluation; repo and
// root pass through unchanged.
CoreInstance lower_version_formulae(const Repository& repo, const FormulaDependencySet& fdeps,
                                    const Package& root);

// Textual formula syntax used by the interchange format:
//   "*" | ">=1.2.3 & <2.0.0" | "<1.4.0 | >=1.5.0", with parentheses.
VersionFormula parse_version_formula(const std::string& text);
std::string to_string(const VersionFormula& phi);

// "1.2.3" -> Numeric version; throws ParseError on anything else.
Version parse_numeric_version(const std::string& text);

}  // namespace pkgcalc
