#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pkgcalc/core.hpp"

// SAT-based resolution: the CNF encoding (one variable per package, a unit
// clause for the root, one clause per dependency, pairwise at-most-one per
// name), a small deterministic DPLL solver, and the 3-SAT reduction used to
// stress the whole stack.

namespace pkgcalc {

struct SatLiteral {
    std::size_t var = 0;
    bool positive = true;
};

struct CnfInstance {
    std::vector<Package> vars;  // index is the SAT variable id
    std::vector<std::vector<SatLiteral>> clauses;
};

// Total over declared variables when the solver answers SAT.
using SatAssignment = std::vector<bool>;

// ordered=true sorts each dependency clause's dependee literals freshest
// first, which biases the solver's first-literal decision rule towards
// higher versions. Satisfiability is unaffected.
CnfInstance encode(const CoreInstance& inst, bool ordered);

// DPLL with unit propagation and chronological backtracking. The decision
// rule is the first unassigned literal of the first unsatisfied clause,
// assigned so the literal holds. Deterministic in the input. Throws
// LimitExceeded once max_conflicts backtracks have happened.
std::optional<SatAssignment> solve(const CnfInstance& cnf, std::size_t max_conflicts = kNoLimit);

// Reads off {p | a[X_p]}. Throws InvalidInput when a does not satisfy cnf.
Resolution decode(const CnfInstance& cnf, const SatAssignment& a);

// encode -> solve -> decode. Empty optional means unresolvable.
std::optional<Resolution> sat_resolve(const CoreInstance& inst, bool prefer_fresh = false);

struct ThreeCnf {
    std::size_t num_vars = 0;
    // 1-based DIMACS-style literals; negative means negated.
    std::vector<std::array<long, 3>> clauses;
};

// The 3-SAT reduction: a package pair per variable (versions are the 1/0
// markers), a three-version package family per clause, and dependencies
// tying each clause version to its literal's polarity. The instance
// resolves exactly when the formula is satisfiable.
CoreInstance gen_from_3cnf(const ThreeCnf& cnf);

// DIMACS CNF: "p cnf <vars> <clauses>" then 0-terminated clauses. Every
// clause must have exactly three literals.
ThreeCnf parse_dimacs(const std::string& text);

}  // namespace pkgcalc
