#include "pkgcalc/versions.hpp"

#include <cctype>

#include "pkgcalc/errors.hpp"

namespace pkgcalc {

Ordering compare_versions(const Version& v1, const Version& v2) {
    if (v1.is_numeric() && v2.is_numeric()) {
        const auto& a = v1.segments();
        const auto& b = v2.segments();
        std::size_t n = std::max(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t x = i < a.size() ? a[i] : 0;  // pad with zeros
            std::uint64_t y = i < b.size() ? b[i] : 0;
            if (x != y) return x < y ? Ordering::LT : Ordering::GT;
        }
        return Ordering::EQ;
    }
    if (compare(v1, v2) == 0) return Ordering::EQ;
    throw InvalidInput("cannot order versions across variants: " + to_string(v1) + " vs " +
                       to_string(v2));
}

CmpOp complement(CmpOp op) {
    switch (op) {
        case CmpOp::Ge: return CmpOp::Lt;
        case CmpOp::Gt: return CmpOp::Le;
        case CmpOp::Le: return CmpOp::Gt;
        case CmpOp::Lt: return CmpOp::Ge;
        case CmpOp::Eq: return CmpOp::Ne;
        case CmpOp::Ne: return CmpOp::Eq;
    }
    throw InvalidInput("bad comparison operator");
}

std::string to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
        case CmpOp::Le: return "<=";
        case CmpOp::Lt: return "<";
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
    }
    throw InvalidInput("bad comparison operator");
}

bool cmp_holds(Ordering o, CmpOp op) {
    switch (op) {
        case CmpOp::Ge: return o != Ordering::LT;
        case CmpOp::Gt: return o == Ordering::GT;
        case CmpOp::Le: return o != Ordering::GT;
        case CmpOp::Lt: return o == Ordering::LT;
        case CmpOp::Eq: return o == Ordering::EQ;
        case CmpOp::Ne: return o != Ordering::EQ;
    }
    return false;
}

VersionFormula VersionFormula::cmp(CmpOp op, Version bound) {
    if (!bound.is_numeric())
        throw InvalidInput("version formula bound must be numeric: " + to_string(bound));
    return VersionFormula(Cmp{op, std::move(bound)});
}

VersionFormula VersionFormula::conj(VersionFormula l, VersionFormula r) {
    return VersionFormula(And{std::make_shared<const VersionFormula>(std::move(l)),
                              std::make_shared<const VersionFormula>(std::move(r))});
}

VersionFormula VersionFormula::disj(VersionFormula l, VersionFormula r) {
    return VersionFormula(Or{std::make_shared<const VersionFormula>(std::move(l)),
                             std::make_shared<const VersionFormula>(std::move(r))});
}

VersionSet eval_formula(const VersionFormula& phi, const NameRef& n, const Repository& repo) {
    VersionSet existing = repo.versions_of(n);
    struct Eval {
        const VersionSet& vn;
        VersionSet operator()(const VersionFormula::Top&) const { return vn; }
        VersionSet operator()(const VersionFormula::And& x) const {
            VersionSet l = std::visit(*this, x.l->repr());
            VersionSet r = std::visit(*this, x.r->repr());
            VersionSet out;
            for (const auto& v : l)
                if (r.count(v)) out.insert(v);
            return out;
        }
        VersionSet operator()(const VersionFormula::Or& x) const {
            VersionSet out = std::visit(*this, x.l->repr());
            VersionSet r = std::visit(*this, x.r->repr());
            out.insert(r.begin(), r.end());
            return out;
        }
        VersionSet operator()(const VersionFormula::Cmp& x) const {
            VersionSet out;
            for (const auto& v : vn) {
                if (x.op == CmpOp::Eq || x.op == CmpOp::Ne) {
                    bool eq = v.is_numeric() && compare_versions(v, x.bound) == Ordering::EQ;
                    if (eq == (x.op == CmpOp::Eq)) out.insert(v);
                } else if (v.is_numeric() && cmp_holds(compare_versions(v, x.bound), x.op)) {
                    out.insert(v);
                }
            }
            return out;
        }
    };
    return std::visit(Eval{existing}, phi.repr());
}

CoreInstance lower_version_formulae(const Repository& repo, const FormulaDependencySet& fdeps,
                                    const Package& root) {
    CoreInstance inst{repo, {}, root};
    if (!repo.contains(root)) throw InvalidInput("root not in repository");
    for (const auto& fd : fdeps) {
        if (!repo.contains(fd.from))
            throw InvalidInput("formula dependency from unknown package " + to_string(fd.from));
        inst.deps.insert(Dependency{fd.from, fd.on, eval_formula(fd.formula, fd.on, repo)});
    }
    return inst;
}

// --- textual formula syntax ---------------------------------------------

namespace {

struct FormulaParser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("version formula: " + what + " at offset " + std::to_string(pos) +
                         " in \"" + text + "\"");
    }

    VersionFormula parse_or() {
        VersionFormula l = parse_and();
        while (eat('|')) l = VersionFormula::disj(std::move(l), parse_and());
        return l;
    }

    VersionFormula parse_and() {
        VersionFormula l = parse_atom();
        while (true) {
            skip_ws();
            // '&' or juxtaposed comparisons both conjoin ("&" is canonical).
            if (eat('&')) { l = VersionFormula::conj(std::move(l), parse_atom()); continue; }
            break;
        }
        return l;
    }

    VersionFormula parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        if (eat('(')) {
            VersionFormula f = parse_or();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (eat('*')) return VersionFormula::top();
        CmpOp op;
        if (text.compare(pos, 2, ">=") == 0) { op = CmpOp::Ge; pos += 2; }
        else if (text.compare(pos, 2, "<=") == 0) { op = CmpOp::Le; pos += 2; }
        else if (text.compare(pos, 2, "!=") == 0) { op = CmpOp::Ne; pos += 2; }
        else if (text[pos] == '>') { op = CmpOp::Gt; ++pos; }
        else if (text[pos] == '<') { op = CmpOp::Lt; ++pos; }
        else if (text[pos] == '=') { op = CmpOp::Eq; ++pos; }
        else fail("expected comparison operator");
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (start == pos) fail("expected version literal");
        return VersionFormula::cmp(op, parse_numeric_version(text.substr(start, pos - start)));
    }
};

std::string render(const VersionFormula& phi, bool parenthesize) {
    struct Str {
        std::string operator()(const VersionFormula::Top&) const { return "*"; }
        std::string operator()(const VersionFormula::And& x) const {
            return render(*x.l, true) + " & " + render(*x.r, true);
        }
        std::string operator()(const VersionFormula::Or& x) const {
            return render(*x.l, true) + " | " + render(*x.r, true);
        }
        std::string operator()(const VersionFormula::Cmp& x) const {
            return to_string(x.op) + to_string(x.bound);
        }
    };
    std::string s = std::visit(Str{}, phi.repr());
    bool compound = std::holds_alternative<VersionFormula::And>(phi.repr()) ||
                    std::holds_alternative<VersionFormula::Or>(phi.repr());
    if (parenthesize && compound) return "(" + s + ")";
    return s;
}

}  // namespace

VersionFormula parse_version_formula(const std::string& text) {
    FormulaParser p{text};
    VersionFormula f = p.parse_or();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

std::string to_string(const VersionFormula& phi) { return render(phi, false); }

Version parse_numeric_version(const std::string& text) {
    std::vector<std::uint64_t> segs;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw ParseError("bad version literal \"" + text + "\"");
        std::uint64_t seg = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            seg = seg * 10 + static_cast<std::uint64_t>(text[i++] - '0');
        segs.push_back(seg);
        if (i < text.size()) {
            if (text[i] != '.') throw ParseError("bad version literal \"" + text + "\"");
            ++i;
            if (i == text.size()) throw ParseError("bad version literal \"" + text + "\"");
        }
    }
    if (segs.empty()) throw ParseError("empty version literal");
    return Version::numeric(std::move(segs));
}

}  // namespace pkgcalc
