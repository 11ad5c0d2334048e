#include "diffalg/expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <utility>

#include "diffalg/error.hpp"

namespace diffalg {

struct Expr::Node {
    ExprKind kind = ExprKind::constant;
    Rational value;              // constant value, or pow exponent
    std::string name;            // var / func / diff var / deriv wrt
    int order = 0;               // diff_atom, deriv_atom
    std::vector<Expr> children;  // add/mul operands, func args, {base}, {target}
    std::vector<std::string> vary;
};

Expr::Expr() {
    static const std::shared_ptr<const Node> zero = [] {
        auto n = std::make_shared<Node>();
        n->kind = ExprKind::constant;
        n->value = 0;
        return std::shared_ptr<const Node>(std::move(n));
    }();
    node_ = zero;
}

Expr Expr::constant(Rational c) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::constant;
    n->value = std::move(c);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::var;
    n->name = std::move(name);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::diff_atom(std::string var_name, int order) {
    if (order < 1) throw Error("differential order must be at least 1");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::diff_atom;
    n->name = std::move(var_name);
    n->order = order;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::partial_atom(Expr func_application, std::vector<std::string> vary) {
    if (func_application.kind() != ExprKind::func)
        throw Error("partial differential target must be a function application");
    if (vary.empty()) throw Error("partial differential needs at least one varying argument");
    std::sort(vary.begin(), vary.end());
    if (std::adjacent_find(vary.begin(), vary.end()) != vary.end())
        throw Error("duplicate variable in partial differential vary set");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::partial_atom;
    n->children.push_back(std::move(func_application));
    n->vary = std::move(vary);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::deriv_atom(Expr target, std::string wrt, int order) {
    if (order < 1) throw Error("derivative order must be at least 1");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::deriv_atom;
    n->children.push_back(std::move(target));
    n->name = std::move(wrt);
    n->order = order;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::func(std::string name, std::vector<Expr> args) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::func;
    n->name = std::move(name);
    n->children = std::move(args);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::pow(Expr base, Rational exponent) {
    if (exponent == 1) return base;
    if (exponent == 0) return constant(1);
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::pow;
    n->children.push_back(std::move(base));
    n->value = std::move(exponent);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (t.kind() == ExprKind::add)
            flat.insert(flat.end(), t.operands().begin(), t.operands().end());
        else
            flat.push_back(std::move(t));
    }
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::add;
    n->children = std::move(flat);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    for (auto& f : factors) {
        if (f.kind() == ExprKind::mul)
            flat.insert(flat.end(), f.operands().begin(), f.operands().end());
        else
            flat.push_back(std::move(f));
    }
    if (flat.empty()) return constant(1);
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::mul;
    n->children = std::move(flat);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

ExprKind Expr::kind() const { return node_->kind; }

const Rational& Expr::constant_value() const {
    assert(node_->kind == ExprKind::constant);
    return node_->value;
}

const std::string& Expr::name() const { return node_->name; }

int Expr::order() const { return node_->order; }

const std::vector<Expr>& Expr::operands() const { return node_->children; }

const Expr& Expr::base() const {
    assert(node_->kind == ExprKind::pow);
    return node_->children.front();
}

const Rational& Expr::exponent() const {
    assert(node_->kind == ExprKind::pow);
    return node_->value;
}

const Expr& Expr::target() const {
    assert(node_->kind == ExprKind::partial_atom || node_->kind == ExprKind::deriv_atom);
    return node_->children.front();
}

const std::vector<std::string>& Expr::vary() const { return node_->vary; }

bool Expr::is_constant(const Rational& c) const {
    return node_->kind == ExprKind::constant && node_->value == c;
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

// ---- structural order -------------------------------------------------------

namespace {

int rank(ExprKind k) {
    switch (k) {
        case ExprKind::constant: return 0;
        case ExprKind::var: return 1;
        case ExprKind::diff_atom: return 2;
        case ExprKind::partial_atom: return 3;
        case ExprKind::deriv_atom: return 4;
        case ExprKind::func: return 5;
        case ExprKind::pow: return 6;
        case ExprKind::mul: return 7;
        case ExprKind::add: return 8;
    }
    return 9;
}

int cmp_rational(const Rational& a, const Rational& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int cmp_children(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
    const int ra = rank(a.kind()), rb = rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case ExprKind::constant:
            return cmp_rational(a.constant_value(), b.constant_value());
        case ExprKind::var:
            return a.name().compare(b.name());
        case ExprKind::diff_atom: {
            if (const int c = a.name().compare(b.name())) return c;
            if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
            return 0;
        }
        case ExprKind::partial_atom: {
            if (const int c = compare(a.target(), b.target())) return c;
            if (a.vary().size() != b.vary().size())
                return a.vary().size() < b.vary().size() ? -1 : 1;
            for (std::size_t i = 0; i < a.vary().size(); ++i)
                if (const int c = a.vary()[i].compare(b.vary()[i])) return c;
            return 0;
        }
        case ExprKind::deriv_atom: {
            if (const int c = compare(a.target(), b.target())) return c;
            if (const int c = a.name().compare(b.name())) return c;
            if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
            return 0;
        }
        case ExprKind::func: {
            if (const int c = a.name().compare(b.name())) return c;
            return cmp_children(a.operands(), b.operands());
        }
        case ExprKind::pow: {
            if (const int c = compare(a.base(), b.base())) return c;
            return cmp_rational(a.exponent(), b.exponent());
        }
        case ExprKind::mul:
        case ExprKind::add:
            return cmp_children(a.operands(), b.operands());
    }
    return 0;
}

// ---- grade -------------------------------------------------------------------

namespace {

// Definite grade as a rational, nullopt for mixed-grade sums.
std::optional<Rational> grade_r(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::var:
        case ExprKind::deriv_atom:
        case ExprKind::func:
            return Rational(0);
        case ExprKind::diff_atom:
            return Rational(e.order());
        case ExprKind::partial_atom:
            return Rational(1);
        case ExprKind::pow: {
            const auto g = grade_r(e.base());
            if (!g) return std::nullopt;
            return *g * e.exponent();
        }
        case ExprKind::mul: {
            Rational sum = 0;
            for (const auto& f : e.operands()) {
                const auto g = grade_r(f);
                if (!g) return std::nullopt;
                sum += *g;
            }
            return sum;
        }
        case ExprKind::add: {
            std::optional<Rational> common;
            for (const auto& t : e.operands()) {
                const auto g = grade_r(t);
                if (!g) return std::nullopt;
                if (!common)
                    common = *g;
                else if (*common != *g)
                    return std::nullopt;
            }
            return common ? *common : Rational(0);
        }
    }
    return Rational(0);
}

}  // namespace

std::optional<Integer> grade(const Expr& e) {
    const auto g = grade_r(e);
    if (!g) return std::nullopt;
    if (!is_integer(*g))
        throw NonIntegerGrade("expression has non-integer grade " + to_string(*g));
    return numerator(*g);
}

// ---- normalization -----------------------------------------------------------

namespace {

struct Factor {
    Expr base;
    Rational exp;
};

using FactorList = std::vector<Factor>;

// Canonical term order: walk (base, exponent) pairs; earlier base first,
// higher exponent first on equal bases, longer factor list first on a
// common prefix (which puts pure constants last).
bool term_key_less(const FactorList& a, const FactorList& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int c = compare(a[i].base, b[i].base);
        if (c != 0) return c < 0;
        if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp;
    }
    return a.size() > b.size();
}

struct TermKeyLess {
    bool operator()(const FactorList& a, const FactorList& b) const {
        return term_key_less(a, b);
    }
};

// Canonical polynomial: monomial factor-list -> coefficient.
using Poly = std::map<FactorList, Rational, TermKeyLess>;

void check_factor_grade(const Expr& base, const Rational& exp) {
    if (is_integer(exp)) return;
    const auto g = grade_r(base);
    if (!g)
        throw NonIntegerGrade("fractional power of a mixed-grade expression");
    if (*g != 0 && !is_integer(exp * *g))
        throw NonIntegerGrade("power " + to_string(exp) + " of a grade-" + to_string(*g) +
                              " base is not integer-graded");
}

struct Monomial {
    Rational coeff;
    FactorList factors;
};

// Sort, merge equal bases, fold constant bases with foldable exponents into
// the coefficient, drop zero exponents. The single chokepoint all monomial
// construction funnels through.
Monomial make_monomial(Rational coeff, FactorList raw) {
    if (coeff == 0) return {0, {}};
    std::sort(raw.begin(), raw.end(),
              [](const Factor& x, const Factor& y) { return compare(x.base, y.base) < 0; });
    FactorList out;
    std::size_t i = 0;
    while (i < raw.size()) {
        Expr base = raw[i].base;
        Rational exp = raw[i].exp;
        std::size_t j = i + 1;
        while (j < raw.size() && compare(raw[j].base, base) == 0) {
            exp += raw[j].exp;
            ++j;
        }
        i = j;
        if (exp == 0) continue;
        if (base.kind() == ExprKind::constant) {
            if (base.constant_value() == 0) {
                if (exp < 0) throw DivisionByZero("zero raised to a negative power");
                return {0, {}};
            }
            if (auto v = pow_rational_exact(base.constant_value(), exp)) {
                coeff *= *v;
                continue;
            }
        }
        check_factor_grade(base, exp);
        out.push_back({std::move(base), std::move(exp)});
    }
    return {std::move(coeff), std::move(out)};
}

void poly_accumulate(Poly& p, Monomial m) {
    if (m.coeff == 0) return;
    auto [it, fresh] = p.emplace(std::move(m.factors), m.coeff);
    if (!fresh) {
        it->second += m.coeff;
        if (it->second == 0) p.erase(it);
    }
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [k, c] : b) poly_accumulate(out, {c, k});
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            FactorList merged = ka;
            merged.insert(merged.end(), kb.begin(), kb.end());
            poly_accumulate(out, make_monomial(ca * cb, std::move(merged)));
        }
    }
    return out;
}

Poly poly_one() { return Poly{{FactorList{}, Rational(1)}}; }

Poly poly_pow_int(const Poly& p, Integer n) {
    Poly acc = poly_one();
    Poly sq = p;
    while (n > 0) {
        if ((n & 1) != 0) acc = poly_mul(acc, sq);
        n >>= 1;
        if (n > 0) sq = poly_mul(sq, sq);
    }
    return acc;
}

Expr rebuild(const Poly& p);

Poly nf(const Expr& e);

Poly atom_poly(Expr atom) {
    Poly out;
    out.emplace(FactorList{{std::move(atom), Rational(1)}}, Rational(1));
    return out;
}

Poly nf_pow(const Poly& base, const Rational& r) {
    if (r == 0) return poly_one();
    if (base.empty()) {
        if (r < 0) throw DivisionByZero("zero raised to a negative power");
        return base;
    }
    if (base.size() == 1) {
        const auto& [key, c] = *base.begin();
        FactorList scaled;
        scaled.reserve(key.size() + 1);
        for (const auto& f : key) scaled.push_back({f.base, f.exp * r});
        Rational coeff = 1;
        if (auto v = pow_rational_exact(c, r))
            coeff = *v;
        else
            scaled.push_back({Expr::constant(c), r});
        Poly out;
        poly_accumulate(out, make_monomial(std::move(coeff), std::move(scaled)));
        return out;
    }
    if (is_integer(r)) {
        const Integer n = numerator(r);
        if (n > 0) {
            if (n > 64)
                throw Error("refusing to expand a sum to the integer power " + n.str());
            return poly_pow_int(base, n);
        }
    }
    // Inverse or fractional power of a sum stays opaque.
    Expr atom = rebuild(base);
    check_factor_grade(atom, r);
    Poly out;
    out.emplace(FactorList{{std::move(atom), r}}, Rational(1));
    return out;
}

Poly nf(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant: {
            Poly out;
            if (e.constant_value() != 0) out.emplace(FactorList{}, e.constant_value());
            return out;
        }
        case ExprKind::var:
        case ExprKind::diff_atom:
            return atom_poly(e);
        case ExprKind::deriv_atom:
            return atom_poly(Expr::deriv_atom(normalize(e.target()), e.name(), e.order()));
        case ExprKind::partial_atom: {
            const Expr& f = e.target();
            std::vector<Expr> args;
            args.reserve(f.operands().size());
            for (const auto& a : f.operands()) args.push_back(normalize(a));
            return atom_poly(
                Expr::partial_atom(Expr::func(f.name(), std::move(args)), e.vary()));
        }
        case ExprKind::func: {
            std::vector<Expr> args;
            args.reserve(e.operands().size());
            for (const auto& a : e.operands()) args.push_back(normalize(a));
            return atom_poly(Expr::func(e.name(), std::move(args)));
        }
        case ExprKind::pow:
            return nf_pow(nf(e.base()), e.exponent());
        case ExprKind::mul: {
            Poly acc = poly_one();
            for (const auto& f : e.operands()) acc = poly_mul(acc, nf(f));
            return acc;
        }
        case ExprKind::add: {
            Poly acc;
            for (const auto& t : e.operands()) acc = poly_add(acc, nf(t));
            return acc;
        }
    }
    return {};
}

Expr rebuild_monomial(const Rational& c, const FactorList& fs) {
    if (fs.empty()) return Expr::constant(c);
    std::vector<Expr> parts;
    parts.reserve(fs.size() + 1);
    if (c != 1) parts.push_back(Expr::constant(c));
    for (const auto& [b, e] : fs) parts.push_back(e == 1 ? b : Expr::pow(b, e));
    return parts.size() == 1 ? parts.front() : Expr::mul(std::move(parts));
}

Expr rebuild(const Poly& p) {
    if (p.empty()) return Expr();
    std::vector<Expr> terms;
    terms.reserve(p.size());
    for (const auto& [k, c] : p) terms.push_back(rebuild_monomial(c, k));
    return terms.size() == 1 ? terms.front() : Expr::add(std::move(terms));
}

}  // namespace

Expr normalize(const Expr& e) { return rebuild(nf(e)); }

// ---- substitution and free variables ------------------------------------------

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case ExprKind::constant:
            return e;
        case ExprKind::var: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case ExprKind::diff_atom: {
            auto it = bindings.find(e.name());
            if (it == bindings.end()) return e;
            if (it->second.kind() != ExprKind::var)
                throw SubstitutionError(
                    "cannot substitute a compound expression into the differential of " +
                    e.name() + "; expand the differential first");
            return Expr::diff_atom(it->second.name(), e.order());
        }
        case ExprKind::deriv_atom: {
            Expr t = substitute(e.target(), bindings);
            auto it = bindings.find(e.name());
            std::string wrt = e.name();
            if (it != bindings.end()) {
                if (it->second.kind() != ExprKind::var)
                    throw SubstitutionError(
                        "cannot substitute a compound expression into a derivative's "
                        "differentiation variable");
                wrt = it->second.name();
            }
            return Expr::deriv_atom(std::move(t), std::move(wrt), e.order());
        }
        case ExprKind::partial_atom: {
            Expr t = substitute(e.target(), bindings);
            return Expr::partial_atom(std::move(t), e.vary());
        }
        case ExprKind::func: {
            std::vector<Expr> args;
            args.reserve(e.operands().size());
            for (const auto& a : e.operands()) args.push_back(substitute(a, bindings));
            return Expr::func(e.name(), std::move(args));
        }
        case ExprKind::pow:
            return Expr::pow(substitute(e.base(), bindings), e.exponent());
        case ExprKind::mul:
        case ExprKind::add: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const auto& c : e.operands()) ops.push_back(substitute(c, bindings));
            return e.kind() == ExprKind::mul ? Expr::mul(std::move(ops))
                                             : Expr::add(std::move(ops));
        }
    }
    return e;
}

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
        case ExprKind::constant:
            return;
        case ExprKind::var:
        case ExprKind::diff_atom:
            out.insert(e.name());
            return;
        case ExprKind::deriv_atom:
            out.insert(e.name());
            collect_vars(e.target(), out);
            return;
        case ExprKind::partial_atom:
            collect_vars(e.target(), out);
            return;
        case ExprKind::func:
        case ExprKind::mul:
        case ExprKind::add:
            for (const auto& c : e.operands()) collect_vars(c, out);
            return;
        case ExprKind::pow:
            collect_vars(e.base(), out);
            return;
    }
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> out;
    collect_vars(e, out);
    return out;
}

}  // namespace diffalg
