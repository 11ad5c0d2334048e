#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "diffalg/rational.hpp"

namespace diffalg {

enum class ExprKind {
    constant,      // exact rational literal
    var,           // named variable (a function of the underlying parameter)
    diff_atom,     // d^n x applied to a variable, n >= 1
    partial_atom,  // partial differential of a function application, with a vary set
    deriv_atom,    // Arbogast derivative D_x^n y, stored unexpanded
    func,          // named function application
    pow,           // base raised to an exact rational exponent
    mul,
    add,
};

/**
 * Immutable expression tree. Handles are cheap shared pointers; structural
 * sharing is safe because nodes never mutate.
 *
 * Differentials are first-class leaves: d^n x is an atom, not an operator
 * application. The differential of anything compound is expanded eagerly by
 * the engine and never stored, so diff_atom targets are always plain
 * variables. partial_atom keeps an opaque function application plus the
 * ordered set of arguments allowed to vary. deriv_atom keeps a derivative
 * D_x^n y unexpanded until the expander is asked for its differential form.
 *
 * Constructors apply only trivial structural fixes (flattening nested
 * add/mul, collapsing empty and singleton cases, pow with exponent 0 or 1).
 * Full canonicalization is normalize()'s job.
 */
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(Rational c);
    static Expr integer(long v) { return constant(Rational(v)); }
    static Expr var(std::string name);
    static Expr diff_atom(std::string var_name, int order = 1);
    static Expr partial_atom(Expr func_application, std::vector<std::string> vary);
    static Expr deriv_atom(Expr target, std::string wrt, int order = 1);
    static Expr func(std::string name, std::vector<Expr> args);
    static Expr pow(Expr base, Rational exponent);
    static Expr add(std::vector<Expr> terms);
    static Expr mul(std::vector<Expr> factors);

    ExprKind kind() const;

    const Rational& constant_value() const;   // constant
    const std::string& name() const;          // var, diff_atom, func, deriv_atom (wrt)
    int order() const;                        // diff_atom, deriv_atom
    const std::vector<Expr>& operands() const;  // add, mul, func args
    const Expr& base() const;                 // pow
    const Rational& exponent() const;         // pow
    const Expr& target() const;               // partial_atom, deriv_atom
    const std::vector<std::string>& vary() const;  // partial_atom

    bool is_constant(const Rational& c) const;
    bool is_zero() const { return is_constant(0); }
    bool is_one() const { return is_constant(1); }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Fixed structural total order over all trees: negative / zero / positive
// like strcmp. This is the order canonical forms are sorted by.
int compare(const Expr& a, const Expr& b);

// Canonical form: sums of distinct monomials, each a rational coefficient
// times sorted powers of distinct atomic bases. Products distribute over
// sums, integer powers of sums expand, like terms and like bases merge,
// nested add/mul flatten. Idempotent. Throws NonIntegerGrade when a power
// would give a differential-carrying base a fractional grade, and
// DivisionByZero when a literal zero is raised to a negative power.
Expr normalize(const Expr& e);

// Sum of differential orders of a normalized expression: 0 for values,
// n for d^n x, 1 for partial atoms, additive over products, scaled by
// integer exponents. nullopt marks a mixed-grade sum.
std::optional<Integer> grade(const Expr& e);

// Capture-free structural substitution of variables. Substituting a
// non-variable into a differential atom's target is an error.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

std::set<std::string> free_vars(const Expr& e);

// Canonical text form; parses back to the same tree (after normalize).
std::string render_text(const Expr& e);

// LaTeX form: \mathrm{d}^n x for differentials, \frac for negative powers
// inside products, \partial_{x} f(..) for partial atoms, D^n_{x} y for
// unexpanded derivatives.
std::string render_latex(const Expr& e);

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
inline Expr operator-(const Expr& a) { return Expr::mul({Expr::integer(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }

}  // namespace diffalg
