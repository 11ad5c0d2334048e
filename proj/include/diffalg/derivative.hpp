#pragma once

#include <string>
#include <vector>

#include "diffalg/decls.hpp"
#include "diffalg/differential.hpp"
#include "diffalg/expr.hpp"

namespace diffalg {

struct ExpandConfig {
    // Largest derivative order expand_derivative will unfold. Orders past
    // this throw OrderGuardExceeded before any work is done.
    int max_derivative_order = 4;

    // Settings handed to the derivation engine for the inner differentials.
    DiffConfig diff;
};

/*
 * Unfold the n-th derivative of `target` with respect to the variable `wrt`
 * into an explicit ratio of differentials:
 *
 *   n = 1:  normalize(d(target) * d[wrt]^-1)
 *   n > 1:  normalize(d(previous order) * d[wrt]^-1)
 *
 * The result is normalized and always has grade 0. For a symbolic y this
 * produces the general correction terms, e.g. order 2 gives
 * d[y,2]*d[wrt]^-2 - d[y]*d[wrt,2]*d[wrt]^-3; for a concrete polynomial the
 * differentials cancel, e.g. expand_derivative(x^2, "x", 1) == 2*x.
 *
 * Throws Error for order < 1 and OrderGuardExceeded for order beyond
 * cfg.max_derivative_order.
 */
Expr expand_derivative(const Expr& target, const std::string& wrt, int order,
                       const ExpandConfig& cfg = {});

// Rewrite every D[target;x;n] node in `e` by expand_derivative, innermost
// first, and return the normalized result. Expressions without derivative
// nodes come back as normalize(e).
Expr expand_deriv_atoms(const Expr& e, const ExpandConfig& cfg = {});

/*
 * A named equation lhs = rhs together with the dependency declarations it
 * is stated under and how its two sides are compared:
 *
 *   exact          evaluated difference must vanish identically
 *   leading_order  evaluated difference must be infinitesimal
 *                  (standard part zero, valuation at least 1)
 *
 * Both sides are grade-homogeneous with equal grades. Entries flagged
 * expect_failure are deliberate counterexamples: a suite run counts them
 * as successful precisely when their check fails.
 */
struct Identity {
    enum class CheckMode { exact, leading_order };

    std::string name;
    Expr lhs;
    Expr rhs;
    DependencyDecls decls;
    CheckMode mode = CheckMode::exact;
    bool expect_failure = false;
};

// dx/dy equals the reciprocal of dy/dx, both sides stored expanded.
// Declares y dependent on x and x on the base q.
Identity inverse_first(const std::string& y, const std::string& x);

// Second-order inverse rule: -D2(y,x) * (D1(y,x))^-3 on the left,
// D2(x,y) on the right, both sides stored expanded.
Identity inverse_second(const std::string& y, const std::string& x);

// Second-order chain rule: D2(y,x) * (D1(t,x))^2 + D1(y,x) * D2(t,x) on
// the left, D2(y,t) on the right, both sides stored expanded. Declares
// y dependent on x, x on t, t on the base q.
Identity chain_second(const std::string& y, const std::string& x,
                      const std::string& t);

/*
 * Multivariate chain rule for an opaque function f(vars) where every
 * variable in `vars` depends on t. The left side keeps the textbook shape
 *
 *   sum over v of  pd[f,v] * d[v]^-1 * d[v] * d[t]^-1
 *
 * unreduced, and the right side is the underived node D[f(vars);t]. The
 * two sides agree identically once derivative nodes are expanded, but
 * under evaluation the right side is the whole increment of f while the
 * left is a sum of one-variable increments, so the equation holds at
 * leading order rather than exactly. check mode is leading_order.
 */
Identity chain_multivariate(const std::string& f,
                            const std::vector<std::string>& vars,
                            const std::string& t);

/*
 * The fixed catalog, in report order:
 *
 *   inverse1                    first-order inverse rule
 *   inverse2                    second-order inverse rule
 *   chain2                      second-order chain rule
 *   chain_multi                 multivariate chain rule (leading order)
 *   naive_chain2_counterexample D2(y,x)*(D1(t,x))^2 alone, missing the
 *                               correction term (expected to fail)
 *   contradiction_1eq2          1 = 2, the residue of collapsing distinct
 *                               partial differentials into one symbol
 *                               (expected to fail)
 *   dxdx_zero                   second derivative of x with respect to
 *                               itself is 0
 */
std::vector<Identity> identity_catalog();

// Look up a catalog entry by name. Throws UnknownIdentity.
Identity identity_by_name(const std::string& name);

}  // namespace diffalg
