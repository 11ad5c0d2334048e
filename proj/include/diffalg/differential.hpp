#pragma once

#include <set>
#include <string>

#include "diffalg/expr.hpp"

namespace diffalg {

// Differentiation context: the derivative rules for elementary functions and
// the guard capping how deep repeated differentials may stack.
struct DiffConfig {
    int max_order = 6;

    bool is_elementary(const std::string& name) const;

    // The derivative of the named elementary function applied to the same
    // argument: sin -> cos(u), cos -> -sin(u), exp -> exp(u), ln -> 1/u.
    Expr elementary_derivative(const std::string& name, const Expr& arg) const;
};

/**
 * The differential d as a graded derivation: d(c) = 0, d(x) = dx,
 * d(d^n x) = d^(n+1) x, linear over sums, Leibniz over products (no du*dv
 * cross term), d(u^r) = r u^(r-1) du, and the chain rule through elementary
 * functions. An opaque function application differentiates to the sum of its
 * singleton partial differentials, one per argument. Raises the grade of a
 * homogeneous input by exactly one. The result is normalized.
 *
 * Throws OrderGuardExceeded past cfg.max_order and UnsupportedDifferential
 * for unexpanded derivatives and partial differential atoms (there is no
 * second-order partial calculus here; expand first).
 */
Expr differential(const Expr& e, const DiffConfig& cfg = {});

// n-fold differential, n >= 0 (0 just normalizes).
Expr nth_differential(const Expr& e, int n, const DiffConfig& cfg = {});

/**
 * Differential with only the variables in `vary` allowed to change; every
 * other variable and its differentials are held constant. Applied to an
 * opaque function application the result stays symbolic: a partial atom over
 * the vary set, except that varying every argument collapses to the total
 * differential. Every vary variable must occur (as an argument for opaque
 * applications, free otherwise) or VaryVarNotArgument is thrown.
 */
Expr partial_differential(const Expr& e, const std::set<std::string>& vary,
                          const DiffConfig& cfg = {});

// Sum of singleton partial differentials over every argument; equals
// differential(e) on anything concrete.
Expr total_differential(const Expr& e, const DiffConfig& cfg = {});

// Keeps only the terms of minimal grade in a normalized sum. Requires every
// term to have a definite grade.
Expr principal_reduce(const Expr& e);

}  // namespace diffalg
