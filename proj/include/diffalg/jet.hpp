#pragma once

#include <map>
#include <string>
#include <vector>

#include "diffalg/decls.hpp"
#include "diffalg/expr.hpp"
#include "diffalg/levi_civita.hpp"

namespace diffalg {

/*
 * A polynomial jet: concrete values for every variable an expression
 * mentions, exact to all orders of the infinitesimal step.
 *
 * Each declared variable follows a polynomial of its single parent
 * variable (parent_of from the declarations; a variable with no
 * dependency entry is read as a polynomial in the base variable
 * directly). Chasing parents bottoms out at the base variable, which
 * moves along q0, q0 + eps, q0 + 2*eps, ... as increments are taken, so
 * by composition every variable has an exact Levi-Civita value at every
 * step.
 *
 * Opaque functions that appear in the expression need a body: a concrete
 * expression in the function's declared formals.
 */
struct JetAssignment {
    // var -> coefficients of its polynomial in the parent variable,
    // constant term first ({0, 0, 1} is the square of the parent).
    std::map<std::string, std::vector<Rational>> polys;

    // function name -> body expression written in the declared formals.
    // Bodies are ordinary concrete expressions; differentials inside a
    // body are rejected at evaluation.
    std::map<std::string, Expr> bodies;

    // Sample point of the base variable.
    Rational q0 = 0;

    // Working truncation window for the division steps. Must be at least
    // the largest differential order in the evaluated expression plus 2.
    int trunc_order = kDefaultTruncOrder;
};

/*
 * Evaluate an expression at a jet, exactly:
 *
 *   variable     its composed base-variable polynomial at q0
 *   d[x,n]       n-th forward difference of x over the steps
 *                q0, q0 + eps, ..., q0 + n*eps
 *   pd[f,S]      f with the variables in S advanced one step minus f
 *                with no variable advanced, via the bound body
 *   D[y;x]       ratio of the one-step increments of y and x; higher
 *                orders evaluate their differential-ratio expansion
 *   f(args)      bound body evaluated at the argument values
 *
 * Arithmetic nodes map directly onto Levi-Civita field operations, with
 * divisions truncated at trunc_order. Results are exact whenever no
 * division occurred.
 *
 * Throws UnboundVariable for a variable with no polynomial and no
 * override, UnboundFunction for a function without a body (elementary
 * functions included: sin(1) has no exact rational value),
 * InsufficientTruncation when trunc_order is too small for the
 * expression, NonRationalPower for fractional powers without exact
 * rational values, and Error for exponents too large to evaluate.
 */
LeviCivitaNumber eval_jet(const Expr& e, const JetAssignment& a,
                          const DependencyDecls& decls = {});

}  // namespace diffalg
