#pragma once

#include <string>

#include "diffalg/decls.hpp"
#include "diffalg/differential.hpp"
#include "diffalg/expr.hpp"

namespace diffalg {

/**
 * Parses the expression language and returns the normalized tree.
 *
 * Grammar (no implicit multiplication):
 *   expr     := term (("+" | "-") term)*
 *   term     := factor (("*" | "/") factor)*
 *   factor   := "-"? atom ("^" srational)?
 *   atom     := rational | ident | ident "(" expr ("," expr)* ")"
 *             | "(" expr ")"
 *             | "d" "[" expr ("," int)? "]"
 *             | "pd" "[" ident ("," ident)+ "]"
 *             | "D" "[" expr ";" ident (";" int)? "]"
 *   rational := int ("/" int)? ; srational allows a leading "-".
 *
 * d[e, n] expands eagerly through the differential engine, so d[x^2] parses
 * to 2*x*d[x]. pd[f, vars...] requires f declared and every var among its
 * arguments. Division a/b means a times b^-1. The names d, pd, and D act as
 * operators only directly before "["; anywhere else they are ordinary
 * identifiers.
 *
 * Throws ParseError (positioned), UnknownFunction, VaryVarNotArgument, and
 * whatever the engine or normalizer raises during eager expansion.
 */
Expr parse_expr(const std::string& src, const DependencyDecls& decls = {},
                const DiffConfig& cfg = {});

/**
 * Parses line-based declarations. One statement per line:
 *   base q         the underlying parameter
 *   var x          introduces a variable
 *   depends x t    x depends on t (t introduced implicitly)
 *   function f x y f is opaque with formal arguments x, y
 * Comments run from '#' to end of line; blank lines are skipped. The result
 * is validated: redeclarations throw DuplicateDeclaration and dependency
 * cycles throw CyclicDependency.
 */
DependencyDecls parse_decls(const std::string& src);

}  // namespace diffalg
