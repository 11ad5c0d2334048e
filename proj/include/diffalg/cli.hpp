#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "diffalg/decls.hpp"
#include "diffalg/jet.hpp"

namespace diffalg {

/*
 * A jet file: the declaration statements (base/var/depends/function, one
 * per line, # comments) extended with evaluation bindings.
 *
 *     poly x 0 0 1        x's polynomial in its parent, coefficients
 *                         ascending (here x = p^2)
 *     at q0 3/2           the sample point; the q0 label is optional
 *     body f x^2 + y^2    concrete body for a declared function, written
 *                         in its formals
 *
 * Polynomials may only bind declared variables, bodies only declared
 * functions, and `at` may appear once. The truncation order is not part
 * of the file; callers set it on the returned assignment.
 */
struct JetFile {
    DependencyDecls decls;
    JetAssignment assignment;
};

JetFile parse_jet_file(const std::string& src);

/*
 * The command-line front end, with injectable streams for testing. `args`
 * excludes the program name. Returns the process exit code:
 *
 *     0  success, including verifications whose expected outcome is met
 *     1  a verification or evaluation failed (unexpected identity outcome,
 *        insufficient truncation, division by zero, order guard)
 *     2  usage or input errors (bad flags, parse errors, unknown
 *        identities or functions, unbound names, bad files)
 */
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace diffalg
