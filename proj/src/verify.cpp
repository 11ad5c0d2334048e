#include "diffalg/verify.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "diffalg/error.hpp"
#include "diffalg/parse.hpp"

namespace diffalg {

namespace {

using Json = nlohmann::ordered_json;

// mt19937_64 with modulo draws: the engine's output stream is pinned by the
// standard, so a fixed seed gives identical jets on every platform.
long draw(std::mt19937_64& gen, long lo, long hi) {
    return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

const std::vector<Rational>& q0_palette() {
    static const std::vector<Rational> palette = {
        Rational(1),    Rational(2),  Rational(-1),    Rational(3),
        Rational(1, 2), Rational(-2), Rational(5, 2),  Rational(-3)};
    return palette;
}

// The concrete polynomials each identity is usually demonstrated on.
JetAssignment worked_jet(const std::string& name) {
    JetAssignment a;
    if (name == "inverse1" || name == "inverse2") {
        a.polys["x"] = {Rational(0), Rational(1)};
        a.polys["y"] = {Rational(0), Rational(0), Rational(0), Rational(1)};
        a.q0 = 2;
    } else if (name == "chain2" || name == "naive_chain2_counterexample") {
        a.polys["t"] = {Rational(0), Rational(1)};
        a.polys["x"] = {Rational(0), Rational(0), Rational(1)};
        a.polys["y"] = {Rational(0), Rational(0), Rational(0), Rational(1)};
        a.q0 = 1;
    } else if (name == "chain_multi" || name == "contradiction_1eq2") {
        a.polys["t"] = {Rational(0), Rational(1)};
        a.polys["x"] = {Rational(0), Rational(0), Rational(1)};
        a.polys["y"] = {Rational(0), Rational(0), Rational(0), Rational(1)};
        a.bodies["f"] = parse_expr("x^2 + y^2");
        a.q0 = 1;
    } else if (name == "dxdx_zero") {
        a.polys["x"] = {Rational(0), Rational(0), Rational(1)};
        a.q0 = 1;
    } else {
        throw UnknownIdentity("no worked jet for identity " + name);
    }
    return a;
}

std::vector<Rational> random_poly(std::mt19937_64& gen) {
    const long deg = draw(gen, 1, 3);
    std::vector<Rational> coeffs;
    coeffs.reserve(static_cast<std::size_t>(deg) + 1);
    for (long i = 0; i < deg; ++i) coeffs.emplace_back(draw(gen, -3, 3));
    long lead = draw(gen, -3, 3);
    while (lead == 0) lead = draw(gen, -3, 3);
    coeffs.emplace_back(lead);
    return coeffs;
}

// Random body in the function's formals: a square term per formal plus a
// cross term per adjacent pair, integer coefficients in [-3, 3], not all
// zero. Cross terms keep the leading-order check mode exercised.
Expr random_body(std::mt19937_64& gen, const std::vector<std::string>& formals) {
    for (;;) {
        std::vector<long> cs;
        std::vector<Expr> terms;
        for (const auto& v : formals) {
            const long c = draw(gen, -3, 3);
            cs.push_back(c);
            terms.push_back(Expr::integer(c) * Expr::pow(Expr::var(v), Rational(2)));
        }
        for (std::size_t i = 0; i + 1 < formals.size(); ++i) {
            const long c = draw(gen, -3, 3);
            cs.push_back(c);
            terms.push_back(Expr::integer(c) * Expr::var(formals[i]) *
                            Expr::var(formals[i + 1]));
        }
        bool any = false;
        for (const long c : cs) any = any || (c != 0);
        if (!any) continue;
        return normalize(Expr::add(std::move(terms)));
    }
}

bool increments_invertible(const JetAssignment& a, const DependencyDecls& decls) {
    for (const auto& [var, coeffs] : a.polys) {
        (void)coeffs;
        const auto dv = eval_jet(Expr::diff_atom(var), a, decls);
        if (dv.coefficient(1) == 0) return false;
    }
    return true;
}

// Same variable set and bodies as the worked jet, with random polynomials,
// q0 from a small palette, and body coefficients redrawn. Resampled until
// every declared variable's one-step increment has a nonzero eps
// coefficient, so first-order ratios stay finite and invertible.
JetAssignment random_jet(const Identity& id, std::mt19937_64& gen) {
    const JetAssignment shape = worked_jet(id.name);
    for (int attempt = 0; attempt < 64; ++attempt) {
        JetAssignment a;
        a.q0 = q0_palette()[static_cast<std::size_t>(
            draw(gen, 0, static_cast<long>(q0_palette().size()) - 1))];
        for (const auto& [var, coeffs] : shape.polys) {
            (void)coeffs;
            a.polys[var] = random_poly(gen);
        }
        for (const auto& [fname, body] : shape.bodies) {
            (void)body;
            a.bodies[fname] = random_body(gen, id.decls.function_args(fname));
        }
        if (increments_invertible(a, id.decls)) return a;
    }
    throw Error("could not sample a well formed jet for " + id.name);
}

Json verdict_to_json(const AssignmentVerdict& v) {
    Json j;
    j["pass"] = v.pass;
    if (!v.evaluated) {
        j["error"] = v.error;
        return j;
    }
    if (v.difference_valuation.has_value())
        j["difference_valuation"] = *v.difference_valuation;
    else
        j["difference_valuation"] = nullptr;
    j["lhs_st"] = v.lhs_st.to_string();
    j["rhs_st"] = v.rhs_st.to_string();
    return j;
}

Json report_to_json(const IdentityReport& r) {
    Json j;
    j["name"] = r.name;
    j["expect_failure"] = r.expect_failure;
    j["symbolic"] = Json{{"pass", r.symbolic_pass},
                         {"difference", render_text(r.symbolic_difference)}};
    Json jets = Json::array();
    for (const auto& v : r.numeric) jets.push_back(verdict_to_json(v));
    j["jets"] = std::move(jets);
    j["pass"] = r.pass;
    j["expected_outcome_met"] = r.expected_outcome_met;
    return j;
}

}  // namespace

IdentityReport verify_identity(const Identity& id,
                               const std::vector<JetAssignment>& assignments) {
    IdentityReport r;
    r.name = id.name;
    r.expect_failure = id.expect_failure;

    r.symbolic_difference =
        normalize(expand_deriv_atoms(id.lhs) - expand_deriv_atoms(id.rhs));
    r.symbolic_pass = r.symbolic_difference.is_zero();

    bool numeric_pass = true;
    for (const auto& a : assignments) {
        AssignmentVerdict v;
        try {
            const auto lhs = eval_jet(id.lhs, a, id.decls);
            const auto rhs = eval_jet(id.rhs, a, id.decls);
            const auto diff = lhs - rhs;
            v.evaluated = true;
            v.lhs_st = lhs.standard_part();
            v.rhs_st = rhs.standard_part();
            v.difference_valuation = diff.valuation();
            if (diff.is_zero_within_window()) {
                v.pass = true;
            } else if (id.mode == Identity::CheckMode::leading_order) {
                v.pass = diff.standard_part() == StandardPart::finite(0) &&
                         *diff.valuation() >= 1;
            } else {
                v.pass = false;
            }
        } catch (const Error& err) {
            v = AssignmentVerdict{};
            v.error = err.what();
        }
        numeric_pass = numeric_pass && v.pass;
        r.numeric.push_back(std::move(v));
    }

    r.pass = r.symbolic_pass && numeric_pass;
    r.expected_outcome_met = (r.pass != id.expect_failure);
    return r;
}

std::vector<IdentityReport> run_identity_suite(std::uint64_t seed, int count) {
    if (count < 0) throw Error("negative jet count");
    std::mt19937_64 gen(seed);
    std::vector<IdentityReport> reports;
    for (const auto& id : identity_catalog()) {
        std::vector<JetAssignment> jets;
        if (count > 0) {
            jets.push_back(worked_jet(id.name));
            for (int i = 0; i < count; ++i) jets.push_back(random_jet(id, gen));
        }
        reports.push_back(verify_identity(id, jets));
    }
    return reports;
}

IdentityReport run_identity(const std::string& name, std::uint64_t seed, int count) {
    if (count < 0) throw Error("negative jet count");
    const auto id = identity_by_name(name);
    std::mt19937_64 gen(seed);
    std::vector<JetAssignment> jets;
    if (count > 0) {
        jets.push_back(worked_jet(id.name));
        for (int i = 0; i < count; ++i) jets.push_back(random_jet(id, gen));
    }
    return verify_identity(id, jets);
}

std::string report_to_text(const IdentityReport& r) {
    std::ostringstream out;
    out << "identity: " << r.name << "\n";
    out << "  expected: " << (r.expect_failure ? "fail" : "pass") << "\n";
    out << "  symbolic: " << (r.symbolic_pass ? "pass" : "fail")
        << "  difference: " << render_text(r.symbolic_difference) << "\n";
    for (std::size_t i = 0; i < r.numeric.size(); ++i) {
        const auto& v = r.numeric[i];
        out << "  jet[" << i << "]: ";
        if (!v.evaluated) {
            out << "error  " << v.error << "\n";
            continue;
        }
        out << (v.pass ? "pass" : "fail") << "  valuation: ";
        if (v.difference_valuation.has_value())
            out << *v.difference_valuation;
        else
            out << "-";
        out << "  lhs_st: " << v.lhs_st.to_string()
            << "  rhs_st: " << v.rhs_st.to_string() << "\n";
    }
    out << "  outcome: " << (r.expected_outcome_met ? "as expected" : "UNEXPECTED")
        << "\n";
    return out.str();
}

std::string reports_to_text(const std::vector<IdentityReport>& rs) {
    std::string out;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i > 0) out += "\n";
        out += report_to_text(rs[i]);
    }
    return out;
}

std::string reports_to_json(const std::vector<IdentityReport>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) arr.push_back(report_to_json(r));
    return arr.dump(2) + "\n";
}

}  // namespace diffalg
