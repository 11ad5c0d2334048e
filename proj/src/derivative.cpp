#include "diffalg/derivative.hpp"

#include <utility>

#include "diffalg/error.hpp"

namespace diffalg {

namespace {

Expr wrt_inverse(const std::string& wrt) {
    return Expr::pow(Expr::diff_atom(wrt), Rational(-1));
}

Expr rewrite_atoms(const Expr& e, const ExpandConfig& cfg) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::var:
        case ExprKind::diff_atom:
            return e;
        case ExprKind::partial_atom:
            return Expr::partial_atom(rewrite_atoms(e.target(), cfg), e.vary());
        case ExprKind::deriv_atom:
            return expand_derivative(rewrite_atoms(e.target(), cfg), e.name(),
                                     e.order(), cfg);
        case ExprKind::func: {
            std::vector<Expr> args;
            args.reserve(e.operands().size());
            for (const auto& a : e.operands()) args.push_back(rewrite_atoms(a, cfg));
            return Expr::func(e.name(), std::move(args));
        }
        case ExprKind::pow:
            return Expr::pow(rewrite_atoms(e.base(), cfg), e.exponent());
        case ExprKind::mul:
        case ExprKind::add: {
            std::vector<Expr> parts;
            parts.reserve(e.operands().size());
            for (const auto& p : e.operands()) parts.push_back(rewrite_atoms(p, cfg));
            return e.kind() == ExprKind::mul ? Expr::mul(std::move(parts))
                                             : Expr::add(std::move(parts));
        }
    }
    throw Error("unreachable expression kind");
}

DependencyDecls inverse_decls(const std::string& y, const std::string& x) {
    DependencyDecls d;
    d.set_base("q");
    d.declare_depends(x, {"q"});
    d.declare_depends(y, {x});
    d.validate();
    return d;
}

DependencyDecls chain_decls(const std::string& y, const std::string& x,
                            const std::string& t) {
    DependencyDecls d;
    d.set_base("q");
    d.declare_depends(t, {"q"});
    d.declare_depends(x, {t});
    d.declare_depends(y, {x});
    d.validate();
    return d;
}

DependencyDecls multivariate_decls(const std::string& f,
                                   const std::vector<std::string>& vars,
                                   const std::string& t) {
    DependencyDecls d;
    d.set_base("q");
    d.declare_depends(t, {"q"});
    for (const auto& v : vars) d.declare_depends(v, {t});
    d.declare_function(f, vars);
    d.validate();
    return d;
}

Identity naive_chain_second(const std::string& y, const std::string& x,
                            const std::string& t) {
    // The second-derivative expansion composed with (dx/dt)^2 alone. The
    // correction term D1(y,x)*D2(t,x) is deliberately missing, so the two
    // sides disagree for any nonlinear composition.
    Identity id;
    id.name = "naive_chain2_counterexample";
    const Expr vy = Expr::var(y);
    const Expr vx = Expr::var(x);
    id.lhs = normalize(Expr::mul({expand_derivative(vy, x, 2),
                                  Expr::pow(expand_derivative(vx, t, 1), 2)}));
    id.rhs = expand_derivative(vy, t, 2);
    id.decls = chain_decls(y, x, t);
    id.mode = Identity::CheckMode::exact;
    id.expect_failure = true;
    return id;
}

Identity contradiction_identity() {
    // Collapsing both partial differentials of f(x(t), y(t)) into the one
    // symbol "change of f at fixed t" turns the chain rule into
    // df/dt = df/dt + df/dt; dividing by df/dt leaves 1 = 2.
    Identity id;
    id.name = "contradiction_1eq2";
    id.lhs = Expr::integer(1);
    id.rhs = Expr::integer(2);
    id.decls = multivariate_decls("f", {"x", "y"}, "t");
    id.mode = Identity::CheckMode::exact;
    id.expect_failure = true;
    return id;
}

Identity dxdx_identity(const std::string& x) {
    Identity id;
    id.name = "dxdx_zero";
    id.lhs = expand_derivative(Expr::var(x), x, 2);
    id.rhs = Expr();
    DependencyDecls d;
    d.set_base("q");
    d.declare_depends(x, {"q"});
    d.validate();
    id.decls = std::move(d);
    id.mode = Identity::CheckMode::exact;
    return id;
}

}  // namespace

Expr expand_derivative(const Expr& target, const std::string& wrt, int order,
                       const ExpandConfig& cfg) {
    if (order < 1)
        throw Error("derivative order must be at least 1, got " +
                    std::to_string(order));
    if (order > cfg.max_derivative_order)
        throw OrderGuardExceeded(
            "derivative order " + std::to_string(order) +
            " exceeds the expansion guard of " +
            std::to_string(cfg.max_derivative_order));
    const Expr dx_inv = wrt_inverse(wrt);
    Expr result = normalize(target);
    for (int k = 0; k < order; ++k)
        result = normalize(Expr::mul({differential(result, cfg.diff), dx_inv}));
    return result;
}

Expr expand_deriv_atoms(const Expr& e, const ExpandConfig& cfg) {
    return normalize(rewrite_atoms(e, cfg));
}

Identity inverse_first(const std::string& y, const std::string& x) {
    Identity id;
    id.name = "inverse1";
    id.lhs = expand_derivative(Expr::var(x), y, 1);
    id.rhs = normalize(Expr::pow(expand_derivative(Expr::var(y), x, 1), -1));
    id.decls = inverse_decls(y, x);
    id.mode = Identity::CheckMode::exact;
    return id;
}

Identity inverse_second(const std::string& y, const std::string& x) {
    Identity id;
    id.name = "inverse2";
    const Expr vy = Expr::var(y);
    id.lhs = normalize(
        Expr::mul({Expr::integer(-1), expand_derivative(vy, x, 2),
                   Expr::pow(expand_derivative(vy, x, 1), -3)}));
    id.rhs = expand_derivative(Expr::var(x), y, 2);
    id.decls = inverse_decls(y, x);
    id.mode = Identity::CheckMode::exact;
    return id;
}

Identity chain_second(const std::string& y, const std::string& x,
                      const std::string& t) {
    Identity id;
    id.name = "chain2";
    const Expr vy = Expr::var(y);
    const Expr vx = Expr::var(x);
    id.lhs = normalize(Expr::add(
        {Expr::mul({expand_derivative(vy, x, 2),
                    Expr::pow(expand_derivative(vx, t, 1), 2)}),
         Expr::mul({expand_derivative(vy, x, 1),
                    expand_derivative(vx, t, 2)})}));
    id.rhs = expand_derivative(vy, t, 2);
    id.decls = chain_decls(y, x, t);
    id.mode = Identity::CheckMode::exact;
    return id;
}

Identity chain_multivariate(const std::string& f,
                            const std::vector<std::string>& vars,
                            const std::string& t) {
    Identity id;
    id.name = "chain_multi";
    std::vector<Expr> formals;
    formals.reserve(vars.size());
    for (const auto& v : vars) formals.push_back(Expr::var(v));
    const Expr app = Expr::func(f, formals);
    const Expr dt_inv = wrt_inverse(t);

    std::vector<Expr> terms;
    terms.reserve(vars.size());
    for (const auto& v : vars)
        terms.push_back(Expr::mul({Expr::partial_atom(app, {v}), wrt_inverse(v),
                                   Expr::diff_atom(v), dt_inv}));
    id.lhs = Expr::add(std::move(terms));
    id.rhs = Expr::deriv_atom(app, t, 1);
    id.decls = multivariate_decls(f, vars, t);
    id.mode = Identity::CheckMode::leading_order;
    return id;
}

std::vector<Identity> identity_catalog() {
    std::vector<Identity> out;
    out.reserve(7);
    out.push_back(inverse_first("y", "x"));
    out.push_back(inverse_second("y", "x"));
    out.push_back(chain_second("y", "x", "t"));
    out.push_back(chain_multivariate("f", {"x", "y"}, "t"));
    out.push_back(naive_chain_second("y", "x", "t"));
    out.push_back(contradiction_identity());
    out.push_back(dxdx_identity("x"));
    return out;
}

Identity identity_by_name(const std::string& name) {
    for (auto& id : identity_catalog())
        if (id.name == name) return id;
    throw UnknownIdentity("no identity named " + name);
}

}  // namespace diffalg
