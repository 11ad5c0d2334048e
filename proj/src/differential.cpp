#include "diffalg/differential.hpp"

#include <vector>

#include "diffalg/derivative.hpp"
#include "diffalg/error.hpp"

namespace diffalg {

bool DiffConfig::is_elementary(const std::string& name) const {
    return name == "sin" || name == "cos" || name == "exp" || name == "ln";
}

Expr DiffConfig::elementary_derivative(const std::string& name, const Expr& arg) const {
    if (name == "sin") return Expr::func("cos", {arg});
    if (name == "cos") return -Expr::func("sin", {arg});
    if (name == "exp") return Expr::func("exp", {arg});
    if (name == "ln") return Expr::pow(arg, -1);
    throw UnknownFunction("no derivative rule for function " + name);
}

namespace {

// The derivation core. vary == nullptr lets every variable change.
Expr d_core(const Expr& e, const std::set<std::string>* vary, const DiffConfig& cfg) {
    const auto varies = [&](const std::string& n) { return !vary || vary->count(n) != 0; };
    switch (e.kind()) {
        case ExprKind::constant:
            return Expr();
        case ExprKind::var:
            return varies(e.name()) ? Expr::diff_atom(e.name()) : Expr();
        case ExprKind::diff_atom:
            if (!varies(e.name())) return Expr();
            if (e.order() >= cfg.max_order)
                throw OrderGuardExceeded("differential order would exceed the guard of " +
                                         std::to_string(cfg.max_order));
            return Expr::diff_atom(e.name(), e.order() + 1);
        case ExprKind::deriv_atom: {
            // Derivative nodes are definitional shorthand: unfold into the
            // differential ratio, then differentiate the unfolded form.
            ExpandConfig ecfg;
            ecfg.diff = cfg;
            return d_core(expand_derivative(e.target(), e.name(), e.order(), ecfg),
                          vary, cfg);
        }
        case ExprKind::partial_atom:
            throw UnsupportedDifferential(
                "second-order partial differentials are not supported");
        case ExprKind::func: {
            if (cfg.is_elementary(e.name())) {
                if (e.operands().size() != 1)
                    throw Error("elementary function " + e.name() + " expects one argument");
                const Expr& u = e.operands().front();
                return cfg.elementary_derivative(e.name(), u) * d_core(u, vary, cfg);
            }
            std::vector<Expr> parts;
            for (const auto& a : e.operands()) {
                if (a.kind() != ExprKind::var)
                    throw UnsupportedDifferential(
                        "arguments of the opaque function " + e.name() +
                        " must be plain variables to differentiate");
                if (!varies(a.name())) continue;
                parts.push_back(Expr::partial_atom(e, {a.name()}));
            }
            return Expr::add(std::move(parts));
        }
        case ExprKind::pow: {
            const Expr& u = e.base();
            const Rational& r = e.exponent();
            return Expr::constant(r) * Expr::pow(u, r - 1) * d_core(u, vary, cfg);
        }
        case ExprKind::mul: {
            const auto& fs = e.operands();
            std::vector<Expr> terms;
            terms.reserve(fs.size());
            for (std::size_t i = 0; i < fs.size(); ++i) {
                std::vector<Expr> copy = fs;
                copy[i] = d_core(fs[i], vary, cfg);
                terms.push_back(Expr::mul(std::move(copy)));
            }
            return Expr::add(std::move(terms));
        }
        case ExprKind::add: {
            std::vector<Expr> terms;
            terms.reserve(e.operands().size());
            for (const auto& t : e.operands()) terms.push_back(d_core(t, vary, cfg));
            return Expr::add(std::move(terms));
        }
    }
    return Expr();
}

}  // namespace

Expr differential(const Expr& e, const DiffConfig& cfg) {
    return normalize(d_core(normalize(e), nullptr, cfg));
}

Expr nth_differential(const Expr& e, int n, const DiffConfig& cfg) {
    if (n < 0) throw Error("differential count must be nonnegative");
    Expr acc = normalize(e);
    for (int i = 0; i < n; ++i) acc = normalize(d_core(acc, nullptr, cfg));
    return acc;
}

Expr partial_differential(const Expr& e, const std::set<std::string>& vary,
                          const DiffConfig& cfg) {
    if (vary.empty())
        throw VaryVarNotArgument("the vary set of a partial differential is empty");
    const Expr n = normalize(e);
    if (n.kind() == ExprKind::func && !cfg.is_elementary(n.name())) {
        std::set<std::string> args;
        for (const auto& a : n.operands()) {
            if (a.kind() != ExprKind::var)
                throw UnsupportedDifferential("arguments of the opaque function " + n.name() +
                                              " must be plain variables to differentiate");
            args.insert(a.name());
        }
        for (const auto& v : vary)
            if (args.count(v) == 0)
                throw VaryVarNotArgument("variable " + v + " is not an argument of " +
                                         n.name());
        if (vary.size() == args.size())  // every argument varies: total differential
            return differential(n, cfg);
        return normalize(
            Expr::partial_atom(n, std::vector<std::string>(vary.begin(), vary.end())));
    }
    const auto fv = free_vars(n);
    for (const auto& v : vary)
        if (fv.count(v) == 0)
            throw VaryVarNotArgument("variable " + v + " does not occur in the expression");
    return normalize(d_core(n, &vary, cfg));
}

Expr total_differential(const Expr& e, const DiffConfig& cfg) { return differential(e, cfg); }

Expr principal_reduce(const Expr& e) {
    const Expr n = normalize(e);
    if (n.kind() != ExprKind::add) return n;
    std::vector<std::pair<Integer, Expr>> graded;
    graded.reserve(n.operands().size());
    for (const auto& t : n.operands()) {
        const auto g = grade(t);
        if (!g)
            throw Error("principal reduction needs every term to have a definite grade");
        graded.emplace_back(*g, t);
    }
    Integer min_grade = graded.front().first;
    for (const auto& [g, t] : graded)
        if (g < min_grade) min_grade = g;
    std::vector<Expr> kept;
    for (auto& [g, t] : graded)
        if (g == min_grade) kept.push_back(std::move(t));
    return Expr::add(std::move(kept));
}

}  // namespace diffalg
