#include "diffalg/jet.hpp"

#include <algorithm>
#include <utility>

#include "diffalg/derivative.hpp"
#include "diffalg/error.hpp"

namespace diffalg {

namespace {

using LC = LeviCivitaNumber;

// Exponents past this cost more memory than any sane evaluation needs.
constexpr long kMaxEvalExponent = 65536;

struct Context {
    const JetAssignment& a;
    const DependencyDecls& decls;
    std::map<std::string, std::vector<Rational>> composed;
};

std::vector<Rational> poly_compose(const std::vector<Rational>& outer,
                                   const std::vector<Rational>& inner) {
    std::vector<Rational> acc;
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) {
        // acc = acc * inner + coefficient
        std::vector<Rational> next(acc.empty() ? 1 : acc.size() + inner.size() - 1,
                                   Rational(0));
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < inner.size(); ++j)
                next[i + j] += acc[i] * inner[j];
        next[0] += *it;
        acc = std::move(next);
    }
    return acc;
}

bool is_base(const Context& ctx, const std::string& name) {
    return ctx.decls.base && *ctx.decls.base == name;
}

const std::vector<Rational>& composed_poly(Context& ctx, const std::string& name) {
    if (const auto it = ctx.composed.find(name); it != ctx.composed.end())
        return it->second;
    if (is_base(ctx, name)) {
        if (ctx.a.polys.count(name))
            throw Error("the base variable " + name + " cannot carry a polynomial");
        return ctx.composed.emplace(name, std::vector<Rational>{0, 1}).first->second;
    }
    const auto poly = ctx.a.polys.find(name);
    if (poly == ctx.a.polys.end())
        throw UnboundVariable("no polynomial for variable " + name);
    const auto dep = ctx.decls.depends.find(name);
    if (dep != ctx.decls.depends.end() && dep->second.size() > 1)
        throw Error("variable " + name +
                    " depends on several variables; a jet needs a single chain");
    std::vector<Rational> result;
    if (const auto parent = ctx.decls.parent_of(name))
        result = poly_compose(poly->second, composed_poly(ctx, *parent));
    else
        result = poly->second;  // already a base-variable polynomial
    return ctx.composed.emplace(name, std::move(result)).first->second;
}

// Value of the variable after `shift` whole steps of the base variable.
LC var_at(Context& ctx, const std::string& name, int shift) {
    const auto& poly = composed_poly(ctx, name);
    const LC point = LC::from_rational(ctx.a.q0) +
                     LC::monomial(Rational(shift), 1);
    LC value;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        value = value * point + LC::from_rational(*it);
    return value;
}

Integer binomial(int n, int k) {
    Integer r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

LC eval_at(Context& ctx, const Expr& e, int shift,
           const std::map<std::string, LC>* overrides);

// Increment of an expression over one whole step of the base variable.
LC increment(Context& ctx, const Expr& e, int shift) {
    return eval_at(ctx, e, shift + 1, nullptr) - eval_at(ctx, e, shift, nullptr);
}

LC apply_body(Context& ctx, const std::string& fname,
              const std::vector<LC>& arg_values) {
    const auto body = ctx.a.bodies.find(fname);
    if (body == ctx.a.bodies.end())
        throw UnboundFunction("no body bound for function " + fname +
                              "; exact evaluation needs one");
    const auto& formals = ctx.decls.function_args(fname);
    if (formals.size() != arg_values.size())
        throw Error("function " + fname + " applied to " +
                    std::to_string(arg_values.size()) + " arguments but declared with " +
                    std::to_string(formals.size()));
    std::map<std::string, LC> bound;
    for (std::size_t i = 0; i < formals.size(); ++i)
        bound.emplace(formals[i], arg_values[i]);
    return eval_at(ctx, body->second, 0, &bound);
}

LC eval_at(Context& ctx, const Expr& e, int shift,
           const std::map<std::string, LC>* overrides) {
    switch (e.kind()) {
        case ExprKind::constant:
            return LC::from_rational(e.constant_value());
        case ExprKind::var: {
            if (overrides) {
                const auto it = overrides->find(e.name());
                if (it == overrides->end())
                    throw UnboundVariable("function body references " + e.name() +
                                          ", which is not a formal of the function");
                return it->second;
            }
            return var_at(ctx, e.name(), shift);
        }
        case ExprKind::diff_atom: {
            if (overrides)
                throw Error("differentials are not allowed inside function bodies");
            const int n = e.order();
            LC sum;
            for (int i = 0; i <= n; ++i) {
                const LC term = var_at(ctx, e.name(), shift + i) *
                                LC::from_rational(Rational(binomial(n, i)));
                sum = (n - i) % 2 == 0 ? sum + term : sum - term;
            }
            return sum;
        }
        case ExprKind::partial_atom: {
            if (overrides)
                throw Error("differentials are not allowed inside function bodies");
            const Expr& app = e.target();
            std::vector<LC> stepped, still;
            stepped.reserve(app.operands().size());
            still.reserve(app.operands().size());
            const auto& vary = e.vary();
            for (const auto& arg : app.operands()) {
                if (arg.kind() != ExprKind::var)
                    throw Error("partial increments need plain variable arguments");
                const bool moves = std::find(vary.begin(), vary.end(), arg.name()) !=
                                   vary.end();
                stepped.push_back(var_at(ctx, arg.name(), moves ? shift + 1 : shift));
                still.push_back(var_at(ctx, arg.name(), shift));
            }
            return apply_body(ctx, app.name(), stepped) -
                   apply_body(ctx, app.name(), still);
        }
        case ExprKind::deriv_atom: {
            if (overrides)
                throw Error("differentials are not allowed inside function bodies");
            if (e.order() == 1) {
                const LC dw = var_at(ctx, e.name(), shift + 1) -
                              var_at(ctx, e.name(), shift);
                return increment(ctx, e.target(), shift) *
                       dw.inverse(ctx.a.trunc_order);
            }
            return eval_at(ctx, expand_derivative(e.target(), e.name(), e.order()),
                           shift, nullptr);
        }
        case ExprKind::func: {
            std::vector<LC> values;
            values.reserve(e.operands().size());
            for (const auto& arg : e.operands())
                values.push_back(eval_at(ctx, arg, shift, overrides));
            return apply_body(ctx, e.name(), values);
        }
        case ExprKind::pow: {
            const LC base = eval_at(ctx, e.base(), shift, overrides);
            const Rational& r = e.exponent();
            if (abs(numerator(r)) > kMaxEvalExponent)
                throw Error("exponent " + to_string(r) + " is too large to evaluate exactly");
            if (is_integer(r)) return base.pow(numerator(r), ctx.a.trunc_order);
            return base.pow(r, ctx.a.trunc_order);
        }
        case ExprKind::mul: {
            LC prod = LC::from_rational(1);
            for (const auto& f : e.operands())
                prod = prod * eval_at(ctx, f, shift, overrides);
            return prod;
        }
        case ExprKind::add: {
            LC sum;
            for (const auto& t : e.operands())
                sum = sum + eval_at(ctx, t, shift, overrides);
            return sum;
        }
    }
    throw Error("unreachable expression kind");
}

int max_differential_order(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::var:
            return 0;
        case ExprKind::diff_atom:
            return e.order();
        case ExprKind::partial_atom:
            return 1;
        case ExprKind::deriv_atom:
            return std::max(e.order(), max_differential_order(e.target()));
        case ExprKind::pow:
            return max_differential_order(e.base());
        case ExprKind::func:
        case ExprKind::mul:
        case ExprKind::add: {
            int m = 0;
            for (const auto& c : e.operands())
                m = std::max(m, max_differential_order(c));
            return m;
        }
    }
    return 0;
}

}  // namespace

LeviCivitaNumber eval_jet(const Expr& e, const JetAssignment& a,
                          const DependencyDecls& decls) {
    decls.validate();
    const int needed = max_differential_order(e) + 2;
    if (a.trunc_order < needed)
        throw InsufficientTruncation(
            "truncation order " + std::to_string(a.trunc_order) +
            " is too small; the expression needs at least " + std::to_string(needed));
    Context ctx{a, decls, {}};
    return eval_at(ctx, e, 0, nullptr);
}

}  // namespace diffalg
