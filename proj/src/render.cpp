#include <sstream>
#include <string>
#include <vector>

#include "diffalg/expr.hpp"

namespace diffalg {

namespace {

// ---- plain text ---------------------------------------------------------------

std::string rt(const Expr& e);

bool is_negative_constant(const Expr& e) {
    return e.kind() == ExprKind::constant && e.constant_value() < 0;
}

std::string rt_pow_base(const Expr& b) {
    switch (b.kind()) {
        case ExprKind::add:
        case ExprKind::mul:
        case ExprKind::pow:
            return "(" + rt(b) + ")";
        case ExprKind::constant:
            if (b.constant_value() < 0 || !is_integer(b.constant_value()))
                return "(" + rt(b) + ")";
            return rt(b);
        default:
            return rt(b);
    }
}

std::string rt_factor(const Expr& f, bool first) {
    if (f.kind() == ExprKind::add) return "(" + rt(f) + ")";
    if (!first && is_negative_constant(f)) return "(" + rt(f) + ")";
    return rt(f);
}

std::string exponent_text(const Rational& r) { return to_string(r); }

// Splits a leading negative coefficient off a term so sums can be joined
// with " - " instead of printing "+ -2*x".
std::pair<bool, std::string> rt_signed(const Expr& t) {
    if (is_negative_constant(t)) return {true, to_string(-t.constant_value())};
    if (t.kind() == ExprKind::mul && !t.operands().empty() &&
        is_negative_constant(t.operands().front())) {
        const Rational mag = -t.operands().front().constant_value();
        std::vector<Expr> rest(t.operands().begin() + 1, t.operands().end());
        if (mag != 1) rest.insert(rest.begin(), Expr::constant(mag));
        return {true, rt(Expr::mul(std::move(rest)))};
    }
    return {false, rt(t)};
}

std::string rt(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant:
            return to_string(e.constant_value());
        case ExprKind::var:
            return e.name();
        case ExprKind::diff_atom: {
            std::string s = "d[" + e.name();
            if (e.order() > 1) s += "," + std::to_string(e.order());
            return s + "]";
        }
        case ExprKind::partial_atom: {
            std::string s = "pd[" + e.target().name();
            for (const auto& v : e.vary()) s += "," + v;
            return s + "]";
        }
        case ExprKind::deriv_atom: {
            std::string s = "D[" + rt(e.target()) + ";" + e.name();
            if (e.order() > 1) s += ";" + std::to_string(e.order());
            return s + "]";
        }
        case ExprKind::func: {
            std::string s = e.name() + "(";
            for (std::size_t i = 0; i < e.operands().size(); ++i) {
                if (i) s += ", ";
                s += rt(e.operands()[i]);
            }
            return s + ")";
        }
        case ExprKind::pow:
            return rt_pow_base(e.base()) + "^" + exponent_text(e.exponent());
        case ExprKind::mul: {
            std::string s;
            for (std::size_t i = 0; i < e.operands().size(); ++i) {
                if (i) s += "*";
                s += rt_factor(e.operands()[i], i == 0);
            }
            return s;
        }
        case ExprKind::add: {
            std::string s;
            for (std::size_t i = 0; i < e.operands().size(); ++i) {
                const auto [neg, mag] = rt_signed(e.operands()[i]);
                if (i == 0)
                    s += neg ? "-" + mag : mag;
                else
                    s += (neg ? " - " : " + ") + mag;
            }
            return s;
        }
    }
    return {};
}

// ---- LaTeX --------------------------------------------------------------------

std::string lx(const Expr& e);

std::string lx_rational(const Rational& r) {
    const bool neg = r < 0;
    const Rational m = neg ? Rational(-r) : r;
    std::string body;
    if (is_integer(m))
        body = numerator(m).str();
    else
        body = "\\frac{" + numerator(m).str() + "}{" + denominator(m).str() + "}";
    return neg ? "-" + body : body;
}

const char* latex_func_command(const std::string& name) {
    if (name == "sin") return "\\sin";
    if (name == "cos") return "\\cos";
    if (name == "tan") return "\\tan";
    if (name == "exp") return "\\exp";
    if (name == "ln") return "\\ln";
    return nullptr;
}

std::string lx_pow_base(const Expr& b) {
    switch (b.kind()) {
        case ExprKind::add:
        case ExprKind::mul:
        case ExprKind::pow:
            return "\\left(" + lx(b) + "\\right)";
        case ExprKind::constant:
            if (b.constant_value() < 0 || !is_integer(b.constant_value()))
                return "\\left(" + lx(b) + "\\right)";
            return lx(b);
        default:
            return lx(b);
    }
}

std::string lx_exponent(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return lx_rational(r);
}

std::string lx_simple_pow(const Expr& base, const Rational& exp) {
    if (exp == 1) return lx(base);
    return lx_pow_base(base) + "^{" + lx_exponent(exp) + "}";
}

// Renders a product as a single fraction, moving negative powers into the
// denominator.
std::string lx_product(Rational coeff, const std::vector<Expr>& factors) {
    std::vector<std::string> num, den;
    for (const auto& f : factors) {
        if (f.kind() == ExprKind::pow && f.exponent() < 0)
            den.push_back(lx_simple_pow(f.base(), -f.exponent()));
        else if (f.kind() == ExprKind::constant)
            coeff *= f.constant_value();
        else if (f.kind() == ExprKind::add)
            num.push_back("\\left(" + lx(f) + "\\right)");
        else
            num.push_back(lx(f));
    }
    std::string sign = coeff < 0 ? "-" : "";
    if (coeff < 0) coeff = -coeff;
    if (!is_integer(coeff)) {
        den.push_back(denominator(coeff).str());
        coeff = Rational(numerator(coeff));
    }
    std::string num_s;
    if (coeff != 1 || num.empty()) num_s = numerator(coeff).str();
    for (const auto& p : num) {
        if (!num_s.empty()) num_s += "\\,";
        num_s += p;
    }
    std::string den_s;
    for (const auto& p : den) {
        if (!den_s.empty()) den_s += "\\,";
        den_s += p;
    }
    if (den_s.empty()) return sign + num_s;
    return sign + "\\frac{" + num_s + "}{" + den_s + "}";
}

std::pair<bool, std::string> lx_signed(const Expr& t) {
    if (t.kind() == ExprKind::constant) {
        const bool neg = t.constant_value() < 0;
        const Rational m = neg ? Rational(-t.constant_value()) : t.constant_value();
        return {neg, lx_rational(m)};
    }
    if (t.kind() == ExprKind::mul) {
        std::string s = lx_product(1, t.operands());
        if (!s.empty() && s.front() == '-') return {true, s.substr(1)};
        return {false, std::move(s)};
    }
    if (t.kind() == ExprKind::pow && t.exponent() < 0)
        return {false, lx_product(1, {t})};
    return {false, lx(t)};
}

std::string lx(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant:
            return lx_rational(e.constant_value());
        case ExprKind::var:
            return e.name();
        case ExprKind::diff_atom: {
            std::string s = "\\mathrm{d}";
            if (e.order() > 1) s += "^{" + std::to_string(e.order()) + "}";
            return s + e.name();
        }
        case ExprKind::partial_atom: {
            std::string s = "\\partial_{";
            for (std::size_t i = 0; i < e.vary().size(); ++i) {
                if (i) s += ",";
                s += e.vary()[i];
            }
            return s + "} " + lx(e.target());
        }
        case ExprKind::deriv_atom: {
            std::string s = "D";
            if (e.order() > 1) s += "^{" + std::to_string(e.order()) + "}";
            s += "_{" + e.name() + "}";
            const Expr& t = e.target();
            if (t.kind() == ExprKind::add || t.kind() == ExprKind::mul)
                return s + "\\left(" + lx(t) + "\\right)";
            return s + " " + lx(t);
        }
        case ExprKind::func: {
            const char* cmd = latex_func_command(e.name());
            std::string s = cmd ? cmd : e.name().c_str();
            s += "(";
            for (std::size_t i = 0; i < e.operands().size(); ++i) {
                if (i) s += ", ";
                s += lx(e.operands()[i]);
            }
            return s + ")";
        }
        case ExprKind::pow:
            if (e.exponent() < 0) return lx_product(1, {e});
            return lx_simple_pow(e.base(), e.exponent());
        case ExprKind::mul:
            return lx_product(1, e.operands());
        case ExprKind::add: {
            std::string s;
            for (std::size_t i = 0; i < e.operands().size(); ++i) {
                const auto [neg, mag] = lx_signed(e.operands()[i]);
                if (i == 0)
                    s += neg ? "-" + mag : mag;
                else
                    s += (neg ? " - " : " + ") + mag;
            }
            return s;
        }
    }
    return {};
}

}  // namespace

std::string render_text(const Expr& e) { return rt(e); }

std::string render_latex(const Expr& e) { return lx(e); }

}  // namespace diffalg
