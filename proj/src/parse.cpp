#include "diffalg/parse.hpp"

#include <cctype>
#include <vector>

#include "diffalg/error.hpp"

namespace diffalg {

ParseError::ParseError(std::size_t offset_, std::size_t line_, std::size_t column_,
                       std::string expected_, std::string found_)
    : Error("parse error at line " + std::to_string(line_) + ", column " +
            std::to_string(column_) + ": expected " + expected_ + ", found " + found_),
      offset(offset_),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

namespace {

struct Token {
    enum class Kind {
        ident,
        integer,
        plus,
        minus,
        star,
        slash,
        caret,
        lparen,
        rparen,
        lbracket,
        rbracket,
        comma,
        semicolon,
        end
    };
    Kind kind;
    std::string text;
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

std::string token_desc(const Token& t) {
    return t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
}

// A leading zero would make the big-integer constructor read the digits as
// octal.
Integer parse_integer(const std::string& digits) {
    std::size_t i = 0;
    while (i + 1 < digits.size() && digits[i] == '0') ++i;
    return Integer(digits.substr(i));
}

[[noreturn]] void fail_at(const Token& t, const std::string& expected) {
    throw ParseError(t.offset, t.line, t.column, expected, token_desc(t));
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n') {
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        Token t;
        t.offset = i;
        t.line = line;
        t.column = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            t.kind = Token::Kind::ident;
            t.text = src.substr(i, j - i);
            col += j - i;
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::integer;
            t.text = src.substr(i, j - i);
            col += j - i;
            i = j;
        } else {
            switch (c) {
                case '+': t.kind = Token::Kind::plus; break;
                case '-': t.kind = Token::Kind::minus; break;
                case '*': t.kind = Token::Kind::star; break;
                case '/': t.kind = Token::Kind::slash; break;
                case '^': t.kind = Token::Kind::caret; break;
                case '(': t.kind = Token::Kind::lparen; break;
                case ')': t.kind = Token::Kind::rparen; break;
                case '[': t.kind = Token::Kind::lbracket; break;
                case ']': t.kind = Token::Kind::rbracket; break;
                case ',': t.kind = Token::Kind::comma; break;
                case ';': t.kind = Token::Kind::semicolon; break;
                default:
                    throw ParseError(i, line, col, "a valid token",
                                     "'" + std::string(1, c) + "'");
            }
            t.text = std::string(1, c);
            ++i;
            ++col;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::end;
    end.offset = src.size();
    end.line = line;
    end.column = col;
    out.push_back(std::move(end));
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const DependencyDecls& decls, const DiffConfig& cfg)
        : tokens_(std::move(tokens)), decls_(decls), cfg_(cfg) {}

    Expr parse() {
        Expr e = expr();
        if (peek().kind != Token::Kind::end) fail_at(peek(), "end of input");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    bool match(Token::Kind k) {
        if (peek().kind != k) return false;
        advance();
        return true;
    }

    const Token& expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k) fail_at(peek(), what);
        return advance();
    }

    Expr expr() {
        Expr acc = term();
        for (;;) {
            if (match(Token::Kind::plus))
                acc = acc + term();
            else if (match(Token::Kind::minus))
                acc = acc - term();
            else
                return acc;
        }
    }

    Expr term() {
        Expr acc = factor();
        for (;;) {
            if (match(Token::Kind::star))
                acc = acc * factor();
            else if (match(Token::Kind::slash))
                acc = acc * Expr::pow(factor(), -1);
            else
                return acc;
        }
    }

    Expr factor() {
        const bool neg = match(Token::Kind::minus);
        Expr a = atom();
        if (match(Token::Kind::caret)) a = Expr::pow(std::move(a), rational_literal(true));
        return neg ? -a : a;
    }

    Expr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::integer:
                return Expr::constant(rational_literal(false));
            case Token::Kind::lparen: {
                advance();
                Expr e = expr();
                expect(Token::Kind::rparen, "')'");
                return e;
            }
            case Token::Kind::ident:
                return ident_atom();
            default:
                fail_at(t, "an expression");
        }
    }

    Expr ident_atom() {
        const Token name = advance();
        const bool bracket = peek().kind == Token::Kind::lbracket;
        if (bracket && name.text == "d") return differential_bracket();
        if (bracket && name.text == "pd") return partial_bracket();
        if (bracket && name.text == "D") return derivative_bracket();
        if (peek().kind == Token::Kind::lparen) return application(name);
        if (cfg_.is_elementary(name.text) || decls_.is_function(name.text))
            fail_at(peek(), "'(' after the function name " + name.text);
        return Expr::var(name.text);
    }

    Expr differential_bracket() {
        expect(Token::Kind::lbracket, "'['");
        Expr inner = expr();
        int n = 1;
        if (match(Token::Kind::comma)) n = small_int("a differential order", 0);
        expect(Token::Kind::rbracket, "']'");
        return nth_differential(inner, n, cfg_);
    }

    Expr partial_bracket() {
        expect(Token::Kind::lbracket, "'['");
        const Token f = expect(Token::Kind::ident, "a function name");
        if (!decls_.is_function(f.text))
            throw UnknownFunction("function " + f.text + " is not declared");
        const auto& formals = decls_.function_args(f.text);
        std::vector<std::string> vary;
        expect(Token::Kind::comma, "','");
        do {
            const Token v = expect(Token::Kind::ident, "a variable name");
            bool known = false;
            for (const auto& formal : formals) known = known || formal == v.text;
            if (!known)
                throw VaryVarNotArgument("variable " + v.text + " is not an argument of " +
                                         f.text);
            for (const auto& seen : vary)
                if (seen == v.text) fail_at(v, "a distinct variable");
            vary.push_back(v.text);
        } while (match(Token::Kind::comma));
        expect(Token::Kind::rbracket, "']'");
        std::vector<Expr> args;
        args.reserve(formals.size());
        for (const auto& formal : formals) args.push_back(Expr::var(formal));
        return Expr::partial_atom(Expr::func(f.text, std::move(args)), std::move(vary));
    }

    Expr derivative_bracket() {
        expect(Token::Kind::lbracket, "'['");
        Expr target = expr();
        expect(Token::Kind::semicolon, "';'");
        const Token wrt = expect(Token::Kind::ident, "a variable name");
        int n = 1;
        if (match(Token::Kind::semicolon)) n = small_int("a derivative order", 1);
        expect(Token::Kind::rbracket, "']'");
        return Expr::deriv_atom(std::move(target), wrt.text, n);
    }

    Expr application(const Token& name) {
        expect(Token::Kind::lparen, "'('");
        std::vector<Expr> args{expr()};
        while (match(Token::Kind::comma)) args.push_back(expr());
        expect(Token::Kind::rparen, "')'");
        if (cfg_.is_elementary(name.text)) {
            if (args.size() != 1) fail_at(name, "one argument to " + name.text);
            return Expr::func(name.text, std::move(args));
        }
        if (!decls_.is_function(name.text))
            throw UnknownFunction("function " + name.text + " is not declared");
        const auto& formals = decls_.function_args(name.text);
        std::string shown = name.text + "(";
        for (std::size_t i = 0; i < formals.size(); ++i)
            shown += (i ? ", " : "") + formals[i];
        shown += ")";
        if (args.size() != formals.size())
            fail_at(name, "the declared application " + shown);
        for (std::size_t i = 0; i < formals.size(); ++i)
            if (args[i] != Expr::var(formals[i]))
                fail_at(name, "the declared application " + shown);
        return Expr::func(name.text, std::move(args));
    }

    Rational rational_literal(bool allow_sign) {
        const bool neg = allow_sign && match(Token::Kind::minus);
        const Token& num_tok = expect(Token::Kind::integer, "a number");
        const Integer num = parse_integer(num_tok.text);
        Rational r(num);
        if (peek().kind == Token::Kind::slash && peek(1).kind == Token::Kind::integer) {
            advance();
            const Token& den_tok = advance();
            const Integer den = parse_integer(den_tok.text);
            if (den == 0) fail_at(den_tok, "a nonzero denominator");
            r = Rational(num) / Rational(den);
        }
        return neg ? Rational(-r) : r;
    }

    int small_int(const std::string& what, int min) {
        const Token& t = expect(Token::Kind::integer, what);
        if (t.text.size() > 4) fail_at(t, what);
        const int v = std::stoi(t.text);
        if (v < min) fail_at(t, what);
        return v;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const DependencyDecls& decls_;
    const DiffConfig& cfg_;
};

}  // namespace

Expr parse_expr(const std::string& src, const DependencyDecls& decls, const DiffConfig& cfg) {
    Parser p(lex(src), decls, cfg);
    return normalize(p.parse());
}

namespace {

struct Word {
    std::string text;
    std::size_t column;  // 1-based
};

std::vector<Word> split_words(const std::string& line) {
    std::vector<Word> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

bool valid_ident(const std::string& s) {
    if (s.empty() || !ident_start(s[0])) return false;
    for (const char c : s)
        if (!ident_char(c)) return false;
    return true;
}

}  // namespace

DependencyDecls parse_decls(const std::string& src) {
    DependencyDecls decls;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    std::size_t start = 0;
    while (start <= src.size()) {
        const std::size_t nl = src.find('\n', start);
        std::string line =
            nl == std::string::npos ? src.substr(start) : src.substr(start, nl - start);
        offset = start;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto words = split_words(line);
        const auto word_error = [&](const Word& w, const std::string& expected) {
            throw ParseError(offset + w.column - 1, line_no, w.column, expected,
                             "'" + w.text + "'");
        };
        const auto require_idents = [&](std::size_t from) {
            for (std::size_t i = from; i < words.size(); ++i)
                if (!valid_ident(words[i].text)) word_error(words[i], "a name");
        };
        const auto end_error = [&](const std::string& expected) {
            throw ParseError(offset + line.size(), line_no, line.size() + 1, expected,
                             "end of line");
        };
        if (!words.empty()) {
            const auto& kw = words[0].text;
            if (kw == "base") {
                if (words.size() < 2) end_error("a parameter name");
                if (words.size() > 2) word_error(words[2], "end of line");
                require_idents(1);
                decls.set_base(words[1].text);
            } else if (kw == "var") {
                if (words.size() < 2) end_error("a variable name");
                if (words.size() > 2) word_error(words[2], "end of line");
                require_idents(1);
                decls.declare_var(words[1].text);
            } else if (kw == "depends") {
                if (words.size() < 3) end_error("a variable and its parents");
                require_idents(1);
                std::vector<std::string> parents;
                for (std::size_t i = 2; i < words.size(); ++i)
                    parents.push_back(words[i].text);
                decls.declare_depends(words[1].text, parents);
            } else if (kw == "function") {
                if (words.size() < 3) end_error("a function name and its arguments");
                require_idents(1);
                std::vector<std::string> formals;
                for (std::size_t i = 2; i < words.size(); ++i) {
                    for (const auto& seen : formals)
                        if (seen == words[i].text)
                            word_error(words[i], "a distinct argument name");
                    formals.push_back(words[i].text);
                }
                decls.declare_function(words[1].text, formals);
            } else {
                word_error(words[0],
                           "a declaration keyword (base, var, depends, function)");
            }
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    decls.validate();
    return decls;
}

}  // namespace diffalg
