#include "diffalg/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diffalg/derivative.hpp"
#include "diffalg/differential.hpp"
#include "diffalg/error.hpp"
#include "diffalg/expr.hpp"
#include "diffalg/parse.hpp"
#include "diffalg/verify.hpp"

namespace diffalg {

namespace {

using Json = nlohmann::ordered_json;

// Problems a subcommand can only discover itself (bad paths, bad flag
// combinations); reported like usage errors.
struct UsageFailure {
    std::string message;
};

struct Token {
    std::string text;
    std::size_t column;  // 1-based
};

std::vector<Token> lex_line(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const unsigned char c = static_cast<unsigned char>(line[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
               line[j] != '#')
            ++j;
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

Rational rational_token(const Token& t, std::size_t line_start, std::size_t line_no) {
    try {
        return Rational(t.text);
    } catch (const std::exception&) {
        throw ParseError(line_start + t.column - 1, line_no, t.column, "a rational number",
                         "'" + t.text + "'");
    }
}

}  // namespace

JetFile parse_jet_file(const std::string& src) {
    struct BodyLine {
        std::string func;
        std::string expr_src;
        std::size_t offset;
        std::size_t line;
        std::size_t column;
    };
    struct PolyLine {
        std::size_t offset;
        std::size_t line;
        std::size_t column;
    };

    // Declaration statements are passed through to parse_decls with blank
    // lines holding the place of jet lines, so its positions match the file.
    std::string decl_src;
    std::map<std::string, std::vector<Rational>> polys;
    std::map<std::string, PolyLine> poly_positions;
    std::vector<BodyLine> bodies;
    std::optional<Rational> at_point;

    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= src.size()) {
        const auto nl = src.find('\n', pos);
        const std::size_t end = (nl == std::string::npos) ? src.size() : nl;
        const std::string line = src.substr(pos, end - pos);
        const std::size_t line_start = pos;
        ++line_no;

        const auto toks = lex_line(line);
        if (toks.empty()) {
            decl_src += "\n";
        } else if (toks[0].text == "base" || toks[0].text == "var" ||
                   toks[0].text == "depends" || toks[0].text == "function") {
            decl_src += line;
            decl_src += "\n";
        } else if (toks[0].text == "poly") {
            if (toks.size() < 3)
                throw ParseError(line_start + toks[0].column - 1, line_no, toks[0].column,
                                 "poly <var> <coefficients...>", "end of line");
            const auto& var = toks[1].text;
            if (polys.count(var))
                throw ParseError(line_start + toks[1].column - 1, line_no, toks[1].column,
                                 "one poly per variable", "a second poly for '" + var + "'");
            std::vector<Rational> coeffs;
            for (std::size_t k = 2; k < toks.size(); ++k)
                coeffs.push_back(rational_token(toks[k], line_start, line_no));
            polys.emplace(var, std::move(coeffs));
            poly_positions[var] = {line_start + toks[1].column - 1, line_no, toks[1].column};
            decl_src += "\n";
        } else if (toks[0].text == "at") {
            if (at_point.has_value())
                throw ParseError(line_start + toks[0].column - 1, line_no, toks[0].column,
                                 "a single at line", "a second 'at'");
            std::size_t k = 1;
            if (toks.size() >= 2 && toks[1].text == "q0") k = 2;
            if (toks.size() != k + 1)
                throw ParseError(line_start + toks[0].column - 1, line_no, toks[0].column,
                                 "at [q0] <rational>", "end of line");
            at_point = rational_token(toks[k], line_start, line_no);
            decl_src += "\n";
        } else if (toks[0].text == "body") {
            if (toks.size() < 3)
                throw ParseError(line_start + toks[0].column - 1, line_no, toks[0].column,
                                 "body <function> <expression>", "end of line");
            std::string rest = line.substr(toks[1].column - 1 + toks[1].text.size());
            const auto hash = rest.find('#');
            if (hash != std::string::npos) rest = rest.substr(0, hash);
            bodies.push_back(
                {toks[1].text, std::move(rest), line_start, line_no, toks[1].column});
            decl_src += "\n";
        } else {
            throw ParseError(line_start + toks[0].column - 1, line_no, toks[0].column,
                             "base, var, depends, function, poly, at, or body",
                             "'" + toks[0].text + "'");
        }

        if (nl == std::string::npos) break;
        pos = nl + 1;
    }

    JetFile jf;
    jf.decls = parse_decls(decl_src);
    for (const auto& [var, where] : poly_positions) {
        if (jf.decls.base && *jf.decls.base == var)
            throw ParseError(where.offset, where.line, where.column, "a dependent variable",
                             "a poly for the base '" + var + "'");
        if (!jf.decls.vars.count(var))
            throw ParseError(where.offset, where.line, where.column, "a declared variable",
                             "'" + var + "'");
    }
    for (const auto& b : bodies) {
        if (!jf.decls.is_function(b.func))
            throw ParseError(b.offset, b.line, b.column, "a declared function",
                             "'" + b.func + "'");
        if (jf.assignment.bodies.count(b.func))
            throw ParseError(b.offset, b.line, b.column, "one body per function",
                             "a second body for '" + b.func + "'");
        jf.assignment.bodies.emplace(b.func, parse_expr(b.expr_src, jf.decls));
    }
    jf.assignment.polys = std::move(polys);
    if (at_point) jf.assignment.q0 = std::move(*at_point);
    return jf;
}

namespace {

struct CliOptions {
    std::string decls_path;
    int trunc = kDefaultTruncOrder;
    std::uint64_t seed = 0;
    int count = 5;
    bool latex = false;
    bool structured = false;
};

JetFile load_jet_file(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw UsageFailure{"cannot open '" + path + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_jet_file(buf.str());
}

void print_expr(const Expr& e, const CliOptions& opt, std::ostream& out) {
    if (opt.structured) {
        Json j;
        j["text"] = render_text(e);
        j["latex"] = render_latex(e);
        out << j.dump(2) << "\n";
    } else {
        out << (opt.latex ? render_latex(e) : render_text(e)) << "\n";
    }
}

int cmd_eval(const std::string& expr_src, const JetFile& jf, const CliOptions& opt,
             std::ostream& out) {
    JetAssignment a = jf.assignment;
    a.trunc_order = opt.trunc;
    const auto value = eval_jet(parse_expr(expr_src, jf.decls), a, jf.decls);
    const auto st = value.standard_part();
    const auto pt = value.principal_part();
    if (opt.structured) {
        Json j;
        j["value"] = value.to_string();
        j["st"] = st.to_string();
        j["pt"] = pt.to_string();
        out << j.dump(2) << "\n";
    } else {
        out << value.to_string() << "\n";
        out << "st: " << st.to_string() << "\n";
        out << "pt: " << pt.to_string() << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& name, const CliOptions& opt, std::ostream& out) {
    std::vector<IdentityReport> reports;
    if (name == "all")
        reports = run_identity_suite(opt.seed, opt.count);
    else
        reports.push_back(run_identity(name, opt.seed, opt.count));
    out << (opt.structured ? reports_to_json(reports) : reports_to_text(reports));
    for (const auto& r : reports)
        if (!r.expected_outcome_met) return 1;
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Differential algebra over the truncated Levi-Civita field"};
    app.name("diffalg");

    CliOptions opt;
    app.add_option("--decls", opt.decls_path,
                   "Declaration file; for eval, a jet file with poly/at/body lines");
    app.add_option("--trunc", opt.trunc, "Truncation order (series exact modulo o(eps^M))")
        ->check(CLI::Range(3, 512));
    app.add_option("--seed", opt.seed, "Seed for random verification jets");
    app.add_option("--count", opt.count, "Random jets per identity")
        ->check(CLI::Range(0, 10000));
    app.add_flag("--latex", opt.latex, "Render expressions as LaTeX");
    app.add_flag("--structured", opt.structured, "Emit JSON instead of text");
    app.require_subcommand(1);

    std::string expr_src;
    std::string wrt;
    std::string identity_name;
    std::vector<std::string> vary;
    int order = 1;

    auto* diff = app.add_subcommand("diff", "n-th differential of an expression");
    diff->add_option("expr", expr_src, "Expression")->required();
    diff->add_option("-n,--order", order, "Differential order")->check(CLI::Range(1, 6));

    auto* derive = app.add_subcommand("derive", "Derivative expanded into differential ratios");
    derive->add_option("expr", expr_src, "Expression")->required();
    derive->add_option("--wrt", wrt, "Variable the derivative is taken with respect to")
        ->required();
    derive->add_option("-n,--order", order, "Derivative order");

    auto* partial = app.add_subcommand("partial", "Partial differential over chosen variables");
    partial->add_option("expr", expr_src, "Expression")->required();
    partial->add_option("--vary", vary, "Comma-separated variables allowed to change")
        ->required()
        ->delimiter(',');

    auto* eval = app.add_subcommand("eval", "Evaluate on the jet bound by --decls");
    eval->add_option("expr", expr_src, "Expression")->required();

    auto* verify = app.add_subcommand("verify", "Check a named identity, or 'all'");
    verify->add_option("identity", identity_name, "Identity name or 'all'")->required();

    auto* render = app.add_subcommand("render", "Parse, normalize, and print");
    render->add_option("expr", expr_src, "Expression")->required();

    for (auto* sub : {diff, derive, partial, eval, verify, render}) sub->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const JetFile jf = load_jet_file(opt.decls_path);
        if (app.got_subcommand(diff)) {
            print_expr(nth_differential(parse_expr(expr_src, jf.decls), order), opt, out);
            return 0;
        }
        if (app.got_subcommand(derive)) {
            print_expr(expand_derivative(parse_expr(expr_src, jf.decls), wrt, order), opt,
                       out);
            return 0;
        }
        if (app.got_subcommand(partial)) {
            const std::set<std::string> vary_set(vary.begin(), vary.end());
            print_expr(partial_differential(parse_expr(expr_src, jf.decls), vary_set), opt,
                       out);
            return 0;
        }
        if (app.got_subcommand(render)) {
            print_expr(parse_expr(expr_src, jf.decls), opt, out);
            return 0;
        }
        if (app.got_subcommand(eval)) return cmd_eval(expr_src, jf, opt, out);
        return cmd_verify(identity_name, opt, out);
    } catch (const UsageFailure& e) {
        err << "error: " << e.message << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownFunction& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownIdentity& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnboundVariable& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnboundFunction& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const VaryVarNotArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CyclicDependency& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DuplicateDeclaration& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace diffalg
