// hwb: command-line front end for the group-ring workbench.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hw/cases.hpp"
#include "hw/derivation.hpp"
#include "hw/error.hpp"
#include "hw/expr.hpp"
#include "hw/json_io.hpp"
#include "hw/oracle.hpp"
#include "hw/words.hpp"

using namespace hw;

namespace {

struct Opts {
    long level = 0;
    int weight = 2;
    int depth = 6;
    bool json_out = false;
    double tol = 1e-8;
    long terms = 4000;
    int max_len = 12;
    int points = 5;
    std::vector<int> hecke;
    std::vector<std::string> invariants;
    std::string gens = "T,H";
    std::string target;
    std::string input;
    std::string relation;
    std::string case_name = "all";
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExprContext context(const Opts& o)
{
    ExprContext c;
    c.level = o.level;
    c.weight = o.weight;
    return c;
}

// An expression argument is either inline text or a file: JSON files hold the
// element form, anything else is read as expression text.
Element load_element(const std::string& arg, const Opts& o)
{
    std::ifstream probe(arg);
    if (!probe) return parse_element(arg, context(o));
    const std::string text = read_file(arg);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            return element_from_json(json::parse(text));
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::Parse, arg + ": " + e.what());
        }
    }
    return parse_element(text, context(o));
}

HypothesisSet hypotheses(const Opts& o)
{
    if (o.level <= 0) throw Error(ErrorKind::InvalidArgument, "--level is required");
    HypothesisSet hyp(o.level, o.weight, o.depth);
    for (const auto& s : o.invariants) hyp.add_invariant(parse_matrix_expr(s, context(o)));
    for (int n : o.hecke) hyp.assume_hecke(n);
    return hyp;
}

std::vector<NamedGen> named_gens(const std::string& list, const Opts& o)
{
    std::vector<NamedGen> gens;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty()) gens.push_back({name, parse_matrix_expr(name, context(o))});
    if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "--gens is empty");
    return gens;
}

json error_json(const Error& e)
{
    json j;
    j["kind"] = std::string(to_string(e.kind()));
    j["message"] = e.what();
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
        j["reason"] = p->reason();
        j["line"] = p->line();
        j["column"] = p->column();
    }
    return json{{"ok", false}, {"error", j}};
}

json run_json(const RunResult& r)
{
    json j;
    j["case"] = r.name;
    j["title"] = r.title;
    j["ok"] = r.ok;
    if (!r.error.empty()) {
        j["error"] = r.error;
        if (r.error_kind) j["error_kind"] = std::string(to_string(*r.error_kind));
    }
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"step", c.step}, {"what", c.what}, {"ok", c.ok}, {"detail", c.detail}});
    j["checks"] = checks;
    j["flags"] = r.flags;
    j["log"] = to_json(r.log, r.level);
    return j;
}

int cmd_classify(const Opts& o)
{
    const ProjMatrix m = parse_matrix_expr(o.input, context(o));
    const MatrixClass c = classify(m);
    if (o.json_out) {
        json j = to_json(c);
        j["matrix"] = to_json(m);
        if (o.level > 0) j["in_gamma0"] = in_gamma0(m, o.level);
        std::cout << json{{"ok", true}, {"result", j}}.dump(2) << "\n";
    } else {
        std::cout << to_normalized_string(m, o.level) << "\n" << c.describe() << "\n";
        if (o.level > 0) std::cout << (in_gamma0(m, o.level) ? "in" : "not in") << " Gamma_0(" << o.level << ")\n";
    }
    return 0;
}

int cmd_simplify(const Opts& o)
{
    const HypothesisSet hyp = hypotheses(o);
    const Element x = load_element(o.input, o);
    const Element r = hyp.reduce(x);
    if (o.json_out)
        std::cout << json{{"ok", true}, {"input", to_json(x)}, {"reduced", to_json(r)}}.dump(2) << "\n";
    else
        std::cout << r.to_string(o.level) << "\n";
    return 0;
}

int cmd_derive(const Opts& o)
{
    RunOptions ro;
    if (o.depth != 6) ro.depth = o.depth;
    const RunResult r = run_script(read_file(o.input), o.input, ro);
    if (o.json_out) std::cout << run_json(r).dump(2) << "\n";
    else std::cout << to_text(r);
    return r.ok ? 0 : 1;
}

int cmd_word_search(const Opts& o)
{
    if (o.level <= 0) throw Error(ErrorKind::InvalidArgument, "--level is required");
    const auto gens = named_gens(o.gens, o);
    const ProjMatrix target = parse_matrix_expr(o.target, context(o));
    const auto w = word_search(target, gens, o.max_len);
    if (o.json_out) {
        json j{{"ok", true}, {"target", to_json(target)}, {"found", w.has_value()}};
        if (w) {
            j["word"] = to_string(*w, gens);
            j["length"] = w->size();
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (w ? to_string(*w, gens) : "no word up to length " + std::to_string(o.max_len)) << "\n";
    }
    return w ? 0 : 1;
}

int cmd_numeric_check(Opts o)
{
    if (o.level == 0) o.level = 11;
    if (o.level != 11 || o.weight != 2)
        throw Error(ErrorKind::InvalidArgument, "the numeric oracle covers level 11, weight 2 only");
    const Element x = load_element(o.relation, o);
    const QExpansion f = eta_square_11(o.terms);
    const int sign = measure_fricke_sign(f);
    const auto pts = sample_points(o.points);
    const ResidualReport rep = check_relation(f, x, pts, sign);
    const bool ok = rep.max_residual < o.tol;
    json rows = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i)
        rows.push_back({{"re", pts[i].real()}, {"im", pts[i].imag()}, {"residual", rep.residuals[i]}});
    const json j{{"ok", ok},
                 {"fricke_sign", sign},
                 {"tol", o.tol},
                 {"max_residual", rep.max_residual},
                 {"max_truncation", rep.max_truncation},
                 {"points", rows}};
    if (o.json_out) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "measured Fricke sign " << sign << "\n";
        for (const auto& r : rows)
            std::cout << "z = " << r["re"].get<double>() << " + " << r["im"].get<double>()
                      << "i  residual " << r["residual"].get<double>() << "\n";
        std::cout << (ok ? "PASS" : "FAIL") << " max residual " << rep.max_residual << " (tol " << o.tol << ")\n";
    }
    return ok ? 0 : 1;
}

int cmd_verify_paper(const Opts& o)
{
    RunOptions ro;
    if (o.depth != 6) ro.depth = o.depth;
    std::vector<std::string> names;
    if (o.case_name != "all") names.push_back(o.case_name);
    const auto results = run_cases(names, ro);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.ok ? 1 : 0;
    if (o.json_out) {
        json cases = json::array();
        for (const auto& r : results) cases.push_back(run_json(r));
        std::cout << json{{"ok", passed == results.size()}, {"passed", passed}, {"total", results.size()},
                          {"cases", cases}}
                         .dump(2)
                  << "\n";
    } else {
        for (const auto& r : results) std::cout << to_text(r) << "\n";
        std::cout << passed << "/" << results.size() << " PASS\n";
    }
    return passed == results.size() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact group-ring workbench for Hecke relations"};
    app.require_subcommand(1);
    Opts o;

    auto common = [&o](CLI::App* s) {
        s->add_option("--level", o.level, "Level N");
        s->add_option("--weight", o.weight, "Weight k")->capture_default_str();
        s->add_option("--depth", o.depth, "Search depth for reduction")->capture_default_str();
        s->add_flag("--json", o.json_out, "Emit JSON");
    };

    auto* classify_cmd = app.add_subcommand("classify", "Classify a matrix");
    classify_cmd->add_option("matrix", o.input, "Matrix, e.g. \"[1 -2/3; 11/2 -8/3]\"")->required();
    common(classify_cmd);

    auto* simplify_cmd = app.add_subcommand("simplify", "Reduce an element under the hypotheses");
    simplify_cmd->add_option("expr", o.input, "Expression text or file (JSON element or text)")->required();
    simplify_cmd->add_option("--hecke", o.hecke, "Assumed Hecke eigen-relations")->delimiter(',');
    simplify_cmd->add_option("--invariants", o.invariants, "Assumed invariants beyond T")->delimiter(',');
    common(simplify_cmd);

    auto* derive_cmd = app.add_subcommand("derive", "Run a derivation script");
    derive_cmd->add_option("script", o.input, "TOML script")->required()->check(CLI::ExistingFile);
    common(derive_cmd);

    auto* word_cmd = app.add_subcommand("word-search", "Shortest word for a matrix");
    word_cmd->add_option("--target", o.target, "Target matrix")->required();
    word_cmd->add_option("--gens", o.gens, "Comma-separated generators")->capture_default_str();
    word_cmd->add_option("--max-len", o.max_len, "Maximum word length")->capture_default_str();
    common(word_cmd);

    auto* numeric_cmd = app.add_subcommand("numeric-check", "Evaluate a relation on the level 11 newform");
    numeric_cmd->add_option("--relation", o.relation, "Expression text or file")->required();
    numeric_cmd->add_option("--points", o.points, "Number of sample points")->capture_default_str();
    numeric_cmd->add_option("--tol", o.tol, "Residual tolerance")->capture_default_str();
    numeric_cmd->add_option("--terms", o.terms, "Length of the q-expansion")->check(CLI::Range(20L, 200000L))->capture_default_str();
    common(numeric_cmd);

    auto* verify_cmd = app.add_subcommand("verify-paper", "Run the built-in derivations");
    verify_cmd->add_option("--case", o.case_name, "Case name or 'all'")->capture_default_str();
    common(verify_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify_cmd) return cmd_classify(o);
        if (*simplify_cmd) return cmd_simplify(o);
        if (*derive_cmd) return cmd_derive(o);
        if (*word_cmd) return cmd_word_search(o);
        if (*numeric_cmd) return cmd_numeric_check(o);
        if (*verify_cmd) return cmd_verify_paper(o);
    } catch (const Error& e) {
        if (o.json_out) std::cout << error_json(e).dump(2) << "\n";
        else std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return 1;
    }
    return 2;
}
