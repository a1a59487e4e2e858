#include "atomic/calculus.hpp"
#include "atomic/family.hpp"
#include "atomic/hilbert.hpp"
#include "atomic/semantics.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace atomic;

namespace {

// 0 valid, 1 checked and invalid, 2 input error
enum Exit { kValid = 0, kInvalid = 1, kInput = 2 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int connective(const Lang& L, const std::string& name) {
    int c = L.find(name);
    if (c < 0) throw InputError("family " + L.base.name + " has no connective " + name);
    return c;
}

std::string skeleton_text(const SkeletonD& d, const std::string& format) {
    return format == "c" ? iota_inv(d).str() : d.str();
}

std::string world_set(const Model& m, const TupleSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : s) {
        out += first ? "" : ", ";
        first = false;
        if (t.size() == 1) {
            out += m.worlds[t[0]];
            continue;
        }
        out += "(";
        for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + m.worlds[t[i]];
        out += ")";
    }
    return out + "}";
}

struct Options {
    std::string family, conn, elem, action, calculus = "asl", deriv, seq, path, model, expr, to = "dual", target,
        sign = "+", proof, format = "d";
};

int cmd_act(const Options& o) {
    Lang L(load_family(o.family));
    const int c = connective(L, o.conn);
    SemiElem g = parse_semi(o.elem);
    const auto& sk = L.conn(c).sk;
    if (static_cast<int>(g.vec.size()) != sk.m()) throw InputError("element acts on arity " + std::to_string(g.vec.size() - 1));
    SkeletonD out = act_semidirect(g, sk);
    std::cout << skeleton_text(out, o.format) << "\n";
    const int named = L.with_sk(L.cell(c), out);
    if (named >= 0) std::cout << "connective " << L.conn(named).name << "\n";
    return kValid;
}

int cmd_orbit(const Options& o) {
    Lang L(load_family(o.family));
    const int c = connective(L, o.conn);
    const ActionKind a = o.action.empty() ? L.full.cells[L.cell(c)].action : parse_action(o.action);
    auto orb = orbit_under(a, L.conn(c).sk);
    for (const auto& d : orb) std::cout << skeleton_text(d, o.format) << "\n";
    return kValid;
}

int cmd_rules(const Options& o) {
    Lang L(load_family(o.family));
    for (const auto& r : rule_schemas(L, find_calculus(o.calculus))) std::cout << r << "\n";
    return kValid;
}

int cmd_check(const Options& o) {
    Lang L(load_family(o.family));
    Derivation d = parse_derivation(L, slurp(o.deriv));
    auto r = check_derivation(L, d, find_calculus(o.calculus));
    if (!r) {
        std::cout << "invalid at " << r.path << ": " << r.message << "\n";
        return kInvalid;
    }
    auto open = open_leaves(d);
    std::cout << "valid: " << print_sequent(L, d.concl) << "\n";
    std::cout << "size " << deriv_size(d) << ", height " << deriv_height(d) << ", open leaves " << open.size() << "\n";
    for (const auto& s : open) std::cout << "open " << print_sequent(L, s) << "\n";
    return kValid;
}

int cmd_display(const Options& o) {
    Lang L(load_family(o.family));
    Sequent s = parse_sequent(L, o.seq);
    OccPath p = parse_path(o.path);
    if (!resolve(s, p)) throw InputError("path " + o.path + " does not address a substructure");
    Derivation d = display(L, s, p);
    std::cout << print_derivation(L, d);
    return kValid;
}

int cmd_interpolate(const Options& o) {
    Lang L(load_family(o.family));
    Derivation d = parse_derivation(L, slurp(o.deriv));
    auto r = check_derivation(L, d, find_calculus(o.calculus));
    if (!r) {
        std::cout << "invalid at " << r.path << ": " << r.message << "\n";
        return kInvalid;
    }
    Interpolant in;
    try {
        in = compute_interpolant(L, d);
    } catch (const std::invalid_argument& e) {
        std::cout << "no interpolant: " << e.what() << "\n";
        return kInvalid;
    }
    std::cout << "interpolant " << print_term(L, in.chi) << "\n";
    std::cout << print_derivation(L, in.left) << print_derivation(L, in.right);
    return kValid;
}

int cmd_modelcheck(const Options& o) {
    Lang L(load_family(o.family));
    Model m = parse_model(slurp(o.model));
    auto problems = validate_model(L, m);
    if (!problems.empty()) throw InputError("model does not fit the family: " + problems.front());
    if (o.expr.find("|-") != std::string::npos) {
        Sequent s = parse_sequent(L, o.expr);
        if (!is_formula(s.lhs) || !is_formula(s.rhs)) throw InputError("model checking needs a sequent of formulas");
        const bool ok = check_sequent(L, m, s);
        std::cout << (ok ? "valid" : "invalid") << "\n";
        if (!ok) {
            auto l = interpret(L, m, s.lhs), r = interpret(L, m, s.rhs);
            TupleSet bad;
            for (const auto& t : l)
                if (!r.count(t)) bad.insert(t);
            std::cout << "fails at " << world_set(m, bad) << "\n";
        }
        return ok ? kValid : kInvalid;
    }
    Term phi = parse_formula(L, o.expr);
    std::cout << world_set(m, interpret(L, m, phi)) << "\n";
    return kValid;
}

int cmd_translate(const Options& o) {
    Lang L(load_family(o.family));
    Term phi = parse_formula(L, o.expr);
    if (o.to == "dual") {
        if (o.sign != "+" && o.sign != "-") throw InputError("--sign is + or -");
        std::unique_ptr<Lang> T;
        if (!o.target.empty()) T = std::make_unique<Lang>(load_family(o.target));
        const Lang& out = T ? *T : L;
        std::cout << print_term(out, translate_dual(L, phi, o.sign == "-" ? 1 : 0, T.get())) << "\n";
        return kValid;
    }
    if (o.target.empty()) throw InputError("--to full needs --target FAMILY");
    Lang T(load_family(o.target));
    std::cout << print_term(T, translate_to_full(L, T, phi)) << "\n";
    return kValid;
}

int cmd_hilbert(const Options& o) {
    Lang L(load_family(o.family));
    HilbertProof p = parse_hilbert(L, slurp(o.proof));
    auto r = check_hilbert(L, p);
    if (!r) {
        std::cout << "invalid at line " << r.line << ": " << r.message << "\n";
        return kInvalid;
    }
    std::cout << "valid: " << p.lines.size() << " lines, " << r.hypotheses << " hypotheses\n";
    if (!p.lines.empty()) std::cout << "proves " << print_term(L, p.lines.back().formula) << "\n";
    return kValid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atomic logics: skeleton actions, display calculi, Hilbert proofs and finite models"};
    app.require_subcommand(1, 1);
    Options o;

    auto fam = [&](CLI::App* s) { s->add_option("-f,--family", o.family, "built-in family name or family file")->required(); };
    auto fmt = [&](CLI::App* s) { s->add_option("--format", o.format, "skeleton syntax")->check(CLI::IsMember({"c", "d"})); };
    auto calc = [&](CLI::App* s) { s->add_option("--calculus", o.calculus, "asl, dl, fl, ggl0 or boolean"); };

    auto* act = app.add_subcommand("act", "apply a group element to a connective's skeleton");
    fam(act);
    act->add_option("-c,--conn", o.conn)->required();
    act->add_option("-g,--elem", o.elem, "element ((bits),[perm])")->required();
    fmt(act);

    auto* orbit = app.add_subcommand("orbit", "list the orbit of a connective's skeleton");
    fam(orbit);
    orbit->add_option("-c,--conn", o.conn)->required();
    orbit->add_option("--action", o.action, "action name; defaults to the cell's action");
    fmt(orbit);

    auto* rules = app.add_subcommand("rules", "print the generated rule schemas");
    fam(rules);
    calc(rules);

    auto* check = app.add_subcommand("check", "check a derivation file");
    fam(check);
    check->add_option("-d,--deriv", o.deriv)->required();
    calc(check);

    auto* disp = app.add_subcommand("display", "display a substructure occurrence");
    fam(disp);
    disp->add_option("-s,--sequent", o.seq)->required();
    disp->add_option("-p,--path", o.path, "occurrence path such as l.2.1")->required();

    auto* interp = app.add_subcommand("interpolate", "compute an interpolant of a derivation's conclusion");
    fam(interp);
    interp->add_option("-d,--deriv", o.deriv)->required();
    calc(interp);

    auto* mc = app.add_subcommand("modelcheck", "evaluate a formula or sequent in a finite model");
    fam(mc);
    mc->add_option("-m,--model", o.model)->required();
    mc->add_option("-e,--expr", o.expr, "formula, or sequent with |-")->required();

    auto* tr = app.add_subcommand("translate", "translate a formula");
    fam(tr);
    tr->add_option("-e,--expr", o.expr)->required();
    tr->add_option("--to", o.to)->check(CLI::IsMember({"dual", "full"}));
    tr->add_option("--target", o.target, "target family");
    tr->add_option("--sign", o.sign, "+ or - (dual translation)");

    auto* hc = app.add_subcommand("hilbert-check", "check a Hilbert proof file");
    fam(hc);
    hc->add_option("-p,--proof", o.proof)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*act) return cmd_act(o);
        if (*orbit) return cmd_orbit(o);
        if (*rules) return cmd_rules(o);
        if (*check) return cmd_check(o);
        if (*disp) return cmd_display(o);
        if (*interp) return cmd_interpolate(o);
        if (*mc) return cmd_modelcheck(o);
        if (*tr) return cmd_translate(o);
        if (*hc) return cmd_hilbert(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kInput;
}
