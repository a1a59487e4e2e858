#include <doctest.h>

#include "atomic/syntax.hpp"

#include <random>

using namespace atomic;

namespace {

const Lang& lambek() {
    static Lang L(builtin_family("lambek"));
    return L;
}

const char* kGrammar = R"(family grammar
cell prod action alpha_varsigma
  conn otimes skeleton perm [1,2,3] types (1,1,1) tone (+,+,+) s -
  conn rres   skeleton perm [1,3,2] types (1,1,1) tone (-,+,-) s -
  conn lres   skeleton perm [3,2,1] types (1,1,1) tone (+,-,-) s -
cell cats action trivial
  conn S  skeleton perm [1] types (1) tone (+) s +
  conn N  skeleton perm [1] types (1) tone (+) s +
  conn NP skeleton perm [1] types (1) tone (+) s +
)";

Term random_formula(const Lang& L, std::mt19937& rng, int depth) {
    const char* bins[] = {"otimes", "rres", "lres"};
    const char* lets[] = {"p", "q"};
    if (depth == 0 || rng() % 3 == 0) return mk_letter(L, lets[rng() % 2]);
    int c = L.find(bins[rng() % 3]);
    return mk_f(L, c, {random_formula(L, rng, depth - 1), random_formula(L, rng, depth - 1)});
}

}  // namespace

TEST_CASE("formula and sequent round trips") {
    const auto& L = lambek();
    auto f = parse_formula(L, "otimes(p, q)");
    CHECK(f->kind == Kind::F);
    CHECK(f->kids.size() == 2);
    CHECK(print_term(L, f) == "otimes(p, q)");

    auto s = parse_sequent(L, "[otimes](p, q) |- R");
    CHECK(s.lhs->kind == Kind::S);
    CHECK(s.rhs->kind == Kind::Var);
    CHECK(print_sequent(L, s) == "p[otimes]q |- R");
    CHECK(parse_sequent(L, print_sequent(L, s)) == s);
    CHECK(parse_sequent(L, "p[otimes]q ⊢ R") == s);

    auto nested = parse_sequent(L, "(X[otimes]*p)[otimes]Y |- Z[lres]rres(p, q)");
    CHECK(parse_sequent(L, print_sequent(L, nested)) == nested);

    std::mt19937 rng(7);
    for (int k = 0; k < 200; ++k) {
        auto g = random_formula(L, rng, 4);
        CHECK(term_eq(parse_formula(L, print_term(L, g)), g));
    }
}

TEST_CASE("generated closure names parse") {
    const auto& L = lambek();
    auto t = parse_structure(L, "[otimes.((0,0,0),[2,1,3])](X, Y)");
    CHECK(L.conn(t->conn).name == "otimes.((0,0,0),[2,1,3])");
    auto f = parse_formula(L, "otimes.( (0,0,0) , [2,1,3] )(p, q)");
    CHECK(L.conn(f->conn).name == "otimes.((0,0,0),[2,1,3])");
}

TEST_CASE("linguistics sentence round trips") {
    Lang G(parse_family(kGrammar));
    // NP ⊗ (((NP\S)/NP) ⊗ ((NP/N) ⊗ (N ⊗ (((N\N)/NP) ⊗ ((NP/N) ⊗ N)))))
    const char* text =
        "otimes(NP, otimes(lres(rres(NP, S), NP), otimes(lres(NP, N), otimes(N, otimes(lres(rres(N, N), NP), "
        "otimes(lres(NP, N), N))))))";
    auto f = parse_formula(G, text);
    CHECK(print_term(G, f) == text);
    CHECK(connective_count(f) == 25);
    auto s = parse_sequent(G, std::string(text) + " |- S");
    CHECK(parse_sequent(G, print_sequent(G, s)) == s);
}

TEST_CASE("parse errors carry positions") {
    const auto& L = lambek();
    CHECK_THROWS_AS(parse_formula(L, "otimes(p)"), ParseError);
    CHECK_THROWS_AS(parse_formula(L, "frob(p, q)"), ParseError);
    CHECK_THROWS_AS(parse_formula(L, "[otimes](p, q)"), ParseError);
    CHECK_THROWS_AS(parse_sequent(L, "p q"), ParseError);
    try {
        parse_formula(L, "otimes(p, zz)");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.pos == 10);
    }
}

TEST_CASE("sign_of") {
    const auto& L = lambek();
    auto s = parse_sequent(L, "X[otimes]*Y |- Z[lres]W");
    CHECK(sign_of(L, s, parse_path("L")) == 1);
    CHECK(sign_of(L, s, parse_path("R")) == 0);
    CHECK(sign_of(L, s, parse_path("L.1")) == 1);
    CHECK(sign_of(L, s, parse_path("L.2")) == 1);
    CHECK(sign_of(L, s, parse_path("L.2.*")) == 0);  // inside a star on the lhs
    CHECK(sign_of(L, s, parse_path("R.1")) == 0);
    CHECK(sign_of(L, s, parse_path("R.2")) == 1);  // lres has tone − on its second input
    CHECK_THROWS(sign_of(L, s, parse_path("L.3")));
    CHECK(path_str(s, parse_path("L.2.*")) == "L.2.*");

    // oracle: antecedent parts by explicit recursion on the printed polarity of each input
    std::mt19937 rng(3);
    for (int k = 0; k < 50; ++k) {
        auto a = random_formula(L, rng, 3);
        Sequent q{a, a};
        for (const auto& p : occurrences(q, true)) {
            int flips = 0;
            Term cur = p.side ? q.rhs : q.lhs;
            for (int st : p.steps) {
                const auto& n = L.conn(cur->conn).name;
                if ((n == "rres" && st == 0) || (n == "lres" && st == 1)) ++flips;
                cur = cur->kids[st];
            }
            CHECK(sign_of(L, q, p) == static_cast<Bit>((p.side ? 0 : 1) ^ (flips & 1)));
        }
    }
}

TEST_CASE("star normalization") {
    const auto& L = lambek();
    auto phi = parse_formula(L, "otimes(p, q)");
    auto sp = star(L, phi);
    CHECK(sp->kind == Kind::Star);
    CHECK(term_eq(star(L, sp), phi));

    auto x = parse_structure(L, "X[otimes]Y");
    auto sx = star(L, x);
    CHECK(sx->kind == Kind::S);
    CHECK(L.conn(sx->conn).sk == act_beta(1, L.conn(x->conn).sk));
    CHECK(term_eq(star(L, sx), x));

    auto pl = parse_structure(L, "[p]");
    auto spl = star(L, pl);
    CHECK(spl->kind == Kind::Star);
    CHECK(term_eq(star(L, spl), pl));
    CHECK(print_term(L, spl) == "*[p]");
    CHECK(term_eq(parse_structure(L, "**X[otimes]Y"), parse_structure(L, "X[otimes]Y")));

    // typing survives star
    Lang B(builtin_family("boolean(2)"));
    auto t = parse_structure(B, "[top]");
    CHECK(star(B, t)->type == t->type);
}

TEST_CASE("tau") {
    const auto& L = lambek();
    auto phi = parse_formula(L, "rres(p, q)");
    CHECK(term_eq(tau(L, phi), phi));
    CHECK(term_eq(tau(L, parse_structure(L, "[otimes](p, q)")), parse_formula(L, "otimes(p, q)")));
    CHECK(term_eq(tau(L, parse_structure(L, "(p[otimes]q)[otimes]p")), parse_formula(L, "otimes(otimes(p, q), p)")));
    // [lres] is proper in the consequent; its second input is an antecedent part
    CHECK(term_eq(tau(L, parse_structure(L, "p[lres](q[otimes]p)")), parse_formula(L, "lres(p, otimes(q, p))")));
    CHECK_THROWS(tau(L, parse_structure(L, "X[otimes]p")));
    CHECK_THROWS(tau(L, parse_structure(L, "p[otimes](p[otimes]q)"), 0));

    Lang B(builtin_family("boolean"));
    auto t = tau(B, parse_structure(B, "*[and](p, q)"));
    CHECK(print_term(B, t) == "and.((1,1,1),[1,2,3])(p, q)");  // the star lives in the label
    CHECK(print_term(B, tau(B, parse_structure(B, "*[p]"))) == "neg(p)");
    CHECK_THROWS(tau(B, parse_structure(B, "[and](p, q)"), 0));
}

TEST_CASE("substitution and collection") {
    const auto& L = lambek();
    auto x = parse_structure(L, "X[otimes]*X");
    auto phi = parse_structure(L, "Y[otimes]Z");
    auto r = subst_var(L, x, var_id("X"), phi);
    CHECK(r->kids[0]->kind == Kind::S);
    CHECK(r->kids[1]->kind == Kind::S);  // the star folds into the label
    std::vector<int> vs;
    collect_vars(r, vs);
    CHECK(vs.size() == 4);
}
