#include <doctest.h>

#include "atomic/search.hpp"

#include <random>

using namespace atomic;

namespace {

const Lang& lambek() {
    static Lang L(builtin_family("lambek"));
    return L;
}

Sequent sq(const char* t) { return parse_sequent(lambek(), t); }

Term random_formula(std::mt19937& rng, int depth) {
    const Lang& L = lambek();
    const char* bins[] = {"otimes", "rres", "lres"};
    if (depth == 0 || rng() % 3 == 0) return mk_letter(L, rng() % 2 ? "p" : "q");
    int c = L.find(bins[rng() % 3]);
    return mk_f(L, c, {random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
}

// pairs of depth ≤ 3 with at most 8 connectives; half of them instances of known theorem shapes
std::vector<Sequent> sample_pairs(int count, unsigned seed) {
    const Lang& L = lambek();
    std::mt19937 rng(seed);
    const int ot = L.find("otimes"), rr = L.find("rres"), lr = L.find("lres");
    std::vector<Sequent> out;
    while (static_cast<int>(out.size()) < count) {
        Sequent s;
        if (rng() % 2) {
            s = {random_formula(rng, 3), random_formula(rng, 3)};
        } else {
            Term a = random_formula(rng, 1), b = random_formula(rng, 1);
            switch (rng() % 6) {
                case 0: s = {a, a}; break;
                case 1: s = {mk_f(L, ot, {a, mk_f(L, rr, {a, b})}), b}; break;
                case 2: s = {mk_f(L, ot, {mk_f(L, lr, {a, b}), b}), a}; break;
                case 3: s = {a, mk_f(L, lr, {b, mk_f(L, rr, {a, b})})}; break;
                case 4: s = {a, mk_f(L, rr, {mk_f(L, lr, {b, a}), b})}; break;
                default: s = {mk_f(L, ot, {a, b}), mk_f(L, ot, {a, b})}; break;
            }
        }
        if (formula_depth(s.lhs) > 3 || formula_depth(s.rhs) > 3) continue;
        if (connective_count(s.lhs) + connective_count(s.rhs) - 2 > 8) continue;  // letters are counted
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("FL search on textbook sequents") {
    const Lang& L = lambek();
    struct Case {
        const char* s;
        bool ok;
    };
    const Case cases[] = {
        {"otimes(p, rres(p, q)) |- q", true},
        {"otimes(lres(q, p), p) |- q", true},
        {"p |- lres(q, rres(p, q))", true},
        {"p |- rres(lres(q, p), q)", true},
        {"otimes(p, q) |- otimes(q, p)", false},
        {"otimes(otimes(p, q), p) |- otimes(p, otimes(q, p))", false},
        {"p |- q", false},
        {"lres(p, q) |- lres(lres(p, q), q)", false},
    };
    for (const auto& c : cases) {
        CAPTURE(c.s);
        auto d = prove_fl(L, sq(c.s));
        CHECK(d.has_value() == c.ok);
        if (d) {
            CHECK(d->concl == sq(c.s));
            CHECK(check_derivation(L, *d, calc_fl()).ok);
        }
    }
}

TEST_CASE("FL monotonicity lemma") {
    const Lang& L = lambek();
    auto xa = prove_fl(L, sq("otimes(p, rres(p, q)) |- q"));
    auto yb = prove_fl(L, sq("p |- lres(q, rres(p, q))"));
    REQUIRE(xa);
    REQUIRE(yb);
    Derivation m = fl_monotone(L, *xa, *yb);
    CHECK(m.concl == sq("otimes(otimes(p, rres(p, q)), p) |- otimes(q, lres(q, rres(p, q)))"));
    CHECK(check_derivation(L, m, calc_fl()).ok);
}

TEST_CASE("linguistics sentence is an FL theorem") {
    static Lang L(builtin_family("grammar"));
    auto sq = [&](const char* t) { return parse_sequent(L, t); };
    // NP (NP\S)/NP NP/N N (N\N)/NP NP/N N  ⊢  S
    Sequent s = sq(
        "otimes(NP, otimes(lres(rres(NP, S), NP), otimes(lres(NP, N), otimes(N, otimes(lres(rres(N, N), NP), "
        "otimes(lres(NP, N), N)))))) |- S");
    SearchOptions o;
    o.max_depth = 40;
    auto d = prove_fl(L, s, o);
    REQUIRE(d);
    CHECK(check_derivation(L, *d, calc_fl()).ok);
    CHECK(!open_leaves(*d).size());
    // a wrong bracketing of the same words fails
    Sequent bad = sq(
        "otimes(otimes(NP, lres(rres(NP, S), NP)), otimes(lres(NP, N), otimes(N, otimes(lres(rres(N, N), NP), "
        "otimes(lres(NP, N), N))))) |- S");
    CHECK_FALSE(prove_fl(L, bad, o));
}

TEST_CASE("DL and ASL searches produce checking derivations") {
    const Lang& L = lambek();
    SearchOptions restricted;
    restricted.labels = base_labels(L);
    for (const char* t : {"otimes(p, rres(p, q)) |- q", "p |- lres(q, rres(p, q))", "lres(p, q) |- lres(p, q)"}) {
        CAPTURE(t);
        auto dl = prove_dl(L, sq(t));
        REQUIRE(dl);
        CHECK(check_derivation(L, *dl, calc_dl()).ok);
        auto asl = prove_asl(L, sq(t), restricted);
        REQUIRE(asl);
        CHECK(check_derivation(L, *asl, calc_asl()).ok);
        CHECK_FALSE(uses_cut(*asl));
    }
    CHECK_FALSE(prove_dl(L, sq("otimes(p, q) |- otimes(q, p)")));
    CHECK_FALSE(prove_asl(L, sq("otimes(p, q) |- otimes(q, p)"), restricted));
}

TEST_CASE("ASL over every label agrees with the fragment search") {
    const Lang& L = lambek();
    SearchOptions restricted;
    restricted.labels = base_labels(L);
    SearchOptions all;
    int proved = 0;
    for (const auto& s : sample_pairs(30, 7)) {
        if (connective_count(s.lhs) + connective_count(s.rhs) > 6) continue;
        CAPTURE(print_sequent(L, s));
        auto a = prove_asl(L, s, restricted);
        SearchStats st;
        auto b = prove_asl(L, s, all, &st);
        REQUIRE_FALSE(st.out_of_budget);
        CHECK(a.has_value() == b.has_value());
        if (b) {
            ++proved;
            CHECK(check_derivation(L, *b, calc_asl()).ok);
        }
    }
    CHECK(proved > 0);
}

TEST_CASE("FL, DL and ASL theorem sets coincide at desk scale") {
    const Lang& L = lambek();
    SearchOptions o;
    SearchOptions restricted;
    restricted.labels = base_labels(L);
    int agree = 0, theorems = 0;
    for (const auto& s : sample_pairs(200, 2024)) {
        CAPTURE(print_sequent(L, s));
        SearchStats s1, s2, s3;
        auto fl = prove_fl(L, s, o, &s1);
        auto dl = prove_dl(L, s, o, &s2);
        auto asl = prove_asl(L, s, restricted, &s3);
        REQUIRE_FALSE(s1.out_of_budget);
        REQUIRE_FALSE(s2.out_of_budget);
        REQUIRE_FALSE(s3.out_of_budget);
        CHECK(fl.has_value() == dl.has_value());
        CHECK(dl.has_value() == asl.has_value());
        if (fl.has_value() == dl.has_value() && dl.has_value() == asl.has_value()) ++agree;
        if (fl) {
            ++theorems;
            CHECK(check_derivation(L, *fl, calc_fl()).ok);
            CHECK(check_derivation(L, *dl, calc_dl()).ok);
            CHECK(check_derivation(L, *asl, calc_asl()).ok);
        }
    }
    CHECK(agree == 200);
    CHECK(theorems >= 50);
}
