#include <doctest.h>

#include "atomic/search.hpp"

#include <algorithm>
#include <random>

using namespace atomic;

namespace {

const Lang& lambek() {
    static Lang L(builtin_family("lambek"));
    return L;
}

const Lang& boolean() {
    static Lang L(builtin_family("boolean"));
    return L;
}

Sequent sq(const Lang& L, const char* t) { return parse_sequent(L, t); }

CalculusSpec asl_cut() {
    CalculusSpec s = calc_asl();
    s.cut = true;
    return s;
}

Term random_formula(const Lang& L, std::mt19937& rng, int depth) {
    const char* bins[] = {"otimes", "rres", "lres"};
    if (depth == 0 || rng() % 3 == 0) return mk_letter(L, rng() % 2 ? "p" : "q");
    int c = L.find(bins[rng() % 3]);
    return mk_f(L, c, {random_formula(L, rng, depth - 1), random_formula(L, rng, depth - 1)});
}

// theorems found by the fragment search, with their derivations
std::vector<Derivation> theorems(int count, unsigned seed) {
    const Lang& L = lambek();
    std::mt19937 rng(seed);
    SearchOptions o;
    o.labels = base_labels(L);
    const int ot = L.find("otimes"), rr = L.find("rres"), lr = L.find("lres");
    std::vector<Derivation> out;
    while (static_cast<int>(out.size()) < count) {
        Term a = random_formula(L, rng, 2), b = random_formula(L, rng, 1);
        Sequent s;
        switch (rng() % 5) {
            case 0: s = {mk_f(L, ot, {a, mk_f(L, rr, {a, b})}), b}; break;
            case 1: s = {mk_f(L, ot, {mk_f(L, lr, {b, a}), a}), b}; break;
            case 2: s = {a, mk_f(L, lr, {b, mk_f(L, rr, {a, b})})}; break;
            case 3: s = {a, mk_f(L, rr, {mk_f(L, lr, {b, a}), b})}; break;
            default: s = {random_formula(L, rng, 2), random_formula(L, rng, 2)}; break;
        }
        if (auto d = prove_asl(L, s, o)) out.push_back(std::move(*d));
    }
    return out;
}

bool labels_within(const Term& t, const std::set<int>& ok) {
    if (t->kind == Kind::S && !ok.count(t->conn)) return false;
    if (t->kind == Kind::F) return true;
    return std::all_of(t->kids.begin(), t->kids.end(), [&](const Term& k) { return labels_within(k, ok); });
}

bool labels_within(const Derivation& d, const std::set<int>& ok) {
    if (!labels_within(d.concl.lhs, ok) || !labels_within(d.concl.rhs, ok)) return false;
    return std::all_of(d.prem.begin(), d.prem.end(), [&](const Derivation& p) { return labels_within(p, ok); });
}

// every node at depth ≤ k, by pointer into a mutable tree
void nodes_upto(Derivation& d, int k, std::vector<Derivation*>& out) {
    out.push_back(&d);
    if (k == 0) return;
    for (auto& p : d.prem) nodes_upto(p, k - 1, out);
}

}  // namespace

TEST_CASE("dsr2 disappears from GGL_Boolean derivations") {
    const Lang& L = boolean();
    CalculusSpec with = calc_ggl_bool();
    with.dsr2 = true;
    const CalculusSpec without = calc_ggl_bool();
    std::mt19937 rng(5);
    const char* forms[] = {"p", "and(p, q)", "or(p, r)", "neg(q)", "imp(p, and(q, r))", "top"};
    int rewritten = 0;
    for (int t = 0; t < 60; ++t) {
        Term f = parse_formula(L, forms[rng() % 6]);
        Derivation d = derive_identity(L, f);
        for (int k = 0; k < 6; ++k) {
            const Sequent s = d.concl;
            Derivation next;
            switch (rng() % 3) {
                case 0: next = Derivation{{star(L, s.rhs), star(L, s.lhs)}, rl("dsr2"), {d}}; break;
                case 1: next = Derivation{{comma(L, 1, s.lhs, parse_formula(L, "q")), s.rhs}, rl("K"), {d}}; break;
                default:
                    if (s.lhs->kind != Kind::S || s.lhs->conn != L.and_) continue;
                    next = Derivation{{s.lhs->kids[0], comma(L, 0, s.rhs, star(L, s.lhs->kids[1]))}, rl("dr2"), {d}};
            }
            // dsr2 needs a side that is not a β-compatible structure
            if (!check_step(L, with, next.rule, {s}, next.concl)) d = next;
        }
        CAPTURE(print_derivation(L, d));
        REQUIRE(check_derivation(L, d, with).ok);
        Derivation e = eliminate_dsr2(L, d);
        CHECK(e.concl == d.concl);
        CHECK(count_rule(e, "dsr2") == 0);
        auto r = check_derivation(L, e, without);
        CHECK_MESSAGE(r.ok, r.path << " " << r.message);
        if (count_rule(d, "dsr2")) ++rewritten;
    }
    CHECK(rewritten > 30);
}

TEST_CASE("single dsr2 becomes the five structural steps") {
    const Lang& L = boolean();
    Derivation d{sq(L, "*q |- *p"), rl("dsr2"), {hyp(sq(L, "p |- q"))}};
    Derivation e = eliminate_dsr2(L, d);
    CHECK(deriv_size(e) == 6);
    const char* expect[] = {"IWI", "CI", "dr2c", "CI", "K", "hyp"};
    const Derivation* x = &e;
    for (const char* n : expect) {
        CHECK(x->rule.name == n);
        if (!x->prem.empty()) x = &x->prem[0];
    }
    CHECK(check_derivation(L, e, calc_ggl_bool()).ok);
}

TEST_CASE("factorial orbits pair the 48 connectives") {
    const Lang& L = lambek();
    const int cell = L.full.find_cell("prod");
    auto pairs = factorial_orbit_pairs(L, cell);
    CHECK(pairs.size() == 24);
    std::set<int> covered;
    for (const auto& p : pairs) {
        covered.insert(p.a);
        covered.insert(p.b);
        CHECK(p.sigma == Perm({2, 1, 3}));
        CHECK(p.ab.concl.lhs->conn == p.a);
        CHECK(p.ab.concl.rhs->conn == p.b);
        CHECK(p.ba.concl.lhs->conn == p.b);
        CHECK(p.ba.concl.rhs->conn == p.a);
        CHECK(check_derivation(L, p.ab, calc_asl()).ok);
        CHECK(check_derivation(L, p.ba, calc_asl()).ok);
        CHECK_FALSE(uses_cut(p.ab));
    }
    CHECK(covered.size() == 48);
    // otimes sits with its argument swap
    const int ot = L.find("otimes");
    auto it = std::find_if(pairs.begin(), pairs.end(), [&](const EquivalencePair& p) { return p.a == ot || p.b == ot; });
    REQUIRE(it != pairs.end());
    const int other = it->a == ot ? it->b : it->a;
    CHECK(L.conn(other).sk.perm == Perm({2, 1, 3}));
}

TEST_CASE("generated Lambek rules pass the audit") {
    const Lang& L = lambek();
    auto rep = audit_rules(L, L.full.find_cell("prod"));
    CHECK(rep.rules == 48 + 48 + 48 * 47 + 1);
    for (const auto& v : rep.violations) CAPTURE(v);
    CHECK(rep.violations.empty());
    for (std::size_t c = 0; c < L.full.cells.size(); ++c) {
        if (L.full.cells[c].name == "prod") continue;
        auto lets = audit_rules(L, static_cast<int>(c));
        CHECK(lets.rules >= 2);
        CHECK(lets.violations.empty());
    }
}

TEST_CASE("detour through the reversed product is removed") {
    const Lang& L = lambek();
    const int cell = L.full.find_cell("prod");
    Derivation d = derive_identity(L, parse_formula(L, "otimes(p, q)"));
    // p[otimes]q ⊢ otimes(p,q), swap the arguments and swap them back
    Derivation r = d.prem[0];
    const SemiElem g = parse_semi("((0,0,0),[2,1,3])");
    Sequent s1 = act_on_sequent(L, g, r.concl, cell);
    CHECK(L.conn(s1.lhs->conn).name != "otimes");
    Derivation detour{s1, rl_dsr1(cell, g), {r}};
    detour = Derivation{r.concl, rl_dsr1(cell, g), {detour}};
    Derivation full{d.concl, d.rule, {detour}};
    REQUIRE(check_derivation(L, full, calc_asl()).ok);
    Derivation e = eliminate_structural(L, full, base_labels(L));
    CHECK(e.concl == full.concl);
    CHECK(check_derivation(L, e, calc_asl()).ok);
    CHECK(count_rule(e, "dsr1") == 0);
    CHECK(labels_within(e, base_labels(L)));
    // a clean derivation comes back unchanged
    Derivation same = eliminate_structural(L, d, base_labels(L));
    CHECK(print_derivation(L, same) == print_derivation(L, d));
}

TEST_CASE("structural detours shrink to the fragment") {
    const Lang& L = lambek();
    std::mt19937 rng(11);
    std::set<int> wide = base_labels(L);
    for (int c : base_labels(L))
        if (L.beta_partner[c] >= 0) wide.insert(L.beta_partner[c]);
    int strict = 0;
    auto ths = theorems(50, 3);
    for (auto& d : ths) {
        // wander away from a node with random group elements and come back the same way
        std::vector<Derivation*> nodes;
        nodes_upto(d, 4, nodes);
        Derivation* target = nodes[rng() % nodes.size()];
        Derivation cur = *target;
        std::vector<std::pair<Sequent, Rule>> path;
        for (int k = 0; k < 3; ++k) {
            auto sides = proper_heads(L, cur.concl, -1);
            if (sides.empty()) break;
            const int side = sides[rng() % sides.size()];
            const int cell = L.cell((side ? cur.concl.rhs : cur.concl.lhs)->conn);
            const auto& G = L.groups[cell];
            const SemiElem g = G[rng() % G.size()];
            Sequent next = act_on_side(L, g, cur.concl, side);
            cur = Derivation{next, rl_dsr1(cell, g), {cur}};
        }
        // walk back
        Derivation back = cur;
        for (const Derivation* x = &cur; x->rule.name == "dsr1" && !(x->concl == target->concl); x = &x->prem[0]) {
            const Sequent& to = x->prem[0].concl;
            bool done = false;
            for (int side : proper_heads(L, back.concl, -1)) {
                const int cell = L.cell((side ? back.concl.rhs : back.concl.lhs)->conn);
                for (const auto& g : L.groups[cell])
                    if (!done && act_on_side(L, g, back.concl, side) == to) {
                        back = Derivation{to, rl_dsr1(cell, g), {back}};
                        done = true;
                    }
            }
            REQUIRE(done);
        }
        *target = back;
        CAPTURE(print_derivation(L, d));
        REQUIRE(check_derivation(L, d, calc_asl()).ok);
        Derivation e = eliminate_structural(L, d, base_labels(L));
        CHECK(e.concl == d.concl);
        auto r = check_derivation(L, e, calc_asl());
        CHECK_MESSAGE(r.ok, r.path << " " << r.message);
        CHECK(deriv_size(e) <= deriv_size(d));
        CHECK(labels_within(e, wide));
        if (labels_within(e, base_labels(L))) ++strict;
    }
    CHECK(strict == 50);
}

TEST_CASE("cut against an identity leaf") {
    const Lang& L = lambek();
    CalculusSpec spec = asl_cut();
    spec.id = true;
    Term a = parse_formula(L, "lres(p, q)");
    Derivation d2 = derive_identity(L, a);
    Derivation d{d2.concl, rl("cut"), {Derivation{{a, a}, rl("id"), {}}, d2}};
    REQUIRE(check_derivation(L, d, spec).ok);
    Derivation e = eliminate_cuts(L, d, 10000);
    CHECK(print_derivation(L, e) == print_derivation(L, d2));
}

TEST_CASE("inversion cut is eliminated") {
    const Lang& L = lambek();
    for (const char* f : {"otimes(p, q)", "lres(p, otimes(q, p))", "rres(q, p)", "p"}) {
        CAPTURE(f);
        Term a = parse_formula(L, f);
        Derivation id = derive_identity(L, a);
        const bool left = id.concl.lhs->kind == Kind::F && L.quant(a->conn) == 1;
        Derivation inv = invert_intro(L, id.concl);
        // close the open premise with the identity derivation
        std::function<void(Derivation&)> close = [&](Derivation& x) {
            if (x.rule.name == "hyp") x = id;
            for (auto& p : x.prem) close(p);
        };
        close(inv);
        REQUIRE(check_derivation(L, inv, asl_cut()).ok);
        Derivation e = eliminate_cuts(L, inv, 10000);
        CHECK(e.concl == inv.concl);
        CHECK_FALSE(uses_cut(e));
        CHECK(check_derivation(L, e, calc_asl()).ok);
        (void)left;
    }
}

TEST_CASE("twenty one-cut derivations eliminate within budget") {
    const Lang& L = lambek();
    std::mt19937 rng(17);
    SearchOptions o;
    o.labels = base_labels(L);
    auto ths = theorems(40, 23);
    int done = 0, chained = 0;
    for (std::size_t t = 0; t < ths.size() && done < 20; ++t) {
        Derivation d = ths[t];
        if (t % 2 == 0) {
            // chain with another theorem sharing the middle formula, or with its identity
            const Term mid = d.concl.rhs;
            std::optional<Derivation> d2;
            for (const auto& u : ths)
                if (!d2 && term_eq(u.concl.lhs, mid) && !term_eq(u.concl.rhs, mid)) d2 = u;
            if (!d2) {
                Term psi = mk_f(L, L.find("lres"), {mk_letter(L, "q"), mk_f(L, L.find("rres"), {mid, mk_letter(L, "q")})});
                d2 = prove_asl(L, {mid, psi}, o);
            }
            if (!d2) d2 = derive_identity(L, mid);
            else ++chained;
            d = Derivation{{d.concl.lhs, d2->concl.rhs}, rl("cut"), {d, *d2}};
        } else {
            // inject a cut on a displayed formula at depth ≤ 3
            std::vector<Derivation*> nodes;
            nodes_upto(d, 3, nodes);
            std::vector<Derivation*> fit;
            for (auto* x : nodes)
                if (x->concl.lhs->kind == Kind::F || x->concl.rhs->kind == Kind::F) fit.push_back(x);
            REQUIRE(!fit.empty());
            Derivation* x = fit[rng() % fit.size()];
            if (x->concl.rhs->kind == Kind::F)
                *x = Derivation{x->concl, rl("cut"), {*x, derive_identity(L, x->concl.rhs)}};
            else
                *x = Derivation{x->concl, rl("cut"), {derive_identity(L, x->concl.lhs), *x}};
        }
        CAPTURE(print_sequent(L, d.concl));
        REQUIRE(check_derivation(L, d, asl_cut()).ok);
        REQUIRE(count_rule(d, "cut") == 1);
        Derivation e = eliminate_cuts(L, d, 10000);
        CHECK(e.concl == d.concl);
        CHECK_FALSE(uses_cut(e));
        auto r = check_derivation(L, e, calc_asl());
        CHECK_MESSAGE(r.ok, r.path << " " << r.message);
        ++done;
    }
    CHECK(done == 20);
    CHECK(chained > 0);
}

TEST_CASE("cut elimination reports a spent budget") {
    const Lang& L = lambek();
    Term a = parse_formula(L, "otimes(lres(p, q), rres(q, p))");
    Derivation id = derive_identity(L, a);
    Derivation d{id.concl, rl("cut"), {id, id}};
    CHECK_THROWS_AS(eliminate_cuts(L, d, 3), CalculusError);
    CHECK_NOTHROW(eliminate_cuts(L, d, 10000));
}

TEST_CASE("interpolants of search-found theorems") {
    const Lang& L = lambek();
    {
        Term a = parse_formula(L, "otimes(p, q)");
        auto ip = compute_interpolant(L, derive_identity(L, a));
        CHECK(term_eq(ip.chi, a));
    }
    int nontrivial = 0;
    for (const auto& d : theorems(50, 99)) {
        CAPTURE(print_sequent(L, d.concl));
        auto ip = compute_interpolant(L, d);
        CHECK(ip.left.concl == Sequent{d.concl.lhs, ip.chi});
        CHECK(ip.right.concl == Sequent{ip.chi, d.concl.rhs});
        CHECK(check_derivation(L, ip.left, calc_asl()).ok);
        CHECK(check_derivation(L, ip.right, calc_asl()).ok);
        auto va = v_a(L, d.concl.lhs), vb = v_a(L, d.concl.rhs), vc = v_a(L, ip.chi);
        for (const auto& x : vc) {
            CHECK(va.count(x));
            CHECK(vb.count(x));
        }
        if (!term_eq(ip.chi, d.concl.lhs) && !term_eq(ip.chi, d.concl.rhs)) ++nontrivial;
    }
    // with two letters and one orbit an end formula always qualifies
    CHECK(nontrivial == 0);
}

TEST_CASE("interpolant strictly between the end formulas") {
    Lang G(builtin_family("grammar"));
    SearchOptions o;
    o.labels = base_labels(G);
    // (S/N)⊗N ⊢ NP\(NP⊗S): N only on the left, NP only on the right
    auto d = prove_asl(G, parse_sequent(G, "otimes(lres(S, N), N) |- rres(NP, otimes(NP, S))"), o);
    REQUIRE(d);
    auto ip = compute_interpolant(G, *d);
    CHECK(print_term(G, ip.chi) == "S");
    CHECK(check_derivation(G, ip.left, calc_asl()).ok);
    CHECK(check_derivation(G, ip.right, calc_asl()).ok);
}
