#include "atomic/calculus.hpp"
#include "atomic/search.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace atomic {

namespace {

Derivation node(Sequent c, Rule r, std::vector<Derivation> p) { return {std::move(c), std::move(r), std::move(p)}; }

Sequent subst(const Lang& L, const Sequent& s, int v, const Term& by) {
    return {subst_var(L, s.lhs, v, by), subst_var(L, s.rhs, v, by)};
}

Sequent flip_seq(const Lang& L, const Sequent& s) { return {star(L, s.rhs), star(L, s.lhs)}; }

CalculusSpec asl_full() {
    CalculusSpec s = calc_asl();
    s.cut = true;
    s.id = true;
    return s;
}

bool step_ok(const Lang& L, const Rule& r, const std::vector<Sequent>& prem, const Sequent& concl) {
    static const CalculusSpec spec = asl_full();
    return !check_step(L, spec, r, prem, concl);
}

// a single display step between two sequents: dsr2 if it applies, otherwise some dsr1
std::optional<Rule> one_step(const Lang& L, const Sequent& from, const Sequent& to) {
    if (step_ok(L, rl("dsr2"), {from}, to)) return rl("dsr2");
    for (int side : proper_heads(L, from, -1)) {
        const int cell = L.cell((side ? from.rhs : from.lhs)->conn);
        for (const auto& g : L.groups[cell])
            if (act_on_side(L, g, from, side) == to) return rl_dsr1(cell, g);
    }
    return std::nullopt;
}

Rule display_step(const Lang& L, const Sequent& from, const Sequent& to, const std::string& where) {
    if (auto r = one_step(L, from, to)) return *r;
    throw CalculusError("no display step from " + print_sequent(L, from) + " to " + print_sequent(L, to) + " (" + where + ")");
}

std::optional<OccPath> find_var(const Sequent& s, int id) {
    for (const auto& p : occurrences(s, false)) {
        auto t = at(s, p);
        if (t->kind == Kind::Var && t->conn == id) return p;
    }
    return std::nullopt;
}

bool is_var(const Term& t, int id) { return t->kind == Kind::Var && t->conn == id; }

// distinct formulas of a type, letters first
std::vector<Term> sample_formulas(const Lang& L, int type, std::size_t k) {
    std::vector<Term> pool, out;
    for (int c = 0; c < static_cast<int>(L.full.conns.size()); ++c)
        if (L.arity(c) == 0) pool.push_back(mk_f(L, c, {}));
    auto add = [&](const Term& t) {
        if (t->type != type || out.size() >= k) return;
        for (const auto& o : out)
            if (term_eq(o, t)) return;
        out.push_back(t);
    };
    for (int round = 0; round < 4 && out.size() < k; ++round) {
        for (const auto& t : pool) add(t);
        std::vector<Term> next = pool;
        std::size_t turn = round;
        for (int c = 0; c < static_cast<int>(L.full.conns.size()) && next.size() < 4096; ++c) {
            const int n = L.arity(c);
            if (n == 0) continue;
            std::vector<Term> kids;
            for (int i = 0; i < n; ++i) {
                std::vector<Term> fit;
                for (const auto& t : pool)
                    if (t->type == L.conn(c).sk.types[i]) fit.push_back(t);
                if (fit.empty()) break;
                kids.push_back(fit[(turn++) % fit.size()]);
            }
            if (static_cast<int>(kids.size()) == n) next.push_back(mk_f(L, c, kids));
        }
        pool = std::move(next);
    }
    if (out.size() < k) throw CalculusError("the family has too few formulas of type " + std::to_string(type));
    return out;
}

void subformulas(const Term& t, std::vector<Term>& out) {
    if (t->kind == Kind::F) {
        for (const auto& o : out)
            if (term_eq(o, t)) goto kids;
        out.push_back(t);
    }
kids:
    for (const auto& k : t->kids) subformulas(k, out);
}

}  // namespace

// ---------------------------------------------------------------- dsr2 in GGL_Boolean

Derivation eliminate_dsr2(const Lang& L, const Derivation& d) {
    if (!L.boolean()) throw CalculusError("dsr2 elimination needs a Boolean family");
    std::vector<Derivation> prem;
    for (const auto& p : d.prem) prem.push_back(eliminate_dsr2(L, p));
    if (d.rule.name != "dsr2") return node(d.concl, d.rule, std::move(prem));
    const Sequent s = prem.at(0).concl;  // X ⊢ Y
    const Term I = unit_i(L, 1);
    const Term sx = star(L, s.lhs), sy = star(L, s.rhs);
    Derivation k = node({comma(L, 1, s.lhs, I), s.rhs}, rl("K"), {std::move(prem[0])});
    Derivation ci = node({comma(L, 1, I, s.lhs), s.rhs}, rl("CI"), {std::move(k)});
    Derivation c = node({comma(L, 1, I, sy), sx}, rl("dr2c"), {std::move(ci)});
    Derivation ci2 = node({comma(L, 1, sy, I), sx}, rl("CI"), {std::move(c)});
    Derivation out = node({sy, sx}, rl("IWI"), {std::move(ci2)});
    if (!(out.concl == d.concl)) throw CalculusError("dsr2 node does not flip its premise");
    return out;
}

// ---------------------------------------------------------------- factorial orbits

std::vector<EquivalencePair> factorial_orbit_pairs(const Lang& L, int cell) {
    const auto& members = L.full.cells.at(cell).members;
    std::vector<EquivalencePair> out;
    if (members.empty()) return out;
    const int n = L.arity(members[0]), m = n + 1;
    std::vector<Perm> H;
    for (const auto& p : all_perms(m))
        if (p(m) == m && !p.is_identity()) H.push_back(p);
    auto in_cell_group = [&](const SemiElem& g) {
        return std::find(L.groups[cell].begin(), L.groups[cell].end(), g) != L.groups[cell].end();
    };
    std::set<int> seen;
    for (int a : members) {
        if (seen.count(a)) continue;
        seen.insert(a);
        std::vector<Term> args;
        for (int i = 0; i < n; ++i) args.push_back(sample_formulas(L, L.conn(a).sk.types[i], n)[i]);
        for (const auto& sigma : H) {
            SemiElem g{bv_const(m, 0), sigma};
            if (!in_cell_group(g)) continue;
            const int b = L.with_sk(cell, act_semidirect(g, L.conn(a).sk));
            if (b < 0 || seen.count(b)) continue;
            seen.insert(b);
            // ⊢⋆ on identities, dsr1 with the permutation, then ⋆⊢ for the image
            auto build = [&](int from, const std::vector<Term>& phi, const SemiElem& h) {
                std::vector<Derivation> ids;
                for (const auto& f : phi) ids.push_back(derive_identity(L, f));
                const Bit q = L.quant(from);
                Derivation r = node(S_(q, mk_s(L, from, phi), mk_f(L, from, phi)), rl("intro_r", from), std::move(ids));
                const int side = q ? 0 : 1;
                Sequent moved = act_on_side(L, h, r.concl, side);
                Derivation dd = node(moved, rl_dsr1(cell, h), {std::move(r)});
                const Term& st = moved.lhs->kind == Kind::S ? moved.lhs : moved.rhs;
                const int to = st->conn;
                const Bit q2 = L.quant(to);
                const Term& u = q2 ? moved.rhs : moved.lhs;
                return node(S_(q2, mk_f(L, to, st->kids), u), rl("intro_l", to), {std::move(dd)});
            };
            std::vector<Term> permuted(n);
            for (int i = 1; i <= n; ++i) permuted[i - 1] = args[sigma(i) - 1];
            Derivation x = build(a, args, g);
            Derivation y = build(b, permuted, semi_inv(g));
            EquivalencePair pr{a, b, sigma, {}, {}};
            const Term fa = mk_f(L, a, args);
            (term_eq(x.concl.lhs, fa) ? pr.ab : pr.ba) = std::move(x);
            (term_eq(y.concl.lhs, fa) ? pr.ab : pr.ba) = std::move(y);
            out.push_back(std::move(pr));
        }
    }
    return out;
}

// ---------------------------------------------------------------- rule audit

AuditReport audit_rules(const Lang& L, int cell) {
    AuditReport rep;
    const auto& members = L.full.cells.at(cell).members;
    auto var = [](int type) { return mk_var(fresh_var(), type); };
    auto report = [&](const std::string& rule, const std::string& what) { rep.violations.push_back(rule + ": " + what); };

    // premise formulas are subformulas of the conclusion; structure variables occur once on each side of the
    // rule with the same sign; the checker accepts the instance
    auto audit = [&](const std::string& name, const Rule& r, const std::vector<Sequent>& prem, const Sequent& concl,
                     const std::vector<int>& vars) {
        ++rep.rules;
        if (!step_ok(L, r, prem, concl)) report(name, "instance rejected by the checker");
        std::vector<Term> below;
        subformulas(concl.lhs, below);
        subformulas(concl.rhs, below);
        for (const auto& p : prem) {
            std::vector<Term> above;
            subformulas(p.lhs, above);
            subformulas(p.rhs, above);
            for (const auto& f : above)
                if (std::none_of(below.begin(), below.end(), [&](const Term& b) { return term_eq(b, f); }))
                    report(name, "premise formula " + print_term(L, f) + " is not a subformula of the conclusion");
        }
        for (int v : vars) {
            int up = 0, down = 0;
            std::optional<Bit> sign_up;
            for (const auto& p : prem) {
                std::vector<int> ids;
                collect_vars(p.lhs, ids);
                collect_vars(p.rhs, ids);
                const int k = static_cast<int>(std::count(ids.begin(), ids.end(), v));
                up += k;
                if (k == 1) sign_up = sign_of(L, p, *find_var(p, v));
            }
            std::vector<int> ids;
            collect_vars(concl.lhs, ids);
            collect_vars(concl.rhs, ids);
            down = static_cast<int>(std::count(ids.begin(), ids.end(), v));
            if (up != 1 || down != 1) {
                report(name, "parameter " + var_name(v) + " occurs " + std::to_string(up) + " time(s) above and " +
                                 std::to_string(down) + " below");
                continue;
            }
            if (*sign_up != sign_of(L, concl, *find_var(concl, v))) report(name, "parameter " + var_name(v) + " changes sign");
        }
    };

    for (int c : members) {
        const auto& cn = L.conn(c);
        const int n = cn.arity();
        const Bit q = L.quant(c);
        std::vector<Term> phi;
        for (int i = 0; i < n; ++i) phi.push_back(sample_formulas(L, cn.sk.types[i], n)[i]);
        const Term f = mk_f(L, c, phi);
        {
            std::vector<Term> X;
            std::vector<int> ids;
            std::vector<Sequent> prem;
            for (int i = 0; i < n; ++i) {
                X.push_back(var(cn.sk.types[i]));
                ids.push_back(X.back()->conn);
                prem.push_back(S_(q ^ L.tone(c, i), X[i], phi[i]));
            }
            Sequent concl = S_(q, mk_s(L, c, X), f);
            audit("intro_r " + cn.name, rl("intro_r", c), prem, concl, ids);
            if (!term_eq(q ? concl.rhs : concl.lhs, f)) report("intro_r " + cn.name, "principal formula is not displayed");
        }
        {
            Term U = var(cn.sk.out_type());
            Sequent prem = S_(q, mk_s(L, c, phi), U);
            Sequent concl = S_(q, f, U);
            audit("intro_l " + cn.name, rl("intro_l", c), {prem}, concl, {U->conn});
            if (!term_eq(q ? concl.lhs : concl.rhs, f)) report("intro_l " + cn.name, "principal formula is not displayed");
        }
        for (std::size_t k = 1; k < L.groups[cell].size(); ++k) {
            const SemiElem& g = L.groups[cell][k];
            std::vector<Term> X;
            std::vector<int> ids;
            for (int i = 0; i < n; ++i) {
                X.push_back(var(cn.sk.types[i]));
                ids.push_back(X.back()->conn);
            }
            Term last = var(cn.sk.out_type());
            ids.push_back(last->conn);
            Sequent prem = S_(q, mk_s(L, c, X), last);
            Sequent concl = act_on_side(L, g, prem, q ? 0 : 1);
            audit("dsr1 " + cn.name + " " + g.str(), rl_dsr1(cell, g), {prem}, concl, ids);
        }
    }
    if (!members.empty()) {
        Term x = var(L.conn(members[0]).sk.out_type()), y = var(L.conn(members[0]).sk.out_type());
        Sequent prem{x, y};
        audit("dsr2", rl("dsr2"), {prem}, flip_seq(L, prem), {x->conn, y->conn});
    }
    return rep;
}

// ---------------------------------------------------------------- structural conservativity

namespace {

struct Normalizer {
    const Lang& L;
    std::set<int> strict, wide;  // allowed labels, and the same closed under β partners

    bool ok(int c, bool w) const { return (w ? wide : strict).count(c) > 0; }

    Term nstar(const Term& k) const {
        Term r = star(L, k);
        return r->kind == Kind::S ? head(r) : r;
    }

    // relabel the head by some h that fixes the last argument, so the node stays where it is
    Term head(const Term& r) const {
        if (ok(r->conn, false)) return r;
        const int c = r->conn, cell = L.cell(c), n = L.arity(c);
        for (bool w : {false, true}) {
            if (w && ok(c, true)) return r;
            for (const auto& h : L.groups[cell]) {
                if (h.perm(n + 1) != n + 1 || h.vec[n]) continue;
                const int nc = L.with_sk(cell, act_semidirect(h, L.conn(c).sk));
                if (nc < 0 || !ok(nc, w) || L.quant(nc) != L.quant(c)) continue;
                std::vector<Term> kids;
                for (int i = 1; i <= n; ++i) {
                    const Term& k = r->kids[h.perm(i) - 1];
                    kids.push_back(h.vec[i - 1] ? nstar(k) : k);
                }
                return mk_s(L, nc, std::move(kids));
            }
        }
        return r;
    }

    Term norm(const Term& t) const {
        switch (t->kind) {
            case Kind::F:
            case Kind::Var: return t;
            case Kind::Star: return nstar(norm(t->kids[0]));
            case Kind::S: {
                std::vector<Term> kids;
                for (const auto& k : t->kids) kids.push_back(norm(k));
                return head(mk_s(L, t->conn, std::move(kids)));
            }
        }
        return t;
    }

    Sequent norm(const Sequent& s) const { return {norm(s.lhs), norm(s.rhs)}; }

    bool clean(const Term& t) const {
        if (t->kind == Kind::S && !ok(t->conn, true)) return false;
        if (t->kind == Kind::F) return true;
        return std::all_of(t->kids.begin(), t->kids.end(), [&](const Term& k) { return clean(k); });
    }
};

bool is_display(const Rule& r) { return r.name == "dsr1" || r.name == "dsr2"; }

}  // namespace

Derivation eliminate_structural(const Lang& L, const Derivation& d, const std::set<int>& allowed) {
    Normalizer N{L, allowed, allowed};
    for (int c : allowed)
        if (c >= 0 && L.beta_partner[c] >= 0) N.wide.insert(L.beta_partner[c]);
    if (!(N.norm(d.concl) == d.concl)) throw CalculusError("conclusion uses structural connectives outside the fragment");

    std::function<Derivation(const Derivation&, const std::string&)> go = [&](const Derivation& x,
                                                                            const std::string& path) -> Derivation {
        const Sequent target = N.norm(x.concl);
        if (is_display(x.rule)) {
            const Derivation* e = &x;
            std::string p = path;
            while (is_display(e->rule)) {
                e = &e->prem[0];
                p += ".1";
            }
            Derivation base = go(*e, p);
            if (base.concl == target) return base;
            for (const auto* labels : {&N.strict, &N.wide}) {
                std::set<int> ls = *labels;
                // formula connectives of the sequents involved keep their structural twins
                std::vector<int> cs;
                collect_connectives(target.lhs, cs);
                collect_connectives(target.rhs, cs);
                ls.insert(cs.begin(), cs.end());
                if (auto r = display_path(L, base, target, ls)) return *r;
            }
            throw CalculusError("structural rewriting stuck at " + path);
        }
        if (x.rule.name == "hyp" && !(target == x.concl))
            throw CalculusError("structural rewriting stuck at " + path + ": open leaf outside the fragment");
        std::vector<Derivation> prem;
        std::vector<Sequent> pc;
        for (std::size_t i = 0; i < x.prem.size(); ++i) {
            prem.push_back(go(x.prem[i], path + "." + std::to_string(i + 1)));
            pc.push_back(prem.back().concl);
        }
        if (!N.clean(target.lhs) || !N.clean(target.rhs) || !step_ok(L, x.rule, pc, target))
            throw CalculusError("structural rewriting stuck at " + path);
        return node(target, x.rule, std::move(prem));
    };
    return go(d, "root");
}

// ---------------------------------------------------------------- cut elimination

namespace {

struct CutEliminator {
    const Lang& L;
    long budget;
    long used = 0;

    void tick() {
        if (++used > budget) throw CalculusError("cut elimination exceeded its budget of " + std::to_string(budget) + " steps");
    }

    Derivation run(const Derivation& d) {
        static const std::set<std::string> known{"dsr1", "dsr2", "intro_r", "intro_l", "cut", "id", "hyp"};
        if (!known.count(d.rule.name)) throw CalculusError("cut elimination does not handle rule " + d.rule.name);
        if (d.rule.name == "cut" && d.prem[0].rule.name == "id") return run(d.prem[1]);
        if (d.rule.name == "cut" && d.prem[1].rule.name == "id") return run(d.prem[0]);
        std::vector<Derivation> prem;
        for (const auto& p : d.prem) prem.push_back(run(p));
        if (d.rule.name == "cut") return reduce(prem[0], prem[1]);
        if (d.rule.name == "id") return derive_identity(L, d.concl.lhs);
        return node(d.concl, d.rule, std::move(prem));
    }

    // d1 : X ⊢ A and d2 : A ⊢ Y, both cut-free
    Derivation reduce(const Derivation& d1, const Derivation& d2) {
        tick();
        if (!term_eq(d1.concl.rhs, d2.concl.lhs)) throw CalculusError("cut premises do not share the cut formula");
        const Term A = d1.concl.rhs;
        if (d1.rule.name == "id") return d2;
        if (d2.rule.name == "id") return d1;
        const int M = fresh_var();
        const Term m = mk_var(M, A->type);
        return rebuild(d1, Sequent{d1.concl.lhs, m}, M, A, d2.concl.rhs,
                       [&](const Derivation& p1) { return against(p1, d2); });
    }

    // p1 : Z ⊢ A introduces A; follow A upwards in d2
    Derivation against(const Derivation& p1, const Derivation& d2) {
        const Term A = p1.concl.rhs;
        const int M = fresh_var();
        const Term m = mk_var(M, A->type);
        return rebuild(d2, Sequent{m, d2.concl.rhs}, M, A, p1.concl.lhs,
                       [&](const Derivation& p2) { return principal(p1, p2); });
    }

    bool principal_at(const Derivation& x, const Sequent& marked, int M) const {
        const auto& n = x.rule.name;
        if (n == "id") return is_var(marked.lhs, M) || is_var(marked.rhs, M);
        if (n != "intro_r" && n != "intro_l") return false;
        const Bit q = L.quant(x.rule.conn);
        const bool lhs_formula = n == "intro_r" ? !q : q;
        return is_var(lhs_formula ? marked.lhs : marked.rhs, M);
    }

    // the premise of x carrying the marked occurrence, with the marker in place
    std::pair<std::size_t, Sequent> marked_premise(const Derivation& x, const Sequent& marked, int M, const Term& A) const {
        const auto& n = x.rule.name;
        std::optional<std::pair<std::size_t, Sequent>> r;
        if (n == "dsr1") {
            const SemiElem gi = semi_inv(x.rule.g);
            for (int side : proper_heads(L, marked, x.rule.cell)) {
                Sequent cand = act_on_side(L, gi, marked, side);
                if (subst(L, cand, M, A) == x.prem[0].concl) r = {0, cand};
            }
        } else if (n == "dsr2") {
            r = {0, flip_seq(L, marked)};
        } else if (n == "intro_r") {
            const int c = x.rule.conn;
            const Bit q = L.quant(c);
            auto p = find_var(marked, M);
            if (p && p->side == (q ? 0 : 1) && !p->steps.empty()) {
                const int i = p->steps[0];
                const Term& st = q ? marked.lhs : marked.rhs;
                const Term& fm = q ? marked.rhs : marked.lhs;
                r = {static_cast<std::size_t>(i), S_(q ^ L.tone(c, i), st->kids[i], fm->kids[i])};
            }
        } else if (n == "intro_l") {
            const int c = x.rule.conn;
            const Bit q = L.quant(c);
            const Term& fm = q ? marked.lhs : marked.rhs;
            const Term& u = q ? marked.rhs : marked.lhs;
            r = {0, S_(q, mk_s(L, c, fm->kids), u)};
        } else if (n == "cut") {
            auto p = find_var(marked, M);
            if (p && p->side == 0) r = {0, Sequent{marked.lhs, x.prem[0].concl.rhs}};
            else if (p) r = {1, Sequent{x.prem[1].concl.lhs, marked.rhs}};
        } else if (n == "hyp") {
            throw CalculusError("cut formula " + print_term(L, A) + " comes from an open leaf");
        }
        if (!r || !(subst(L, r->second, M, A) == x.prem[r->first].concl))
            throw CalculusError("lost track of the cut formula at a " + n + " step");
        return *r;
    }

    Derivation rebuild(const Derivation& x, const Sequent& marked, int M, const Term& A, const Term& by,
                       const std::function<Derivation(const Derivation&)>& at_principal) {
        tick();
        if (principal_at(x, marked, M)) return at_principal(x);
        auto [j, pm] = marked_premise(x, marked, M, A);
        std::vector<Derivation> prem = x.prem;
        prem[j] = rebuild(x.prem[j], pm, M, A, by, at_principal);
        const Sequent concl = subst(L, marked, M, by);
        std::vector<Sequent> pc;
        for (const auto& p : prem) pc.push_back(p.concl);
        if (step_ok(L, x.rule, pc, concl)) return node(concl, x.rule, std::move(prem));
        if (is_display(x.rule)) {
            Rule r = display_step(L, pc[0], concl, "after substitution");
            return node(concl, r, std::move(prem));
        }
        throw CalculusError("rule " + x.rule.name + " breaks after substituting the cut formula");
    }

    // p1 : Z ⊢ A and p2 : A ⊢ W both introduce A
    Derivation principal(const Derivation& p1, const Derivation& p2) {
        tick();
        if (p1.rule.name == "id") return p2;
        if (p2.rule.name == "id") return p1;
        const bool r_first = p1.rule.name == "intro_r" && p2.rule.name == "intro_l";
        const bool l_first = p1.rule.name == "intro_l" && p2.rule.name == "intro_r";
        if ((!r_first && !l_first) || p1.rule.conn != p2.rule.conn)
            throw CalculusError("principal cut between " + p1.rule.name + " and " + p2.rule.name);
        const Derivation& R = r_first ? p1 : p2;
        const Derivation& Lf = r_first ? p2 : p1;
        const int c = R.rule.conn, n = L.arity(c);
        const Bit q = L.quant(c);
        const int hs = q ? 0 : 1;
        Derivation cur = Lf.prem[0];  // S_q([⋆](φ), U)
        for (int i = 0; i < n; ++i) {
            const Term& head = hs ? cur.concl.rhs : cur.concl.lhs;
            const Term phi_i = head->kids[i];
            const int Mi = fresh_var();
            const Term mi = mk_var(Mi, phi_i->type);
            Sequent m0 = replace_at(cur.concl, OccPath{hs, {i}}, mi);
            // the display of the marker, flattened into sequents and rules
            Derivation disp = display(L, m0, OccPath{hs, {i}});
            std::vector<Sequent> seqs;
            std::vector<Rule> rules;
            for (const Derivation* e = &disp; e->rule.name != "hyp"; e = &e->prem[0]) {
                seqs.push_back(e->concl);
                rules.push_back(e->rule);
            }
            seqs.push_back(m0);
            std::reverse(seqs.begin(), seqs.end());
            std::reverse(rules.begin(), rules.end());
            const std::size_t k = rules.size();

            Derivation fwd = std::move(cur);
            for (std::size_t j = 1; j <= k; ++j) {
                Sequent s = subst(L, seqs[j], Mi, phi_i);
                Rule r = rules[j - 1];
                if (!step_ok(L, r, {fwd.concl}, s)) r = display_step(L, fwd.concl, s, "display of a principal argument");
                fwd = node(s, r, {std::move(fwd)});
            }
            const Derivation& Ri = R.prem[i];
            const Term& X_i = (R.concl.lhs->kind == Kind::S && R.concl.lhs->conn == c ? R.concl.lhs : R.concl.rhs)->kids[i];
            Derivation cut = is_var(seqs[k].rhs, Mi) ? reduce(fwd, Ri) : reduce(Ri, fwd);
            if (!(cut.concl == subst(L, seqs[k], Mi, X_i))) throw CalculusError("principal reduction produced the wrong sequent");
            Derivation back = std::move(cut);
            for (std::size_t j = k; j >= 1; --j) {
                Sequent s = subst(L, seqs[j - 1], Mi, X_i);
                Rule r = rules[j - 1];
                if (r.name == "dsr1") r = rl_dsr1(r.cell, semi_inv(r.g));
                if (!step_ok(L, r, {back.concl}, s)) r = display_step(L, back.concl, s, "undisplay");
                back = node(s, r, {std::move(back)});
            }
            cur = std::move(back);
        }
        const Sequent want{p1.concl.lhs, p2.concl.rhs};
        if (!(cur.concl == want)) throw CalculusError("principal reduction ended at the wrong sequent");
        return cur;
    }
};

}  // namespace

Derivation eliminate_cuts(const Lang& L, const Derivation& d, long budget) {
    CutEliminator e{L, budget};
    return e.run(d);
}

// ---------------------------------------------------------------- interpolation

Interpolant compute_interpolant(const Lang& L, const Derivation& d) {
    if (uses_cut(d)) throw CalculusError("interpolation needs a cut-free derivation");
    const Term phi = d.concl.lhs, psi = d.concl.rhs;
    if (!is_formula(phi) || !is_formula(psi)) throw CalculusError("interpolation needs a formula on each side");
    const auto va = v_a(L, phi), vb = v_a(L, psi);
    std::set<std::string> common;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::inserter(common, common.end()));
    auto fits = [&](const Term& chi) {
        auto v = v_a(L, chi);
        return std::includes(common.begin(), common.end(), v.begin(), v.end());
    };
    if (fits(phi)) return {phi, derive_identity(L, phi), d};
    if (fits(psi)) return {psi, d, derive_identity(L, psi)};

    // subformulas first, then small formulas over the shared vocabulary
    std::vector<Term> cands;
    subformulas(phi, cands);
    subformulas(psi, cands);
    std::vector<int> conns;
    collect_connectives(phi, conns);
    collect_connectives(psi, conns);
    std::sort(conns.begin(), conns.end());
    conns.erase(std::unique(conns.begin(), conns.end()), conns.end());
    std::vector<Term> level;
    for (int c : conns)
        if (L.arity(c) == 0 && fits(mk_f(L, c, {}))) level.push_back(mk_f(L, c, {}));
    for (int depth = 0; depth < 2; ++depth) {
        std::vector<Term> next = level;
        for (int c : conns) {
            if (L.arity(c) != 2) continue;
            for (const auto& a : level)
                for (const auto& b : level) {
                    try {
                        next.push_back(mk_f(L, c, {a, b}));
                    } catch (const std::invalid_argument&) {
                    }
                }
        }
        level = std::move(next);
    }
    cands.insert(cands.end(), level.begin(), level.end());
    std::stable_sort(cands.begin(), cands.end(), [](const Term& a, const Term& b) { return a->size < b->size; });

    SearchOptions o;
    o.labels = base_labels(L);
    o.max_depth = 12;
    for (const auto& chi : cands) {
        if (chi->type != phi->type || !fits(chi)) continue;
        auto left = prove_asl(L, {phi, chi}, o);
        if (!left) continue;
        auto right = prove_asl(L, {chi, psi}, o);
        if (right) return {chi, std::move(*left), std::move(*right)};
    }
    throw CalculusError("no interpolant within the search bounds");
}

}  // namespace atomic
