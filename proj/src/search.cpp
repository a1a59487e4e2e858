#include "atomic/search.hpp"

#include <deque>
#include <functional>
#include <unordered_map>

namespace atomic {

namespace {

enum class Mode { ASL, DL };

struct Move {
    Sequent to;
    Rule rule;
};

struct ClassInfo {
    std::vector<Sequent> members;
    std::vector<int> parent;  // index of the member this one was reached from, -1 for the root
    std::vector<Rule> via;    // rule taking parent to member
    bool proven = false;
    int failed_at = -1;  // largest depth bound known to fail
    Derivation proof;    // concludes members[0]
};

struct BudgetExceeded {};

struct Engine {
    const Lang& L;
    Mode mode;
    SearchOptions opt;
    SearchStats stats;
    std::unordered_map<Sequent, std::pair<int, int>, SequentHash> where;  // sequent -> (class, member)
    std::deque<ClassInfo> classes;
    int ot = -1, rr = -1, lr = -1;

    Engine(const Lang& l, Mode m, SearchOptions o) : L(l), mode(m), opt(std::move(o)) {
        ot = L.find("otimes");
        rr = L.find("rres");
        lr = L.find("lres");
    }

    bool labels_ok(const Term& t) const {
        if (t->kind == Kind::S && !opt.labels.empty() && !opt.labels.count(t->conn)) return false;
        if (t->kind == Kind::F) return true;
        for (const auto& k : t->kids)
            if (!labels_ok(k)) return false;
        return true;
    }

    void moves(const Sequent& s, std::vector<Move>& out) const {
        out.clear();
        if (mode == Mode::DL) {
            auto is = [](const Term& t, int c) { return t->kind == Kind::S && t->conn == c; };
            if (is(s.lhs, ot)) {
                const Term &X = s.lhs->kids[0], &Y = s.lhs->kids[1];
                out.push_back({{X, mk_s(L, lr, {s.rhs, Y})}, rl("dp1")});
                out.push_back({{Y, mk_s(L, rr, {X, s.rhs})}, rl("dp2")});
            }
            if (is(s.rhs, lr)) out.push_back({{mk_s(L, ot, {s.lhs, s.rhs->kids[1]}), s.rhs->kids[0]}, rl("dp1")});
            if (is(s.rhs, rr)) out.push_back({{mk_s(L, ot, {s.rhs->kids[0], s.lhs}), s.rhs->kids[1]}, rl("dp2")});
            return;
        }
        for (int side : proper_heads(L, s, -1)) {
            const Term& h = side ? s.rhs : s.lhs;
            const int cell = L.cell(h->conn);
            const auto& G = L.groups[cell];
            for (std::size_t k = 1; k < G.size(); ++k) {
                Sequent t = act_on_side(L, G[k], s, side);
                if (labels_ok(t.lhs) && labels_ok(t.rhs)) out.push_back({t, rl_dsr1(cell, G[k])});
            }
        }
        if (opt.dsr2) {
            auto q = [&](const Term& t) {
                return t->kind == Kind::F || t->kind == Kind::Var || (t->kind == Kind::S && !L.beta_compat[L.cell(t->conn)]);
            };
            if (q(s.lhs) || q(s.rhs)) {
                Sequent t{star(L, s.rhs), star(L, s.lhs)};
                if (labels_ok(t.lhs) && labels_ok(t.rhs)) out.push_back({t, rl("dsr2")});
            }
        }
    }

    // a rule taking `from` to `to`, known to be one display step apart in the other direction
    Rule inverse(const Sequent& from, const Sequent& to, const Rule& forward) const {
        if (forward.name != "dsr1") return forward;
        SemiElem gi = semi_inv(forward.g);
        for (int side : proper_heads(L, from, forward.cell))
            if (act_on_side(L, gi, from, side) == to) return rl_dsr1(forward.cell, gi);
        throw CalculusError("display move has no inverse");  // cannot happen for a group action
    }

    std::pair<int, int> class_of(const Sequent& s) {
        auto it = where.find(s);
        if (it != where.end()) return it->second;
        const int id = static_cast<int>(classes.size());
        classes.emplace_back();
        ClassInfo& c = classes.back();
        c.members.push_back(s);
        c.parent.push_back(-1);
        c.via.push_back(rl("hyp"));
        where[s] = {id, 0};
        std::vector<Move> mv;
        for (std::size_t i = 0; i < c.members.size(); ++i) {
            if (++stats.explored > opt.budget) {
                stats.out_of_budget = true;
                throw BudgetExceeded{};
            }
            Sequent cur = c.members[i];
            moves(cur, mv);
            for (auto& m : mv) {
                if (where.count(m.to)) continue;
                where[m.to] = {id, static_cast<int>(c.members.size())};
                c.members.push_back(m.to);
                c.parent.push_back(static_cast<int>(i));
                c.via.push_back(m.rule);
            }
        }
        ++stats.classes;
        return {id, 0};
    }

    // derivation of member k from a derivation of the root
    Derivation down_to(int cid, int k, Derivation root) {
        std::vector<int> chain;
        for (int x = k; x > 0; x = classes[cid].parent[x]) chain.push_back(x);
        Derivation d = std::move(root);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const auto& c = classes[cid];
            d = Derivation{c.members[*it], c.via[*it], {std::move(d)}};
        }
        return d;
    }

    // derivation of the root from a derivation of member k
    Derivation up_from(int cid, int k, Derivation dk) {
        Derivation d = std::move(dk);
        for (int x = k; x > 0;) {
            const auto& c = classes[cid];
            int p = c.parent[x];
            Rule r = inverse(c.members[x], c.members[p], c.via[x]);
            d = Derivation{c.members[p], r, {std::move(d)}};
            x = p;
        }
        return d;
    }

    std::optional<Derivation> logical(const Sequent& t, int depth) {
        // axioms
        for (int side = 0; side < 2; ++side) {
            const Term& a = side ? t.rhs : t.lhs;
            const Term& b = side ? t.lhs : t.rhs;
            if (a->kind == Kind::F && L.arity(a->conn) == 0) {
                if (mode == Mode::DL) {
                    if (side == 0 && term_eq(a, b)) return Derivation{t, rl("id"), {}};
                } else if (b->kind == Kind::S && b->conn == a->conn && (L.quant(a->conn) ? side == 1 : side == 0)) {
                    return Derivation{t, rl("intro_r", a->conn), {}};
                }
            }
        }
        // left rules, read backwards: a formula on the side where its connective is proper
        for (int side = 0; side < 2; ++side) {
            const Term& f = side ? t.rhs : t.lhs;
            if (f->kind != Kind::F || L.quant(f->conn) != (side == 0 ? 1 : 0)) continue;
            const int c = f->conn, n = L.arity(c);
            if (mode == Mode::DL && n == 0) continue;
            if (n > 0 && depth == 0) continue;
            const Term& u = side ? t.lhs : t.rhs;
            Sequent prem = S_(L.quant(c), mk_s(L, c, f->kids), u);
            if (!labels_ok(prem.lhs) || !labels_ok(prem.rhs)) continue;
            if (auto d = prove(prem, n > 0 ? depth - 1 : depth)) return Derivation{t, rl("intro_l", c), {std::move(*d)}};
        }
        // right rules: [⋆](X) against ⋆(φ)
        if (depth > 0)
            for (int side = 0; side < 2; ++side) {
                const Term& st = side ? t.rhs : t.lhs;
                const Term& f = side ? t.lhs : t.rhs;
                if (st->kind != Kind::S || f->kind != Kind::F || st->conn != f->conn) continue;
                const int c = f->conn, n = L.arity(c);
                if (n == 0 || L.quant(c) != (side == 0 ? 1 : 0)) continue;
                std::vector<Derivation> prem;
                for (int i = 0; i < n; ++i) {
                    auto d = prove(S_(L.quant(c) ^ L.tone(c, i), st->kids[i], f->kids[i]), depth - 1);
                    if (!d) break;
                    prem.push_back(std::move(*d));
                }
                if (static_cast<int>(prem.size()) == n) return Derivation{t, rl("intro_r", c), std::move(prem)};
            }
        return std::nullopt;
    }

    std::optional<Derivation> prove(const Sequent& s, int depth) {
        auto [cid, k] = class_of(s);
        if (classes[cid].proven) return down_to(cid, k, classes[cid].proof);
        if (classes[cid].failed_at >= depth) return std::nullopt;
        const std::size_t count = classes[cid].members.size();
        for (std::size_t i = 0; i < count; ++i) {
            Sequent t = classes[cid].members[i];
            if (auto d = logical(t, depth)) {
                Derivation root = up_from(cid, static_cast<int>(i), std::move(*d));
                classes[cid].proven = true;
                classes[cid].proof = root;
                return down_to(cid, k, std::move(root));
            }
        }
        classes[cid].failed_at = std::max(classes[cid].failed_at, depth);
        return std::nullopt;
    }
};

std::optional<Derivation> run(Engine& e, const Sequent& s, SearchStats* st) {
    std::optional<Derivation> r;
    try {
        r = e.prove(s, e.opt.max_depth);
    } catch (const BudgetExceeded&) {
        r.reset();
    }
    if (st) *st = e.stats;
    return r;
}

void add_formula_labels(const Lang& L, const Term& t, std::set<int>& out) {
    if (t->kind == Kind::F || t->kind == Kind::S) out.insert(t->conn);
    for (const auto& k : t->kids) add_formula_labels(L, k, out);
}

}  // namespace

std::optional<Derivation> prove_asl(const Lang& L, const Sequent& s, const SearchOptions& o, SearchStats* st) {
    SearchOptions opt = o;
    if (!opt.labels.empty()) {
        add_formula_labels(L, s.lhs, opt.labels);
        add_formula_labels(L, s.rhs, opt.labels);
    }
    Engine e(L, Mode::ASL, opt);
    return run(e, s, st);
}

std::optional<Derivation> prove_dl(const Lang& L, const Sequent& s, const SearchOptions& o, SearchStats* st) {
    Engine e(L, Mode::DL, o);
    if (e.ot < 0 || e.rr < 0 || e.lr < 0) throw CalculusError("DL search needs otimes, rres and lres");
    return run(e, s, st);
}

std::optional<Derivation> display_path(const Lang& L, Derivation from, const Sequent& to, const std::set<int>& labels,
                                       bool dsr2, long budget) {
    if (from.concl == to) return from;
    SearchOptions o;
    o.labels = labels;
    o.dsr2 = dsr2;
    Engine e(L, Mode::ASL, o);
    std::unordered_map<Sequent, std::pair<Sequent, Rule>, SequentHash> parent;
    std::deque<Sequent> queue{from.concl};
    parent.emplace(from.concl, std::make_pair(from.concl, rl("hyp")));
    std::vector<Move> mv;
    long seen = 0;
    while (!queue.empty()) {
        Sequent cur = queue.front();
        queue.pop_front();
        if (++seen > budget) return std::nullopt;
        e.moves(cur, mv);
        for (auto& m : mv) {
            if (parent.count(m.to)) continue;
            parent.emplace(m.to, std::make_pair(cur, m.rule));
            if (m.to == to) {
                std::vector<std::pair<Sequent, Rule>> chain;
                for (Sequent x = to; !(x == from.concl);) {
                    const auto& pr = parent.at(x);
                    chain.push_back({x, pr.second});
                    x = pr.first;
                }
                Derivation d = std::move(from);
                for (auto it = chain.rbegin(); it != chain.rend(); ++it) d = Derivation{it->first, it->second, {std::move(d)}};
                return d;
            }
            queue.push_back(m.to);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- FL through NL sequents

namespace {

struct Gentzen {
    const Lang& L;
    int ot, rr, lr;
    int max_depth;
    long budget;
    SearchStats stats;
    // memo on (antecedent tree, succedent): proven derivation or the largest failing depth
    struct Entry {
        bool ok = false;
        int failed_at = -1;
        Derivation d;
    };
    std::unordered_map<Sequent, Entry, SequentHash> memo;

    Term F(int c, Term a, Term b) const { return mk_f(L, c, {std::move(a), std::move(b)}); }
    Term comma(Term a, Term b) const { return mk_s(L, ot, {std::move(a), std::move(b)}); }
    bool isf(const Term& t, int c) const { return t->kind == Kind::F && t->conn == c; }

    // the formula an antecedent tree stands for in FL
    Term flat(const Term& g) const {
        if (g->kind == Kind::F) return g;
        return F(ot, flat(g->kids[0]), flat(g->kids[1]));
    }

    Derivation id(const Term& a) const { return {{a, a}, rl("id"), {}}; }
    Derivation trans(Derivation ab, Derivation bc) const {
        Sequent s{ab.concl.lhs, bc.concl.rhs};
        return {s, rl("trans"), {std::move(ab), std::move(bc)}};
    }
    // the four Lambek rules, conclusions computed from premises
    Derivation l1(Derivation d) const {  // B ⊢ A\C  ⇒  A⊗B ⊢ C
        const Term &B = d.concl.lhs, &A = d.concl.rhs->kids[0], &C = d.concl.rhs->kids[1];
        Sequent s{F(ot, A, B), C};
        return {s, rl("L1"), {std::move(d)}};
    }
    Derivation l2(Derivation d) const {  // A⊗B ⊢ C  ⇒  B ⊢ A\C
        const Term &A = d.concl.lhs->kids[0], &B = d.concl.lhs->kids[1], &C = d.concl.rhs;
        Sequent s{B, F(rr, A, C)};
        return {s, rl("L2"), {std::move(d)}};
    }
    Derivation l3(Derivation d) const {  // A ⊢ C/B  ⇒  A⊗B ⊢ C
        const Term &A = d.concl.lhs, &C = d.concl.rhs->kids[0], &B = d.concl.rhs->kids[1];
        Sequent s{F(ot, A, B), C};
        return {s, rl("L3"), {std::move(d)}};
    }
    Derivation l4(Derivation d) const {  // A⊗B ⊢ C  ⇒  A ⊢ C/B
        const Term &A = d.concl.lhs->kids[0], &B = d.concl.lhs->kids[1], &C = d.concl.rhs;
        Sequent s{A, F(lr, C, B)};
        return {s, rl("L4"), {std::move(d)}};
    }

    Derivation monotone(Derivation xa, Derivation yb) const {
        const Term &A = xa.concl.rhs, &B = yb.concl.rhs;
        const Term &Y = yb.concl.lhs;
        (void)Y;
        Derivation t = l2(id(F(ot, A, B)));   // B ⊢ A\(A⊗B)
        t = l1(trans(std::move(yb), std::move(t)));  // A⊗Y ⊢ A⊗B
        t = l4(std::move(t));                       // A ⊢ (A⊗B)/Y
        return l3(trans(std::move(xa), std::move(t)));  // X⊗Y ⊢ A⊗B
    }

    // from E ⊢ B and a derivation of flat(Γ[B]) ⊢ C derive flat(Γ[E]) ⊢ C; path addresses the hole in Γ
    Derivation replace(const Term& gamma, const std::vector<int>& path, std::size_t k, Derivation eb, Derivation gc) const {
        if (k == path.size()) return trans(std::move(eb), std::move(gc));
        const Term& other = gamma->kids[1 - path[k]];
        (void)other;
        if (path[k] == 0) {
            Derivation t = l4(std::move(gc));  // flat(Γ1[B]) ⊢ C/G
            t = replace(gamma->kids[0], path, k + 1, std::move(eb), std::move(t));
            return l3(std::move(t));
        }
        Derivation t = l2(std::move(gc));  // flat(Γ2[B]) ⊢ G\C
        t = replace(gamma->kids[1], path, k + 1, std::move(eb), std::move(t));
        return l1(std::move(t));
    }

    // Δ⊗(A\B) ⊢ B from Δ ⊢ A
    Derivation apply_under(Derivation da, const Term& imp) const {
        Derivation t = l1(id(imp));        // A⊗(A\B) ⊢ B
        t = l4(std::move(t));              // A ⊢ B/(A\B)
        return l3(trans(std::move(da), std::move(t)));
    }
    // (A/B)⊗Δ ⊢ A from Δ ⊢ B
    Derivation apply_over(Derivation db, const Term& quo) const {
        Derivation t = l3(id(quo));  // (A/B)⊗B ⊢ A
        t = l2(std::move(t));        // B ⊢ (A/B)\A
        return l1(trans(std::move(db), std::move(t)));
    }

    // eager invertible steps: ⊗ on the left, residuals on the right
    std::optional<std::vector<int>> find_tensor(const Term& g) const {
        if (isf(g, ot)) return std::vector<int>{};
        if (g->kind == Kind::S)
            for (int i = 0; i < 2; ++i)
                if (auto p = find_tensor(g->kids[i])) {
                    p->insert(p->begin(), i);
                    return p;
                }
        return std::nullopt;
    }

    Term replace_at_path(const Term& g, const std::vector<int>& p, std::size_t k, const Term& by) const {
        if (k == p.size()) return by;
        auto kids = g->kids;
        kids[p[k]] = replace_at_path(g->kids[p[k]], p, k + 1, by);
        return mk_s(L, ot, kids);
    }

    // FL derivation of flat(Γ) ⊢ C
    std::optional<Derivation> prove(const Term& gamma, const Term& c, int depth) {
        if (++stats.explored > budget) {
            stats.out_of_budget = true;
            throw BudgetExceeded{};
        }
        Sequent key{gamma, c};
        auto it = memo.find(key);
        if (it != memo.end()) {
            if (it->second.ok) return it->second.d;
            if (it->second.failed_at >= depth) return std::nullopt;
        }
        auto r = attempt(gamma, c, depth);
        auto& e = memo[key];
        if (r) {
            e.ok = true;
            e.d = *r;
        } else {
            e.failed_at = std::max(e.failed_at, depth);
        }
        return r;
    }

    std::optional<Derivation> attempt(const Term& gamma, const Term& c, int depth) {
        if (gamma->kind == Kind::F && term_eq(gamma, c)) return id(c);
        if (depth == 0) return std::nullopt;
        if (auto p = find_tensor(gamma)) {
            const Term& t = at(Sequent{gamma, gamma}, OccPath{0, *p});
            // flat() of both trees coincides, so ⊗L costs nothing in FL
            return prove(replace_at_path(gamma, *p, 0, comma(t->kids[0], t->kids[1])), c, depth - 1);
        }
        if (isf(c, rr)) {  // Γ ⊢ A\C  ⇐  A∘Γ ⊢ C
            auto d = prove(comma(c->kids[0], gamma), c->kids[1], depth - 1);
            if (!d) return std::nullopt;
            return l2(std::move(*d));
        }
        if (isf(c, lr)) {  // Γ ⊢ C/B  ⇐  Γ∘B ⊢ C
            auto d = prove(comma(gamma, c->kids[1]), c->kids[0], depth - 1);
            if (!d) return std::nullopt;
            return l4(std::move(*d));
        }
        if (isf(c, ot) && gamma->kind == Kind::S) {
            auto a = prove(gamma->kids[0], c->kids[0], depth - 1);
            if (a) {
                auto b = prove(gamma->kids[1], c->kids[1], depth - 1);
                if (b) return monotone(std::move(*a), std::move(*b));
            }
        }
        // \L and /L at every binary node of Γ
        std::vector<std::vector<int>> nodes;
        std::function<void(const Term&, std::vector<int>&)> walk = [&](const Term& g, std::vector<int>& p) {
            if (g->kind != Kind::S) return;
            nodes.push_back(p);
            for (int i = 0; i < 2; ++i) {
                p.push_back(i);
                walk(g->kids[i], p);
                p.pop_back();
            }
        };
        std::vector<int> p0;
        walk(gamma, p0);
        for (const auto& p : nodes) {
            const Term& n = at(Sequent{gamma, gamma}, OccPath{0, p});
            const Term &left = n->kids[0], &right = n->kids[1];
            if (isf(right, rr)) {  // Δ ∘ (A\B)
                auto da = prove(left, right->kids[0], depth - 1);
                if (da) {
                    Term g2 = replace_at_path(gamma, p, 0, right->kids[1]);
                    if (auto dc = prove(g2, c, depth - 1)) {
                        Derivation eb = apply_under(std::move(*da), right);
                        return replace(g2, p, 0, std::move(eb), std::move(*dc));
                    }
                }
            }
            if (isf(left, lr)) {  // (A/B) ∘ Δ
                auto db = prove(right, left->kids[1], depth - 1);
                if (db) {
                    Term g2 = replace_at_path(gamma, p, 0, left->kids[0]);
                    if (auto dc = prove(g2, c, depth - 1)) {
                        Derivation ea = apply_over(std::move(*db), left);
                        return replace(g2, p, 0, std::move(ea), std::move(*dc));
                    }
                }
            }
        }
        return std::nullopt;
    }
};

}  // namespace

std::optional<Derivation> prove_fl(const Lang& L, const Sequent& s, const SearchOptions& o, SearchStats* st) {
    if (!is_formula(s.lhs) || !is_formula(s.rhs)) throw CalculusError("FL relates formulas");
    Gentzen g{L, L.find("otimes"), L.find("rres"), L.find("lres"), o.max_depth, o.budget, {}, {}};
    if (g.ot < 0 || g.rr < 0 || g.lr < 0) throw CalculusError("FL needs otimes, rres and lres");
    std::optional<Derivation> r;
    try {
        r = g.prove(s.lhs, s.rhs, o.max_depth);
    } catch (const BudgetExceeded&) {
        r.reset();
    }
    if (st) *st = g.stats;
    return r;
}

Derivation fl_monotone(const Lang& L, Derivation xa, Derivation yb) {
    Gentzen g{L, L.find("otimes"), L.find("rres"), L.find("lres"), 0, 0, {}, {}};
    return g.monotone(std::move(xa), std::move(yb));
}

}  // namespace atomic
