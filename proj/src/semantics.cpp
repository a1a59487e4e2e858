#include "atomic/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace atomic {

int Model::world(std::string_view n) const {
    for (std::size_t i = 0; i < worlds.size(); ++i)
        if (worlds[i] == n) return static_cast<int>(i);
    return -1;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool world_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != ',' && c != '(' && c != ')' && c != '{' && c != '}';
}

const TupleSet& relation_of(const Lang& L, const Model& m, int conn) {
    static const TupleSet empty;
    auto it = m.rel.find(L.full.cells[L.cell(conn)].name);
    return it == m.rel.end() ? empty : it->second;
}

TupleSet complement(const TupleSet& a, int worlds, int k) {
    TupleSet out;
    for (auto& t : all_tuples(worlds, k))
        if (!a.count(t)) out.insert(t);
    return out;
}

unsigned long long power(int b, int e) {
    unsigned long long r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<unsigned long long>(b);
    return r;
}

int primitive_of(const Lang& L, int c) {
    const int orb = L.conn(c).orbit;
    for (std::size_t i = 0; i < L.full.conns.size(); ++i)
        if (L.full.conns[i].orbit == orb && L.full.conns[i].primitive) return static_cast<int>(i);
    return c;
}

int target_conn(const Lang& from, const Lang& to, int c, const SkeletonD& sk) {
    const auto& cell_name = from.full.cells[from.cell(c)].name;
    int tc = to.full.find_cell(cell_name);
    if (tc < 0) throw std::invalid_argument("target family has no cell " + cell_name);
    int r = to.with_sk(tc, sk);
    if (r < 0) throw std::invalid_argument("target cell " + cell_name + " lacks the skeleton " + sk.str());
    return r;
}

}  // namespace

std::vector<Tuple> all_tuples(int worlds, int k) {
    std::vector<Tuple> out;
    Tuple t(k, 0);
    const unsigned long long total = power(worlds, k);
    out.reserve(total);
    for (unsigned long long x = 0; x < total; ++x) {
        unsigned long long y = x;
        for (int i = k - 1; i >= 0; --i) {
            t[i] = static_cast<int>(y % worlds);
            y /= worlds;
        }
        out.push_back(t);
    }
    return out;
}

Model parse_model(std::string_view text) {
    Model m;
    std::istringstream in{std::string(text)};
    std::string raw;
    int ln = 0;
    std::size_t offset = 0;
    bool have_worlds = false;
    while (std::getline(in, raw)) {
        ++ln;
        const std::size_t start = offset;
        offset += raw.size() + 1;
        auto hash = raw.find('#');
        std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (l.empty()) continue;
        auto fail = [&](const std::string& msg, std::size_t col = 0) {
            return ParseError("model line " + std::to_string(ln) + ": " + msg, start + col);
        };
        std::istringstream ls(l);
        std::string kw;
        ls >> kw;
        if (kw == "model") {
            ls >> m.name;
            if (m.name.empty()) throw fail("model needs a name");
        } else if (kw == "worlds") {
            std::string w;
            while (ls >> w) {
                if (m.world(w) >= 0) throw fail("duplicate world " + w);
                if (!std::all_of(w.begin(), w.end(), world_char)) throw fail("bad world name " + w);
                m.worlds.push_back(w);
            }
            have_worlds = true;
        } else if (kw == "rel" || kw == "val") {
            if (!have_worlds) throw fail("worlds must be declared first");
            std::string name;
            ls >> name;
            if (name.empty()) throw fail(kw + " needs a name");
            auto& set = m.rel[name];
            std::string rest;
            std::getline(ls, rest);
            const std::size_t base = l.size() - rest.size();
            std::size_t i = 0;
            auto word = [&]() {
                std::size_t b = i;
                while (i < rest.size() && world_char(rest[i])) ++i;
                std::string w = rest.substr(b, i - b);
                int id = m.world(w);
                if (id < 0) throw fail("unknown world '" + w + "'", base + b);
                return id;
            };
            while (i < rest.size()) {
                char c = rest[i];
                if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' || c == '}') {
                    ++i;
                } else if (c == '(') {
                    ++i;
                    Tuple t;
                    while (true) {
                        while (i < rest.size() && (rest[i] == ' ' || rest[i] == ',')) ++i;
                        if (i >= rest.size()) throw fail("unterminated tuple", base + i);
                        if (rest[i] == ')') {
                            ++i;
                            break;
                        }
                        t.push_back(word());
                    }
                    set.insert(t);
                } else if (c == ')') {
                    throw fail("unexpected ')'", base + i);
                } else {
                    set.insert(Tuple{word()});
                }
            }
        } else {
            throw fail("unknown keyword '" + kw + "'");
        }
    }
    if (!have_worlds) throw ParseError("model has no worlds line", offset);
    return m;
}

std::string print_model(const Model& m) {
    std::string s = "model " + m.name + "\nworlds";
    for (const auto& w : m.worlds) s += " " + w;
    s += "\n";
    for (const auto& [name, set] : m.rel) {
        s += "rel " + name;
        bool unary = std::all_of(set.begin(), set.end(), [](const Tuple& t) { return t.size() == 1; });
        if (unary) {
            s += " {";
            bool first = true;
            for (const auto& t : set) {
                s += (first ? "" : ", ") + m.worlds[t[0]];
                first = false;
            }
            s += "}";
        } else {
            for (const auto& t : set) {
                s += " (";
                for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + m.worlds[t[i]];
                s += ")";
            }
        }
        s += "\n";
    }
    return s;
}

int relation_arity(const Lang& L, int cell) {
    const auto& members = L.full.cells[cell].members;
    if (members.empty()) return 0;
    int a = 0;
    for (int k : L.conn(members[0]).sk.types) a += k;
    return a;
}

std::vector<std::string> validate_model(const Lang& L, const Model& m) {
    std::vector<std::string> out;
    if (m.worlds.empty()) out.push_back("model has no worlds");
    for (const auto& [name, set] : m.rel) {
        int c = L.full.find_cell(name);
        if (c < 0) {
            out.push_back("relation " + name + " names no cell of " + L.full.name);
            continue;
        }
        const int a = relation_arity(L, c);
        for (const auto& t : set)
            if (static_cast<int>(t.size()) != a) {
                out.push_back("relation " + name + " has a tuple of length " + std::to_string(t.size()) + ", expected " +
                              std::to_string(a));
                break;
            }
    }
    return out;
}

TupleSet interpret(const Lang& L, const Model& m, const Term& t) {
    const int W = m.size();
    switch (t->kind) {
        case Kind::Var: throw std::invalid_argument("structure variables have no interpretation");
        case Kind::Star: return complement(interpret(L, m, t->kids[0]), W, t->type);
        case Kind::F:
        case Kind::S: break;
    }
    const int c = t->conn;
    const auto& sk = L.conn(c).sk;
    const int n = sk.arity();
    std::vector<TupleSet> args;
    for (const auto& k : t->kids) args.push_back(interpret(L, m, k));
    const Bit ex = sk.quant();   // 1: ∃
    const Bit neg = sk.sem_sign();
    // T_i: the argument tuples that make the i-th disjunct false (∀) or conjunct true (∃)
    auto in_t = [&](int i, const Tuple& y) -> bool {
        return (args[i].count(y) ? 1 : 0) ^ sk.tone[i] ^ (ex ? 0 : 1);
    };
    unsigned long long N = 1;
    for (int i = 0; i < n; ++i) {
        unsigned long long in = args[i].size();
        unsigned long long all = power(W, sk.types[i]);
        N *= (sk.tone[i] ^ (ex ? 0 : 1)) ? all - in : in;
    }
    // R position p carries the block of y_{σ⁻¹(p)}: with the action orientation fixed by the algebra
    // this is the reading under which every display move of a cell is an equivalence
    const int m1 = sk.m();
    int total = 0;
    for (int k : sk.types) total += k;
    std::map<Tuple, unsigned long long> count;
    for (const auto& r : relation_of(L, m, c)) {
        if (static_cast<int>(r.size()) != total)
            throw std::invalid_argument("relation of " + L.full.cells[L.cell(c)].name + " has the wrong arity");
        std::vector<Tuple> y(m1);
        int off = 0;
        for (int p = 1; p <= m1; ++p) {
            const int who = sk.perm.inverse()(p);
            const int len = sk.types[who - 1];
            y[who - 1].assign(r.begin() + off, r.begin() + off + len);
            off += len;
        }
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = in_t(i, y[i]);
        if (ok) ++count[y[n]];
    }
    TupleSet out;
    for (auto& w : all_tuples(W, sk.out_type())) {
        auto it = count.find(w);
        const unsigned long long cnt = it == count.end() ? 0 : it->second;
        bool in;
        if (ex)
            in = neg ? cnt < N : cnt > 0;
        else
            in = neg ? cnt == 0 : cnt == N;
        if (in) out.insert(w);
    }
    return out;
}

bool check_sequent(const Lang& L, const Model& m, const Sequent& s) {
    if (s.lhs->type != s.rhs->type) throw std::invalid_argument("sides have different types");
    auto a = interpret(L, m, s.lhs);
    auto b = interpret(L, m, s.rhs);
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool holds_at(const Lang& L, const Model& m, const Term& t, int world) {
    if (t->type != 1) throw std::invalid_argument("pointed truth needs a type-1 formula");
    return interpret(L, m, t).count(Tuple{world}) > 0;
}

void standard_boolean(const Lang& L, Model& m) {
    if (!L.boolean()) return;
    const int k = L.conn(L.and_).sk.out_type();
    auto name = [&](int conn) { return L.full.cells[L.cell(conn)].name; };
    TupleSet diag, ident;
    for (auto& x : all_tuples(m.size(), k)) {
        Tuple d = x, i = x;
        d.insert(d.end(), x.begin(), x.end());
        d.insert(d.end(), x.begin(), x.end());
        i.insert(i.end(), x.begin(), x.end());
        diag.insert(d);
        ident.insert(i);
    }
    m.rel[name(L.and_)] = diag;
    m.rel[name(L.neg)] = ident;
    m.rel[name(L.top)] = {};
}

Model random_model(const Lang& L, int worlds, double density, std::mt19937& rng) {
    Model m;
    for (int i = 0; i < worlds; ++i) m.worlds.push_back("w" + std::to_string(i + 1));
    std::bernoulli_distribution coin(density);
    for (std::size_t c = 0; c < L.full.cells.size(); ++c) {
        auto& set = m.rel[L.full.cells[c].name];
        for (auto& t : all_tuples(worlds, relation_arity(L, static_cast<int>(c))))
            if (coin(rng)) set.insert(t);
    }
    standard_boolean(L, m);
    return m;
}

Term translate_dual(const Lang& from, const Term& phi, Bit t, const Lang* to) {
    const Lang& T = to ? *to : from;
    if (phi->kind != Kind::F) throw std::invalid_argument("translations apply to formulas");
    const int c = phi->conn;
    const int base = primitive_of(from, c);
    const auto& sk = from.conn(c).sk;
    const auto& bs = from.conn(base).sk;
    if (sk.perm != bs.perm || sk.types != bs.types || sk.s != bs.s)
        throw std::invalid_argument(from.conn(c).name + " is outside the switch orbit of " + from.conn(base).name);
    BitVec v = bv_add(sk.tone, bs.tone);
    const int out = target_conn(from, T, c, act_delta(v.back() ^ t, bs));
    std::vector<Term> kids;
    for (std::size_t i = 0; i < phi->kids.size(); ++i) kids.push_back(translate_dual(from, phi->kids[i], v[i] ^ t, to));
    return mk_f(T, out, std::move(kids));
}

Term translate_to_full(const Lang& from, const Lang& to, const Term& phi) {
    if (phi->kind != Kind::F) throw std::invalid_argument("translations apply to formulas");
    std::vector<Term> kids;
    for (const auto& k : phi->kids) kids.push_back(translate_to_full(from, to, k));
    return mk_f(to, target_conn(from, to, phi->conn, from.conn(phi->conn).sk), std::move(kids));
}

CounterexamplePair counterexample_pair(int n) {
    if (n < 1) throw std::invalid_argument("counterexample needs n >= 1");
    // ⋆ universal, evaluated at position n, its last argument read at position n+1:
    // ⋆(φ̄) at x iff every R(u_1..u_{n-1}, x, u_n) has some u_i ∈ ⟦φ_i⟧ (i < n) or u_n ∉ ⟦φ_n⟧
    std::string perm = "[", types = "(", tone = "(";
    for (int i = 1; i <= n + 1; ++i) {
        int img = i == n ? n + 1 : i == n + 1 ? n : i;
        perm += (i > 1 ? "," : "") + std::to_string(img);
        types += std::string(i > 1 ? "," : "") + "1";
        tone += std::string(i > 1 ? "," : "") + (i < n ? "-" : i == n ? "+" : "-");
    }
    perm += "]";
    types += ")";
    tone += ")";
    std::string text = "family counterexample\ncell c action alpha_varsigma\n  conn star skeleton perm " + perm + " types " +
                       types + " tone " + tone + " s -\ncell letters action trivial\n";
    for (int i = 1; i <= n; ++i) text += "  conn p" + std::to_string(i) + " skeleton perm [1] types (1) tone (+) s +\n";

    CounterexamplePair out;
    out.lang = std::make_shared<const Lang>(parse_family(text));
    const Lang& L = *out.lang;
    const int star = L.find("star");
    auto letter_cell = [&](int i) { return L.full.cells[L.cell(L.find("p" + std::to_string(i)))].name; };

    Model& M = out.M;
    M.name = "M";
    for (int i = 1; i <= n; ++i) M.worlds.push_back("w" + std::to_string(i));
    for (int i = 1; i <= n; ++i) M.worlds.push_back("v" + std::to_string(i));
    Tuple ws;
    for (int i = 0; i < n; ++i) ws.push_back(i);
    auto& rm = M.rel["c"];
    for (int y = 0; y < 2 * n; ++y) {
        Tuple t = ws;
        t.push_back(y);
        rm.insert(t);
    }
    for (int i = 1; i <= n; ++i) {
        auto& v = M.rel[letter_cell(i)];
        for (int w = 0; w < 2 * n; ++w)
            if (w != n + i - 1) v.insert(Tuple{w});
    }

    Model& N = out.N;
    N.name = "N";
    for (int i = 1; i <= n; ++i) N.worlds.push_back("w" + std::to_string(i) + "'");
    auto& rn = N.rel["c"];
    for (int y = 0; y < n; ++y) {
        Tuple t = ws;
        t.push_back(y);
        rn.insert(t);
    }
    for (int i = 1; i <= n; ++i) {
        auto& v = N.rel[letter_cell(i)];
        for (int w = 0; w < n; ++w) v.insert(Tuple{w});
    }

    std::vector<Term> ps;
    for (int i = 1; i <= n; ++i) ps.push_back(mk_letter(L, "p" + std::to_string(i)));
    out.star = mk_f(L, star, ps);
    out.neg_star = mk_f(L, L.beta_partner[star], ps);
    out.m_world = n - 1;
    out.n_world = n - 1;
    for (int i = 0; i < n; ++i) {
        out.pairs.emplace_back(n + i, i);
        out.pairs.emplace_back(i, i);
    }
    return out;
}

std::vector<std::string> bisimulation_failures(const Lang& L, const Model& a, const Model& b,
                                               const std::vector<std::pair<int, int>>& z) {
    std::set<std::pair<int, int>> Z(z.begin(), z.end());
    std::vector<std::string> out;
    auto related = [&](const Tuple& r, const Tuple& s, std::size_t skip, bool forth) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i == skip) continue;
            if (!Z.count(forth ? std::make_pair(r[i], s[i]) : std::make_pair(s[i], r[i]))) return false;
        }
        return true;
    };
    for (const auto& cell : L.full.cells) {
        TupleSet empty;
        const TupleSet& ra = a.rel.count(cell.name) ? a.rel.at(cell.name) : empty;
        const TupleSet& rb = b.rel.count(cell.name) ? b.rel.at(cell.name) : empty;
        for (const auto& [x, y] : Z) {
            for (int dir = 0; dir < 2; ++dir) {
                const bool forth = dir == 0;
                const TupleSet& src = forth ? ra : rb;
                const TupleSet& dst = forth ? rb : ra;
                const int from = forth ? x : y, to = forth ? y : x;
                const Model& sm = forth ? a : b;
                const Model& tm = forth ? b : a;
                for (const auto& r : src) {
                    for (std::size_t j = 0; j < r.size(); ++j) {
                        if (r[j] != from) continue;
                        bool found = false;
                        for (const auto& s : dst) {
                            if (s.size() != r.size() || s[j] != to) continue;
                            if (related(r, s, j, forth)) {
                                found = true;
                                break;
                            }
                        }
                        if (!found) {
                            std::string tup;
                            for (std::size_t i = 0; i < r.size(); ++i) tup += (i ? "," : "") + sm.worlds[r[i]];
                            out.push_back(std::string(forth ? "forth" : "back") + " fails in " + cell.name + " at position " +
                                          std::to_string(j + 1) + " for (" + tup + ") from " + sm.worlds[from] + " to " +
                                          tm.worlds[to]);
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace atomic
