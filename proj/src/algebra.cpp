#include "atomic/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace atomic {

Perm::Perm(std::vector<int> images) : img(std::move(images)) {
    std::vector<char> seen(img.size() + 1, 0);
    for (int x : img) {
        if (x < 1 || x > size() || seen[x])
            throw std::invalid_argument("not a permutation: " + str());
        seen[x] = 1;
    }
}

Perm Perm::identity(int m) {
    Perm p;
    p.img.resize(m);
    std::iota(p.img.begin(), p.img.end(), 1);
    return p;
}

Perm Perm::transposition(int m, int a, int b) {
    Perm p = identity(m);
    std::swap(p.img[a - 1], p.img[b - 1]);
    return p;
}

bool Perm::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (img[i] != i + 1) return false;
    return true;
}

Perm Perm::inverse() const {
    Perm r;
    r.img.resize(img.size());
    for (int i = 0; i < size(); ++i) r.img[img[i] - 1] = i + 1;
    return r;
}

std::string Perm::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(img[i]);
    }
    return s + "]";
}

Perm perm_compose(const Perm& a, const Perm& b) {
    if (a.size() != b.size()) throw std::invalid_argument("perm_compose: length mismatch");
    Perm r;
    r.img.resize(a.img.size());
    for (int i = 1; i <= a.size(); ++i) r.img[i - 1] = b(a(i));
    return r;
}

namespace {

void skip_ws(std::string_view t, std::size_t& i) {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
}

int read_int(std::string_view t, std::size_t& i) {
    skip_ws(t, i);
    std::size_t st = i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (st == i) throw ParseError("expected integer", st);
    return std::stoi(std::string(t.substr(st, i - st)));
}

void expect(std::string_view t, std::size_t& i, char c) {
    skip_ws(t, i);
    if (i >= t.size() || t[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
}

}  // namespace

Perm parse_perm(std::string_view t, int m) {
    std::size_t i = 0;
    skip_ws(t, i);
    if (t.substr(i, 2) == "id") return Perm::identity(m);
    if (i < t.size() && t[i] == '[') {
        ++i;
        std::vector<int> v;
        skip_ws(t, i);
        if (i < t.size() && t[i] == ']') {
            ++i;
        } else {
            for (;;) {
                v.push_back(read_int(t, i));
                skip_ws(t, i);
                if (i < t.size() && t[i] == ',') { ++i; continue; }
                expect(t, i, ']');
                break;
            }
        }
        try {
            return Perm(v);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), 0);
        }
    }
    if (m <= 0) throw ParseError("cycle notation needs a known degree", i);
    // product of cycles, applied right to left as functions
    std::vector<int> f(m);
    std::iota(f.begin(), f.end(), 1);
    std::vector<std::vector<int>> cycles;
    while (true) {
        skip_ws(t, i);
        if (i >= t.size()) break;
        expect(t, i, '(');
        std::vector<int> c;
        for (;;) {
            skip_ws(t, i);
            if (i < t.size() && t[i] == ')') { ++i; break; }
            int x = read_int(t, i);
            if (x < 1 || x > m) throw ParseError("cycle entry out of range", i);
            c.push_back(x);
            skip_ws(t, i);
            if (i < t.size() && t[i] == ',') ++i;
        }
        cycles.push_back(c);
    }
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        const auto& c = *it;
        std::vector<int> g(m);
        std::iota(g.begin(), g.end(), 1);
        for (std::size_t k = 0; k < c.size(); ++k) g[c[k] - 1] = c[(k + 1) % c.size()];
        for (int x = 0; x < m; ++x) f[x] = g[f[x] - 1];
    }
    try {
        return Perm(f);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

std::vector<Perm> all_perms(int m) {
    std::vector<Perm> out;
    Perm p = Perm::identity(m);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.img.begin(), p.img.end()));
    return out;
}

char bit_sign(Bit b) { return b ? '-' : '+'; }

Bit parse_sign(std::string_view tok) {
    if (tok == "+" || tok == "0" || tok == "A" || tok == "∀") return 0;
    if (tok == "-" || tok == "1" || tok == "E" || tok == "∃" || tok == "−") return 1;
    throw ParseError("bad sign '" + std::string(tok) + "'", 0);
}

BitVec bv_add(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("bit vector length mismatch");
    BitVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
    return r;
}

BitVec bv_const(int m, Bit b) { return BitVec(m, b); }

BitVec bv_unit(int m, int i) {
    BitVec v(m, 0);
    v[i - 1] = 1;
    return v;
}

std::string bv_str(const BitVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += char('0' + v[i]);
    }
    return s + ")";
}

std::string bv_sign_str(const BitVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += bit_sign(v[i]);
    }
    return s + ")";
}

BitMatrix BitMatrix::identity(int dim) {
    BitMatrix r(dim);
    for (int i = 0; i < dim; ++i) r.at(i, i) = 1;
    return r;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    BitMatrix r(static_cast<int>(rows.size()));
    for (int i = 0; i < r.m; ++i)
        for (int j = 0; j < r.m; ++j) r.at(i, j) = static_cast<Bit>(rows[i].at(j) & 1);
    return r;
}

BitVec BitMatrix::apply(const BitVec& v) const {
    if (static_cast<int>(v.size()) != m) throw std::invalid_argument("matrix/vector size mismatch");
    BitVec r(m, 0);
    for (int i = 0; i < m; ++i) {
        Bit acc = 0;
        for (int k = 0; k < m; ++k) acc ^= at(i, k) & v[k];
        r[i] = acc;
    }
    return r;
}

std::string BitMatrix::str() const {
    std::string s;
    for (int i = 0; i < m; ++i) {
        s += '(';
        for (int j = 0; j < m; ++j) {
            if (j) s += ',';
            s += char('0' + at(i, j));
        }
        s += ')';
    }
    return s;
}

BitMatrix operator*(const BitMatrix& x, const BitMatrix& y) {
    if (x.m != y.m) throw std::invalid_argument("matrix size mismatch");
    BitMatrix r(x.m);
    for (int i = 0; i < x.m; ++i)
        for (int k = 0; k < x.m; ++k)
            if (x.at(i, k))
                for (int j = 0; j < x.m; ++j) r.at(i, j) ^= y.at(k, j);
    return r;
}

BitMatrix mat_P(const Perm& s) {
    BitMatrix r(s.size());
    for (int i = 1; i <= s.size(); ++i) r.at(i - 1, s(i) - 1) = 1;
    return r;
}

BitMatrix mat_T(int n) {
    const int m = n + 1;
    BitMatrix r(m);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
            r.at(i - 1, j - 1) = static_cast<Bit>(((i == j) + (j == m) * (1 + (i == m))) & 1);
    return r;
}

// Entrywise: δ_{(m σ(m))(σ(i)), j} + δ_{σ(m), j}(1 + δ_{m, σ(i)})(1 + δ_{σ(m), m}), m = n+1.
BitMatrix mat_Q(const Perm& s) {
    const int m = s.size();
    const Perm t = Perm::transposition(m, m, s(m));
    BitMatrix r(m);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            int v = (t(s(i)) == j) + (s(m) == j) * (1 + (m == s(i))) * (1 + (s(m) == m));
            r.at(i - 1, j - 1) = static_cast<Bit>(v & 1);
        }
    return r;
}

BitVec act_R(const Perm& s, const BitVec& v) {
    const int m = s.size();
    if (static_cast<int>(v.size()) != m) throw std::invalid_argument("act_R: length mismatch");
    BitVec d(m);
    for (int j = 1; j <= m; ++j) d[j - 1] = static_cast<Bit>(((1 + (s(j) == m)) * (1 + (s(m) == m))) & 1);
    return bv_add(d, mat_Q(s).apply(v));
}

SemiElem SemiElem::identity(int m) { return {BitVec(m, 0), Perm::identity(m)}; }

bool SemiElem::is_identity() const {
    return perm.is_identity() && std::all_of(vec.begin(), vec.end(), [](Bit b) { return b == 0; });
}

std::string SemiElem::str() const { return "(" + bv_str(vec) + "," + perm.str() + ")"; }

SemiElem semi_mul(const SemiElem& a, const SemiElem& b) {
    if (a.size() != b.size()) throw std::invalid_argument("semi_mul: arity mismatch");
    return {bv_add(a.vec, mat_Q(a.perm).apply(b.vec)), a.perm * b.perm};
}

SemiElem semi_inv(const SemiElem& a) {
    Perm pi = a.perm.inverse();
    return {mat_Q(pi).apply(a.vec), pi};
}

SemiElem parse_semi(std::string_view t) {
    std::size_t i = 0;
    expect(t, i, '(');
    expect(t, i, '(');
    BitVec v;
    for (;;) {
        skip_ws(t, i);
        if (i < t.size() && (t[i] == '0' || t[i] == '1')) v.push_back(static_cast<Bit>(t[i++] - '0'));
        else if (i < t.size() && (t[i] == '+' || t[i] == '-')) v.push_back(t[i++] == '-');
        else throw ParseError("expected bit", i);
        skip_ws(t, i);
        if (i < t.size() && t[i] == ',') { ++i; continue; }
        expect(t, i, ')');
        break;
    }
    expect(t, i, ',');
    skip_ws(t, i);
    std::size_t st = i;
    int depth = 0;
    while (i < t.size()) {
        if (t[i] == '[' || t[i] == '(') ++depth;
        if (t[i] == ']' || t[i] == ')') {
            if (depth == 0) break;
            --depth;
        }
        ++i;
    }
    Perm p = parse_perm(t.substr(st, i - st), static_cast<int>(v.size()));
    expect(t, i, ')');
    skip_ws(t, i);
    if (i != t.size()) throw ParseError("trailing input", i);
    if (p.size() != static_cast<int>(v.size())) throw ParseError("group element: vector and permutation sizes differ", st);
    return {v, p};
}

std::vector<SemiElem> all_semi(int m) {
    std::vector<SemiElem> out;
    for (const Perm& p : all_perms(m))
        for (int mask = 0; mask < (1 << m); ++mask) {
            BitVec v(m);
            for (int k = 0; k < m; ++k) v[k] = (mask >> k) & 1;
            out.push_back({v, p});
        }
    return out;
}

std::string FreeWord::str() const {
    if (letters.empty()) return "e";
    std::string s;
    for (const auto& [b, p] : letters) s += "(" + std::string(1, char('0' + b)) + "," + p.str() + ")";
    return s;
}

FreeWord word_concat(const FreeWord& u, const FreeWord& v) {
    if (u.m != v.m) throw std::invalid_argument("word_concat: degree mismatch");
    FreeWord r = u;
    r.letters.insert(r.letters.end(), v.letters.begin(), v.letters.end());
    return r;
}

FreeWord word_reduce(const FreeWord& w) {
    FreeWord r{w.m, {}};
    for (const auto& letter : w.letters) {
        auto cur = letter;
        for (;;) {
            if (cur.first == 0 && cur.second.is_identity()) break;  // neutral letter vanishes
            if (r.letters.empty()) {
                r.letters.push_back(cur);
                break;
            }
            auto& last = r.letters.back();
            if (cur.first == 0) {
                // (g,h)(0,h') ~ (g, h h')
                cur = {last.first, last.second * cur.second};
                r.letters.pop_back();
                continue;
            }
            if (last.second.is_identity()) {
                // (g,id)(g',h) ~ (g+g', h)
                cur = {static_cast<Bit>(last.first ^ cur.first), cur.second};
                r.letters.pop_back();
                continue;
            }
            r.letters.push_back(cur);
            break;
        }
    }
    return r;
}

SemiElem morph_phi(const FreeWord& w) {
    SemiElem acc = SemiElem::identity(w.m);
    for (const auto& [s, p] : w.letters) acc = acc * SemiElem{bv_const(w.m, s), p};
    return acc;
}

FreeWord func_psi(const SemiElem& x) {
    const int m = x.size(), n = m - 1;
    FreeWord w{m, {}};
    for (int i = 1; i <= n; ++i) {
        w.letters.push_back({0, Perm::transposition(m, i, m)});
        w.letters.push_back({x.vec[i - 1], Perm::transposition(m, i, m)});
    }
    w.letters.push_back({x.vec[n], Perm::identity(m)});
    for (int i = 1; i <= n; ++i) {
        w.letters.push_back({0, Perm::transposition(m, i, m)});
        w.letters.push_back({x.vec[n], Perm::transposition(m, i, m)});
    }
    w.letters.push_back({0, x.perm});
    return w;
}

FreeWord parse_word(std::string_view t, int m) {
    FreeWord w{m, {}};
    std::size_t i = 0;
    skip_ws(t, i);
    if (t.substr(i) == "e") return w;
    while (true) {
        skip_ws(t, i);
        if (i >= t.size()) break;
        expect(t, i, '(');
        skip_ws(t, i);
        Bit b;
        if (i < t.size() && (t[i] == '0' || t[i] == '+')) b = 0;
        else if (i < t.size() && (t[i] == '1' || t[i] == '-')) b = 1;
        else throw ParseError("expected bit", i);
        ++i;
        expect(t, i, ',');
        skip_ws(t, i);
        std::size_t st = i;
        int depth = 0;
        while (i < t.size()) {
            if (t[i] == '[' || t[i] == '(') ++depth;
            if (t[i] == ']' || t[i] == ')') {
                if (depth == 0) break;
                --depth;
            }
            ++i;
        }
        w.letters.push_back({b, parse_perm(t.substr(st, i - st), m)});
        expect(t, i, ')');
    }
    return w;
}

}  // namespace atomic
