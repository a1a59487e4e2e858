#include <doctest.h>

#include "atomic/algebra.hpp"

#include <random>

using namespace atomic;

namespace {

Perm P(std::vector<int> v) { return Perm(std::move(v)); }

// naive GF(2) product written without BitMatrix internals
std::vector<std::vector<int>> naive_mul(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
    std::size_t m = a.size();
    std::vector<std::vector<int>> c(m, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            int s = 0;
            for (std::size_t k = 0; k < m; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s % 2;
        }
    return c;
}

std::vector<std::vector<int>> rows(const BitMatrix& x) {
    std::vector<std::vector<int>> r(x.m, std::vector<int>(x.m));
    for (int i = 0; i < x.m; ++i)
        for (int j = 0; j < x.m; ++j) r[i][j] = x.at(i, j);
    return r;
}

Perm random_perm(std::mt19937& rng, int m) {
    Perm p = Perm::identity(m);
    std::shuffle(p.img.begin(), p.img.end(), rng);
    return p;
}

BitVec random_bits(std::mt19937& rng, int m) {
    BitVec v(m);
    for (auto& b : v) b = rng() & 1;
    return v;
}

FreeWord random_word(std::mt19937& rng, int m, int maxlen) {
    FreeWord w{m, {}};
    int len = static_cast<int>(rng() % (maxlen + 1));
    for (int i = 0; i < len; ++i) {
        Bit b = rng() & 1;
        Perm p = (rng() % 3 == 0) ? Perm::identity(m) : random_perm(rng, m);
        w.letters.push_back({b, p});
    }
    return w;
}

}  // namespace

TEST_CASE("perm_compose applies the left factor first") {
    // pointwise b(a(i)); standard right-to-left composition would give [2,3,1]
    CHECK(P({1, 3, 2}) * P({3, 2, 1}) == P({3, 1, 2}));
    CHECK(parse_perm("(1 3)", 3) * parse_perm("(1 2 3)", 3) == parse_perm("(2 3)", 3));
    // pointwise oracle
    Perm a = P({1, 3, 2}), b = P({3, 2, 1});
    for (int i = 1; i <= 3; ++i) CHECK((a * b)(i) == b(a(i)));
    for (const auto& s : all_perms(4)) {
        CHECK(Perm::identity(4) * s == s);
        CHECK(s * s.inverse() == Perm::identity(4));
    }
    CHECK_THROWS(P({1, 2}) * P({1, 2, 3}));
}

TEST_CASE("perm parsing") {
    CHECK(parse_perm("[2,1,3]", 0) == P({2, 1, 3}));
    CHECK(parse_perm("(2 3)", 3) == P({1, 3, 2}));
    CHECK(parse_perm("(1 2 3)", 3) == P({2, 3, 1}));
    CHECK(parse_perm("(3 2 1)", 3) == P({3, 1, 2}));
    CHECK(parse_perm("id", 3) == Perm::identity(3));
    CHECK_THROWS_AS(parse_perm("[1,1,3]", 0), ParseError);
    CHECK_THROWS_AS(parse_perm("[1,2", 0), ParseError);
}

TEST_CASE("matrix P") {
    CHECK(mat_P(Perm::identity(4)) == BitMatrix::identity(4));
    // entrywise oracle δ_{σ(i),j}
    Perm s = P({1, 3, 2});
    std::vector<std::vector<int>> expect(3, std::vector<int>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) expect[i][j] = s(i + 1) == j + 1;
    CHECK(rows(mat_P(s)) == expect);
    CHECK(mat_P(s) == BitMatrix::from_rows({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
    for (int m = 1; m <= 5; ++m)
        for (const auto& a : all_perms(m)) {
            CHECK(mat_P(a) * mat_P(a.inverse()) == BitMatrix::identity(m));
        }
    for (const auto& a : all_perms(4))
        for (const auto& b : all_perms(4)) REQUIRE(mat_P(a * b) == mat_P(a) * mat_P(b));
}

TEST_CASE("matrix T") {
    CHECK(mat_T(2) == BitMatrix::from_rows({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}));
    for (int n = 0; n <= 5; ++n) CHECK(mat_T(n) * mat_T(n) == BitMatrix::identity(n + 1));
    // T s = (s_1+s_{n+1}, ..., s_n+s_{n+1}, s_{n+1})
    std::mt19937 rng(7);
    for (int n = 0; n <= 5; ++n)
        for (int rep = 0; rep < 20; ++rep) {
            BitVec s = random_bits(rng, n + 1);
            BitVec e = s;
            for (int i = 0; i < n; ++i) e[i] ^= s[n];
            CHECK(mat_T(n).apply(s) == e);
        }
}

TEST_CASE("matrix Q") {
    CHECK(mat_Q(Perm::identity(3)) == BitMatrix::identity(3));
    CHECK(mat_Q(P({1, 3, 2})) == BitMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 1, 1}}));
    for (int n = 0; n <= 4; ++n) {
        auto T = mat_T(n);
        for (const auto& s : all_perms(n + 1)) {
            REQUIRE(T * mat_Q(s) == mat_P(s) * T);
            // oracle: Q = T P T computed by the naive product
            CHECK(rows(mat_Q(s)) == naive_mul(naive_mul(rows(T), rows(mat_P(s))), rows(T)));
        }
    }
    for (int n = 0; n <= 3; ++n)
        for (const auto& a : all_perms(n + 1))
            for (const auto& b : all_perms(n + 1)) REQUIRE(mat_Q(a * b) == mat_Q(a) * mat_Q(b));
}

TEST_CASE("R action on tonicity signatures") {
    CHECK(act_R(Perm::identity(3), BitVec{1, 0, 1}) == BitVec{1, 0, 1});
    CHECK(act_R(P({1, 3, 2}), BitVec{1, 0, 0}) == BitVec{0, 0, 1});
    CHECK(act_R(P({3, 2, 1}), BitVec{0, 0, 0}) == BitVec{0, 1, 1});
    for (int n = 0; n <= 3; ++n) {
        const int m = n + 1;
        for (const auto& a : all_perms(m))
            for (int mask = 0; mask < (1 << m); ++mask) {
                BitVec v(m);
                for (int k = 0; k < m; ++k) v[k] = (mask >> k) & 1;
                for (const auto& b : all_perms(m)) REQUIRE(act_R(a, act_R(b, v)) == act_R(a * b, v));
                for (int mb = 0; mb < (1 << m); ++mb) {
                    BitVec bb(m);
                    for (int k = 0; k < m; ++k) bb[k] = (mb >> k) & 1;
                    REQUIRE(act_R(a, bv_add(bb, v)) == bv_add(mat_Q(a).apply(bb), act_R(a, v)));
                }
            }
    }
}

TEST_CASE("semidirect product") {
    auto g = SemiElem{{1, 1, 1}, parse_perm("(1 3)", 3)};
    auto h = SemiElem{{1, 1, 1}, parse_perm("(1 2 3)", 3)};
    CHECK(g * h == SemiElem{{0, 1, 1}, parse_perm("(2 3)", 3)});
    CHECK(SemiElem::identity(3) * g == g);
    auto all = all_semi(3);
    CHECK(all.size() == 48);
    for (const auto& a : all) {
        REQUIRE((a * semi_inv(a)).is_identity());
        REQUIRE((semi_inv(a) * a).is_identity());
    }
    std::mt19937 rng(11);
    for (int rep = 0; rep < 300; ++rep) {
        auto a = all[rng() % 48], b = all[rng() % 48], c = all[rng() % 48];
        REQUIRE((a * b) * c == a * (b * c));
    }
    CHECK(parse_semi("((0,1,1),[1,3,2])") == SemiElem{{0, 1, 1}, P({1, 3, 2})});
    CHECK(parse_semi(g.str()) == g);
    CHECK_THROWS_AS(parse_semi("((0,1),[1,3,2])"), ParseError);
}

TEST_CASE("free words") {
    const int m = 3;
    FreeWord neutral{m, {{0, Perm::identity(m)}}};
    CHECK(word_reduce(neutral).letters.empty());
    FreeWord w1{m, {{1, Perm::identity(m)}, {0, Perm::identity(m)}}};
    CHECK(word_reduce(w1) == FreeWord{m, {{1, Perm::identity(m)}}});
    Perm t12 = parse_perm("(1 2)", m);
    FreeWord w2{m, {{1, t12}, {1, t12}}};
    CHECK(word_reduce(w2).letters.size() == 2);

    CHECK(morph_phi(FreeWord{m, {}}).is_identity());
    FreeWord ex{m, {{1, parse_perm("(1 3)", m)}, {1, parse_perm("(1 2 3)", m)}}};
    CHECK(morph_phi(ex) == SemiElem{{0, 1, 1}, parse_perm("(2 3)", m)});
    CHECK(parse_word(ex.str(), m) == ex);
}

TEST_CASE("phi is a morphism and factors through reduction") {
    std::mt19937 rng(3);
    for (int rep = 0; rep < 1000; ++rep) {
        int m = 2 + static_cast<int>(rng() % 3);
        auto u = random_word(rng, m, 8), v = random_word(rng, m, 8);
        REQUIRE(morph_phi(word_concat(u, v)) == morph_phi(u) * morph_phi(v));
        REQUIRE(morph_phi(word_reduce(u)) == morph_phi(u));
        REQUIRE(word_reduce(word_concat(u, v)) == word_reduce(word_concat(word_reduce(u), word_reduce(v))));
    }
}

TEST_CASE("psi is a right inverse of phi") {
    for (const auto& x : all_semi(3)) REQUIRE(morph_phi(func_psi(x)) == x);
    CHECK(word_reduce(func_psi(SemiElem::identity(3))).letters.empty());
    auto w = func_psi(SemiElem{{1, 0, 1}, P({2, 3, 1})});
    CHECK(w.letters.size() == 4 * 2 + 2);
    std::mt19937 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        int m = 1 + static_cast<int>(rng() % 5);
        SemiElem x{random_bits(rng, m), random_perm(rng, m)};
        REQUIRE(morph_phi(func_psi(x)) == x);
    }
}
