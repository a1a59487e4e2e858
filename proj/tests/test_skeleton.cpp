#include <doctest.h>

#include "atomic/skeleton.hpp"

#include <random>
#include <set>

using namespace atomic;

namespace {

Perm P(std::vector<int> v) { return Perm(std::move(v)); }

SkeletonC random_c(std::mt19937& rng, int n) {
    SkeletonC c;
    c.perm = Perm::identity(n + 1);
    std::shuffle(c.perm.img.begin(), c.perm.img.end(), rng);
    c.sem_sign = rng() & 1;
    c.quant = rng() & 1;
    for (int i = 0; i <= n; ++i) c.types.push_back(1 + static_cast<int>(rng() % 3));
    for (int i = 0; i < n; ++i) c.tonicity.push_back(rng() & 1);
    return c;
}

const SkeletonC tensor_c{Perm::identity(3), 0, 1, {1, 1, 1}, {0, 0}};
const SkeletonC rres_c{P({1, 3, 2}), 1, 0, {1, 1, 1}, {1, 0}};

}  // namespace

TEST_CASE("iota and its inverse") {
    CHECK(iota(tensor_c) == SkeletonD{Perm::identity(3), {1, 1, 1}, {0, 0, 0}, 1});
    CHECK(iota(rres_c) == SkeletonD{P({1, 3, 2}), {1, 1, 1}, {1, 0, 1}, 1});
    std::mt19937 rng(1);
    for (int rep = 0; rep < 1000; ++rep) {
        auto c = random_c(rng, static_cast<int>(rng() % 5));
        REQUIRE(iota_inv(iota(c)) == c);
    }
}

TEST_CASE("alpha in both syntaxes") {
    CHECK(act_alpha_C(Perm::identity(3), tensor_c) == tensor_c);
    CHECK(act_alpha_C(parse_perm("(2 3)", 3), tensor_c) == rres_c);
    SkeletonC lres_c{P({3, 2, 1}), 1, 0, {1, 1, 1}, {0, 1}};
    CHECK(act_alpha_C(parse_perm("(1 3)", 3), tensor_c) == lres_c);
    CHECK(act_alpha_D(parse_perm("(3 2 1)", 3), iota(tensor_c)) == SkeletonD{P({3, 1, 2}), {1, 1, 1}, {0, 1, 1}, 1});

    std::mt19937 rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        auto c = random_c(rng, 2);
        for (const auto& s : all_perms(3)) REQUIRE(act_alpha_D(s, iota(c)) == iota(act_alpha_C(s, c)));
    }
    for (int n = 0; n <= 3; ++n)
        for (int rep = 0; rep < 5; ++rep) {
            auto d = iota(random_c(rng, n));
            CHECK(act_alpha_D(Perm::identity(n + 1), d) == d);
            for (const auto& a : all_perms(n + 1))
                for (const auto& b : all_perms(n + 1)) {
                    REQUIRE(act_alpha_D(a, act_alpha_D(b, d)) == act_alpha_D(a * b, d));
                    REQUIRE(act_alpha_C(a, act_alpha_C(b, iota_inv(d))) == act_alpha_C(a * b, iota_inv(d)));
                }
        }
    std::set<SkeletonD> orbit;
    for (const auto& s : all_perms(3)) orbit.insert(act_alpha_D(s, iota(tensor_c)));
    CHECK(orbit.size() == 6);
}

TEST_CASE("beta, delta and switches") {
    auto d = iota(tensor_c);
    CHECK(act_beta(0, d) == d);
    CHECK(act_beta(1, d).tone == BitVec{1, 1, 1});
    CHECK(act_beta(1, d).s == d.s);
    CHECK(act_delta(1, act_delta(1, d)) == d);
    CHECK(act_delta(1, d).tone == BitVec{0, 0, 1});
    // β in C-syntax flips every sign and tonicity
    auto c = iota_inv(act_beta(1, iota(rres_c)));
    CHECK(c.sem_sign == 0);
    CHECK(c.quant == 1);
    CHECK(c.tonicity == BitVec{0, 1});
    // δ in C-syntax flips only the sem sign and quantifier
    auto cd = iota_inv(act_delta(1, iota(rres_c)));
    CHECK(cd.tonicity == rres_c.tonicity);
    CHECK(cd.sem_sign != rres_c.sem_sign);
    CHECK(cd.quant != rres_c.quant);
    // the switch step of the worked example, from the example's starting tone (1,0,0)
    SkeletonD start{P({1, 3, 2}), {1, 1, 1}, {1, 0, 0}, 1};
    auto step = act_alpha_D(parse_perm("(2 3)", 3), start);
    CHECK(step.tone == BitVec{0, 0, 1});
    CHECK(act_switch(BitVec{0, 1, 1}, step).tone == BitVec{0, 1, 0});
}

TEST_CASE("semidirect action") {
    auto d = iota(tensor_c);
    CHECK(act_semidirect(SemiElem::identity(3), d) == d);
    std::set<SkeletonD> orbit;
    auto all = all_semi(3);
    for (const auto& g : all) orbit.insert(act_semidirect(g, d));
    CHECK(orbit.size() == 48);
    std::mt19937 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        auto x = iota(random_c(rng, 2));
        for (const auto& g : all) {
            if (!g.is_identity()) REQUIRE(act_semidirect(g, x) != x);
            for (int k = 0; k < 4; ++k) {
                const auto& h = all[rng() % 48];
                REQUIRE(act_semidirect(g, act_semidirect(h, x)) == act_semidirect(g * h, x));
            }
        }
    }
    // α∘δ orbit
    std::set<SkeletonD> ad;
    for (const auto& s : all_perms(3))
        for (Bit b : {Bit(0), Bit(1)}) ad.insert(act_delta(b, act_alpha_D(s, d)));
    CHECK(ad.size() == 12);
}

TEST_CASE("free word action agrees with phi") {
    std::mt19937 rng(4);
    auto d = iota(tensor_c);
    CHECK(act_freeword(FreeWord{3, {}}, d) == d);
    for (int rep = 0; rep < 500; ++rep) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto x = iota(random_c(rng, n));
        FreeWord w{n + 1, {}};
        int len = static_cast<int>(rng() % 7);
        for (int i = 0; i < len; ++i) {
            Perm p = Perm::identity(n + 1);
            std::shuffle(p.img.begin(), p.img.end(), rng);
            w.letters.push_back({static_cast<Bit>(rng() & 1), p});
        }
        REQUIRE(act_freeword(w, x) == act_semidirect(morph_phi(w), x));
    }
}

TEST_CASE("semi_between recovers the acting element") {
    auto d = iota(tensor_c);
    for (const auto& g : all_semi(3)) {
        SemiElem h;
        REQUIRE(semi_between(d, act_semidirect(g, d), h));
        REQUIRE(h == g);
    }
}

TEST_CASE("skeleton text syntax") {
    auto d = parse_skeleton_d("perm [1,3,2] types (1,1,1) tone (-,+,-) s -");
    CHECK(d == SkeletonD{P({1, 3, 2}), {1, 1, 1}, {1, 0, 1}, 1});
    CHECK(parse_skeleton_d(d.str()) == d);
    CHECK(parse_skeleton_c(rres_c.str()) == rres_c);
    CHECK_THROWS_AS(parse_skeleton_d("perm [1,3,2] types (1,1) tone (-,+,-) s -"), ParseError);
    CHECK_THROWS_AS(parse_skeleton_d("perm [1,3,2] tone (-,+,-) s -"), ParseError);
}
