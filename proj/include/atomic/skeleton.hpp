#pragma once

#include "atomic/algebra.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace atomic {

// Aucher-style skeleton: (σ, ±, Æ, (k_1..k_{n+1}), (±_1..±_n))
struct SkeletonC {
    Perm perm;
    Bit sem_sign = 0;
    Bit quant = 0;
    std::vector<int> types;
    BitVec tonicity;

    int arity() const { return perm.size() - 1; }
    std::string str() const;
    auto operator<=>(const SkeletonC&) const = default;
    bool operator==(const SkeletonC&) const = default;
};

// Simplified skeleton: (σ, k, v, s) with v_{n+1} = ± and s = ± + Æ.
// Member order doubles as the total order used to pick minimal connectives.
struct SkeletonD {
    Perm perm;
    std::vector<int> types;
    BitVec tone;
    Bit s = 0;

    int arity() const { return perm.size() - 1; }
    int m() const { return perm.size(); }
    Bit sem_sign() const { return tone.back(); }
    Bit quant() const { return tone.back() ^ s; }
    int out_type() const { return types.back(); }
    std::string str() const;
    auto operator<=>(const SkeletonD&) const = default;
    bool operator==(const SkeletonD&) const = default;
};

SkeletonD iota(const SkeletonC& c);
SkeletonC iota_inv(const SkeletonD& d);

SkeletonC act_alpha_C(const Perm& r, const SkeletonC& c);
SkeletonD act_alpha_D(const Perm& r, const SkeletonD& d);
SkeletonD act_beta(Bit b, const SkeletonD& d);
SkeletonD act_delta(Bit b, const SkeletonD& d);
SkeletonD act_switch(const BitVec& v, const SkeletonD& d);
SkeletonD act_semidirect(const SemiElem& g, const SkeletonD& d);
SkeletonD act_freeword(const FreeWord& w, const SkeletonD& d);

// The unique g with g·a = b when it exists (all implemented actions are free).
bool semi_between(const SkeletonD& a, const SkeletonD& b, SemiElem& g);

// "perm [1,2,3] types (1,1,1) tone (+,+,+) s -"
SkeletonD parse_skeleton_d(std::string_view text);
// "C([1,3,2]; -; A; (1,1,1); (-,+))", quantifier written A/E
SkeletonC parse_skeleton_c(std::string_view text);

}  // namespace atomic
