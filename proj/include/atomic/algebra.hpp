#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atomic {

// GF(2) element. 0 reads as '+' (or the universal quantifier), 1 as '-' (or the existential one).
using Bit = std::uint8_t;
using BitVec = std::vector<Bit>;

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(const std::string& msg, std::size_t p)
        : std::runtime_error(msg + " at offset " + std::to_string(p)), pos(p) {}
};

struct Perm {
    std::vector<int> img;  // one-line notation, 1-based

    Perm() = default;
    explicit Perm(std::vector<int> images);

    static Perm identity(int m);
    static Perm transposition(int m, int a, int b);

    int size() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[i - 1]; }
    bool is_identity() const;
    Perm inverse() const;
    std::string str() const;

    auto operator<=>(const Perm&) const = default;
    bool operator==(const Perm&) const = default;
};

// apply a first, then b
Perm perm_compose(const Perm& a, const Perm& b);
inline Perm operator*(const Perm& a, const Perm& b) { return perm_compose(a, b); }

// Accepts "[2,1,3]" (one-line) or cycle notation "(1 3)(2 4)" / "id"; m fixes the degree for cycles.
Perm parse_perm(std::string_view text, int m);
std::vector<Perm> all_perms(int m);

char bit_sign(Bit b);
Bit parse_sign(std::string_view tok);
BitVec bv_add(const BitVec& a, const BitVec& b);
BitVec bv_const(int m, Bit b);
BitVec bv_unit(int m, int i);  // e_i, 1-based
std::string bv_str(const BitVec& v);            // (0,1,1)
std::string bv_sign_str(const BitVec& v);       // (+,-,-)

struct BitMatrix {
    int m = 0;
    std::vector<Bit> a;  // row major

    BitMatrix() = default;
    explicit BitMatrix(int dim) : m(dim), a(static_cast<std::size_t>(dim) * dim, 0) {}
    static BitMatrix identity(int dim);
    static BitMatrix from_rows(const std::vector<std::vector<int>>& rows);

    Bit at(int i, int j) const { return a[static_cast<std::size_t>(i) * m + j]; }
    Bit& at(int i, int j) { return a[static_cast<std::size_t>(i) * m + j]; }
    BitVec apply(const BitVec& v) const;
    std::string str() const;

    bool operator==(const BitMatrix&) const = default;
};

BitMatrix operator*(const BitMatrix& x, const BitMatrix& y);

// matrices act on R^{n+1}; the arity n is implicit in the perm size
BitMatrix mat_P(const Perm& s);
BitMatrix mat_T(int n);
BitMatrix mat_Q(const Perm& s);
BitVec act_R(const Perm& s, const BitVec& v);

struct SemiElem {
    BitVec vec;
    Perm perm;

    static SemiElem identity(int m);
    int size() const { return perm.size(); }
    bool is_identity() const;
    std::string str() const;  // ((0,1,1),[1,3,2])

    auto operator<=>(const SemiElem&) const = default;
    bool operator==(const SemiElem&) const = default;
};

SemiElem semi_mul(const SemiElem& a, const SemiElem& b);
SemiElem semi_inv(const SemiElem& a);
inline SemiElem operator*(const SemiElem& a, const SemiElem& b) { return semi_mul(a, b); }
SemiElem parse_semi(std::string_view text);
std::vector<SemiElem> all_semi(int m);

struct FreeWord {
    int m = 1;  // ambient degree n+1
    std::vector<std::pair<Bit, Perm>> letters;

    std::string str() const;
    bool operator==(const FreeWord&) const = default;
};

FreeWord word_concat(const FreeWord& u, const FreeWord& v);
FreeWord word_reduce(const FreeWord& w);
SemiElem morph_phi(const FreeWord& w);
// the unreduced 2n+2 letter word of the definition
FreeWord func_psi(const SemiElem& x);
FreeWord parse_word(std::string_view text, int m);

}  // namespace atomic
