#pragma once

#include "qmfold/cf.hpp"

namespace qmfold {

// Nonnegative quantity coeff * 2^exp with coeff in [1,2) (coeff == 0 encodes
// zero). exp is arbitrary precision, so doubly-exponential towers stay
// symbolic. Comparisons are exact; add/sub take a rounding direction and stay
// sound on that side when a term is too far below the other to absorb exactly.
struct Pow2Bound {
    Rat coeff;
    Int exp;
};

enum class Round { down, up };

// Exponent gap beyond which add/sub replace the negligible term by a directed
// coefficient bump of 2^(1 - window) instead of exact absorption.
inline constexpr unsigned long p2b_exact_window = 4096;

Pow2Bound p2b_make(Rat coeff, Int exp);      // exact normalization; coeff >= 0
Pow2Bound p2b_from_rational(const Rat& x);   // x >= 0
Pow2Bound p2b_pow2(Int exp);                 // 2^exp
Rat p2b_to_rational(const Pow2Bound& p, unsigned long max_bits = 1ul << 26);

int p2b_compare(const Pow2Bound& a, const Pow2Bound& b);      // exact
int p2b_compare_rational(const Pow2Bound& a, const Rat& x);   // exact

// a + b; with Round::up the result is >= the true sum, with Round::down <=.
Pow2Bound p2b_add(const Pow2Bound& a, const Pow2Bound& b, Round dir);
// a - b (requires a > b); same directional guarantee.
Pow2Bound p2b_sub(const Pow2Bound& a, const Pow2Bound& b, Round dir);
Pow2Bound p2b_mul(const Pow2Bound& a, const Pow2Bound& b);    // exact
Pow2Bound p2b_shift(Pow2Bound p, const Int& bits);            // * 2^bits, exact

}  // namespace qmfold
