#pragma once

#include <string>
#include <vector>

#include "qmfold/cf.hpp"

namespace qmfold {

// num / 2^exp with num odd (or num = 0 and exp = 0). exp is arbitrary
// precision: question-mark images of long expansions live at huge scales.
struct Dyadic {
    Int num;
    Int exp;
};

Dyadic dyadic_make(Int num, Int exp);   // normalizes
int dyadic_compare(const Dyadic& a, const Dyadic& b);
bool dyadic_equal(const Dyadic& a, const Dyadic& b);

// Materializes 2^exp; throws cap_error above max_bits.
Rat dyadic_to_rational(const Dyadic& d, unsigned long max_bits = 1ul << 26);
Dyadic dyadic_from_rational(const Rat& x);   // denominator must be a power of 2

struct IterateLimits {
    // abort a ? application when the argument's partial-quotient sum exceeds this
    Int sum_cap = Int(1) << 16;
};

// ?([a1..at]) = sum_k (-1)^(k+1) / 2^(a1+...+ak-1), as an exact dyadic.
// The numerator needs (quotient sum) bits; max_bits guards materialization.
Dyadic qm_of_cf(const CF& a, unsigned long max_bits = 1ul << 26);
Dyadic qm_of_rational(const Rat& x, unsigned long max_bits = 1ul << 26);

// Inverse map: run-length decode of the terminating binary expansion.
// Output is canonical; round-trips with qm_of_cf.
CF qm_inverse(const Dyadic& d);

// f_n(x): n-fold application of ? to a rational in [0,1].
Rat iterate_qm(const Rat& x, unsigned n, const IterateLimits& lim = {});

struct OrbitReport {
    Rat input;
    std::vector<Rat> iterates;       // f_0 = input first
    std::string classification;      // "fixed", "toward 0/1/2", ... see below
    Rat target;                      // nearest of {0, 1/2, 1}
    Rat final_distance;
    bool monotone_tail = false;      // last three iterates strictly approach target
    bool capped = false;             // stopped by the work cap
};

// Iterates until max_n or the work cap, then classifies against {0, 1/2, 1}:
// "fixed" for a constant orbit, "toward T" when the last three iterates move
// strictly monotonically toward T and the final distance is below 2^-8.
OrbitReport fixed_point_orbit(const Rat& x, unsigned max_n,
                              const IterateLimits& lim = {});

}  // namespace qmfold
