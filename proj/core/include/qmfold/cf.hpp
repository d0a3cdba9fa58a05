#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace qmfold {

using Int = mpz_class;
using Rat = mpq_class;

// Partial quotients of a continued fraction with value in [0,1]:
//   [a1,...,at] = 1/(a1 + 1/(a2 + ... + 1/at)),   [] = 0.
// Every entry is >= 1. Canonical form has last quotient >= 2, the two
// exceptions being [] and [1].
using CF = std::vector<Int>;

struct cf_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a computation would materialize an integer above the caller's
// bit budget (work caps, exact-mode thresholds). Signals "capped", not "wrong".
struct cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeqStats {
    Int sum;
    std::size_t length = 0;
};

bool is_valid_cf(const CF& a);          // all entries >= 1
bool is_canonical(const CF& a);

// Euclidean expansion of x in [0,1]; output is canonical.
CF cf_from_rational(const Rat& x);

Rat cf_to_rational(const CF& a);

// Merge a trailing [..., b, 1] into [..., b+1]. Identity on canonical input.
CF canonicalize(CF a);

// Swap between the two representations of the same value:
// [..., b] with b >= 2  <->  [..., b-1, 1].  Undefined for [] and [1].
CF other_representation(CF a);

// Continuant <a1,...,at>: the denominator of the value in lowest terms; <> = 1.
Int continuant(const CF& a);

// (value, continuant) for each prefix [a1..aj], j = 1..t. Values are reduced.
std::vector<std::pair<Rat, Int>> convergents(const CF& a);

// Value order via the alternating rule at the first differing position
// (a missing entry compares as +infinity). Returns -1, 0, +1.
int cf_compare(const CF& a, const CF& b);

SeqStats seq_stats(const CF& a);
Int quotient_sum(const CF& a);

CF concat(CF a, const CF& b);
CF reversed(CF a);
CF drop_last(CF a);
CF drop_first(const CF& a);

}  // namespace qmfold
