#pragma once

#include <cstddef>
#include <vector>

#include "qmfold/cf.hpp"
#include "qmfold/minkowski.hpp"

namespace qmfold {

// Rational interval pinned down by a quotient prefix: the endpoints are
// [a_1..a_t] and [a_1..a_t + 1], ordered by value. Its width is
// 1 / (q_t (q_t + q_{t-1})) with q the continuant denominators.
struct CylinderInterval {
    CF prefix;
    Rat left;
    Rat right;
    Rat width;  // right - left, exact
};

CylinderInterval cylinder(const CF& prefix);

// Exact width of the question-mark image of the cylinder; equals 2^{-S} with
// S the quotient sum of the prefix.
Dyadic qm_image_width(const CF& prefix, unsigned long max_bits = 1ul << 26);

// Two-sided enclosure of log2(x) for positive rational x.
struct Log2Enclosure {
    Rat lo;
    Rat hi;
};

Log2Enclosure log2_enclosure(const Rat& x, unsigned prec = 128);

// Exact difference quotient |f_n(right) - f_n(left)| / width across the
// cylinder, with a log2 enclosure for reading off decay exponents.
struct DecayRow {
    std::size_t t = 0;
    std::size_t n = 0;
    bool capped = false;  // iteration hit the work cap; quotient left empty
    Rat quotient;
    Log2Enclosure log2q;
};

DecayRow fn_difference_quotient(const CF& prefix, std::size_t n, const IterateLimits& lim = {});

// Rows for every requested prefix length t and n = 1..n_max. A cap at (t, n)
// is recorded and ends that t's column, since deeper n only grows the work.
std::vector<DecayRow> decay_table(const CF& full_prefix, const std::vector<std::size_t>& ts,
                                  std::size_t n_max, const IterateLimits& lim = {});

// Per-step width ratios factor_j = |x_j interval| / |x_{j-1} interval| whose
// product telescopes to the n-step difference quotient.
struct ChainFactor {
    std::size_t j = 0;
    Rat factor;
    Log2Enclosure log2f;
};

std::vector<ChainFactor> chain_factors(const CF& prefix, std::size_t n,
                                       const IterateLimits& lim = {});

}  // namespace qmfold
