#pragma once

#include "qmfold/cf.hpp"

namespace qmfold {

// Enclosure of the quotient-growth threshold constant
//   kappa2 = (4 L5 - 5 L4) / (L5 - L4),
//   L_j    = ln((j + sqrt(j^2 + 4)) / 2) - j ln(2) / 2,
// as exact rational endpoints with lo < kappa2 < hi.
struct KappaInterval {
    Rat lo;
    Rat hi;
};

Rat kappa_width(const KappaInterval& k);

// Interval of exactly the requested width around kappa2. Every width is
// centered on one deterministically refined midpoint, so a narrower request
// always nests inside a wider one. Supported widths: [2^-196, 8].
KappaInterval kappa2_enclosure(const Rat& width);

// Same contract for the building blocks L_j, 1 <= j <= 64.
KappaInterval l_constant_enclosure(int j, const Rat& width);

}  // namespace qmfold
