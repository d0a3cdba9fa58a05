#include "qmfold/pow2bound.hpp"

#include <utility>

namespace qmfold {

namespace {

const Rat& bump() {
    // 2^(1 - p2b_exact_window): strictly dominates any term whose exponent
    // sits more than p2b_exact_window below the leading one
    static const Rat b = [] {
        Int den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, p2b_exact_window - 1);
        Rat r(1, den);
        r.canonicalize();
        return r;
    }();
    return b;
}

void coeff_mul_2exp(Rat& c, long k) {
    if (k > 0)
        mpq_mul_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<unsigned long>(k));
    else if (k < 0)
        mpq_div_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<unsigned long>(-k));
}

}  // namespace

Pow2Bound p2b_make(Rat coeff, Int exp) {
    if (coeff < 0) throw cf_error("p2b_make: coefficient must be nonnegative");
    if (coeff == 0) return {Rat(0), Int(0)};
    coeff.canonicalize();
    const long nb = static_cast<long>(mpz_sizeinbase(coeff.get_num().get_mpz_t(), 2));
    const long db = static_cast<long>(mpz_sizeinbase(coeff.get_den().get_mpz_t(), 2));
    long k = nb - db;  // coeff * 2^-k lands in (1/2, 2)
    coeff_mul_2exp(coeff, -k);
    if (coeff < 1) {
        coeff_mul_2exp(coeff, 1);
        --k;
    }
    return {std::move(coeff), exp + k};
}

Pow2Bound p2b_from_rational(const Rat& x) { return p2b_make(x, Int(0)); }

Pow2Bound p2b_pow2(Int exp) { return {Rat(1), std::move(exp)}; }

Rat p2b_to_rational(const Pow2Bound& p, unsigned long max_bits) {
    if (p.coeff == 0) return Rat(0);
    if (abs(p.exp) > max_bits)
        throw cap_error("p2b_to_rational: exponent " + p.exp.get_str() +
                        " exceeds materialization budget");
    Rat r = p.coeff;
    if (p.exp >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), p.exp.get_ui());
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), Int(-p.exp).get_ui());
    return r;
}

int p2b_compare(const Pow2Bound& a, const Pow2Bound& b) {
    const bool az = a.coeff == 0;
    const bool bz = b.coeff == 0;
    if (az || bz) return az && bz ? 0 : (az ? -1 : 1);
    // coefficients in [1,2) make [2^exp, 2^(exp+1)) ranges disjoint per exp
    if (a.exp != b.exp) return a.exp < b.exp ? -1 : 1;
    const int c = cmp(a.coeff, b.coeff);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int p2b_compare_rational(const Pow2Bound& a, const Rat& x) {
    if (x < 0) return 1;
    if (x == 0) return a.coeff == 0 ? 0 : 1;
    return p2b_compare(a, p2b_from_rational(x));
}

Pow2Bound p2b_add(const Pow2Bound& a, const Pow2Bound& b, Round dir) {
    if (a.coeff == 0) return b;
    if (b.coeff == 0) return a;
    const Pow2Bound& hi = a.exp >= b.exp ? a : b;
    const Pow2Bound& lo = a.exp >= b.exp ? b : a;
    const Int gap = hi.exp - lo.exp;
    if (gap > p2b_exact_window) {
        if (dir == Round::down) return hi;  // dropping the small term undershoots
        Rat c = hi.coeff + bump();          // bump strictly covers lo / 2^hi.exp
        Int e = hi.exp;
        if (c >= 2) {
            coeff_mul_2exp(c, -1);
            ++e;
        }
        return {std::move(c), std::move(e)};
    }
    Rat shifted = lo.coeff;
    coeff_mul_2exp(shifted, -static_cast<long>(gap.get_ui()));
    Rat c = hi.coeff + shifted;  // in [1,4)
    Int e = hi.exp;
    if (c >= 2) {
        coeff_mul_2exp(c, -1);
        ++e;
    }
    return {std::move(c), std::move(e)};
}

Pow2Bound p2b_sub(const Pow2Bound& a, const Pow2Bound& b, Round dir) {
    if (b.coeff == 0) return a;
    if (p2b_compare(a, b) <= 0)
        throw cf_error("p2b_sub: difference is not positive");
    const Int gap = a.exp - b.exp;  // >= 0 since a > b
    if (gap > p2b_exact_window) {
        if (dir == Round::up) return a;     // dropping the subtrahend overshoots
        Rat c = a.coeff - bump();           // bump strictly covers b / 2^a.exp
        Int e = a.exp;
        if (c < 1) {
            coeff_mul_2exp(c, 1);
            --e;
        }
        return {std::move(c), std::move(e)};
    }
    Rat shifted = b.coeff;
    coeff_mul_2exp(shifted, -static_cast<long>(gap.get_ui()));
    Rat c = a.coeff - shifted;  // positive; may have cancelled far below 1
    return p2b_make(std::move(c), a.exp);
}

Pow2Bound p2b_mul(const Pow2Bound& a, const Pow2Bound& b) {
    if (a.coeff == 0 || b.coeff == 0) return {Rat(0), Int(0)};
    Rat c = a.coeff * b.coeff;  // in [1,4)
    Int e = a.exp + b.exp;
    if (c >= 2) {
        coeff_mul_2exp(c, -1);
        ++e;
    }
    return {std::move(c), std::move(e)};
}

Pow2Bound p2b_shift(Pow2Bound p, const Int& bits) {
    if (p.coeff != 0) p.exp += bits;
    return p;
}

}  // namespace qmfold
