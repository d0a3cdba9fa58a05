#include "qmfold/minkowski.hpp"

#include <cstddef>
#include <utility>

namespace qmfold {

namespace {

unsigned long as_bitcount(const Int& e, const char* what) {
    if (e < 0 || !mpz_fits_ulong_p(e.get_mpz_t()))
        throw cap_error(std::string(what) + ": exponent out of addressable range");
    return e.get_ui();
}

}  // namespace

Dyadic dyadic_make(Int num, Int exp) {
    if (num == 0) return {Int(0), Int(0)};
    const mp_bitcnt_t t = mpz_scan1(num.get_mpz_t(), 0);
    if (t > 0) {
        num >>= t;
        exp -= static_cast<unsigned long>(t);
    }
    return {std::move(num), std::move(exp)};
}

int dyadic_compare(const Dyadic& a, const Dyadic& b) {
    const int sa = sgn(a.num);
    const int sb = sgn(b.num);
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    // |value| lies in [2^(pos-1), 2^pos) with pos = bitlength(num) - exp,
    // so differing pos decides without materialising the scales.
    const Int pa = Int(static_cast<unsigned long>(mpz_sizeinbase(a.num.get_mpz_t(), 2))) - a.exp;
    const Int pb = Int(static_cast<unsigned long>(mpz_sizeinbase(b.num.get_mpz_t(), 2))) - b.exp;
    if (pa != pb) {
        const int mag = pa < pb ? -1 : 1;
        return sa > 0 ? mag : -mag;
    }
    // Equal pos forces |exp difference| = |bitlength difference|: small shift.
    Int lhs = a.num;
    Int rhs = b.num;
    const Int d = a.exp - b.exp;
    if (d >= 0)
        mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), as_bitcount(d, "dyadic_compare"));
    else
        mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), as_bitcount(-d, "dyadic_compare"));
    const int c = cmp(lhs, rhs);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool dyadic_equal(const Dyadic& a, const Dyadic& b) {
    return dyadic_compare(a, b) == 0;
}

Rat dyadic_to_rational(const Dyadic& d, unsigned long max_bits) {
    const Dyadic v = dyadic_make(d.num, d.exp);
    Int scale;
    if (v.exp >= 0) {
        if (v.exp > max_bits)
            throw cap_error("dyadic_to_rational: exponent " + v.exp.get_str() +
                            " exceeds materialization budget");
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, v.exp.get_ui());
        Rat r(v.num, scale);
        r.canonicalize();
        return r;
    }
    const Int neg = -v.exp;
    if (neg > max_bits)
        throw cap_error("dyadic_to_rational: exponent " + v.exp.get_str() +
                        " exceeds materialization budget");
    Int n = v.num;
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), neg.get_ui());
    return Rat(n);
}

Dyadic dyadic_from_rational(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    const Int den = c.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1)
        throw cf_error("dyadic_from_rational: denominator " + den.get_str() +
                       " is not a power of 2");
    const unsigned long e = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
    return dyadic_make(c.get_num(), Int(e));
}

Dyadic qm_of_cf(const CF& a, unsigned long max_bits) {
    if (!is_valid_cf(a)) throw cf_error("qm_of_cf: partial quotients must be >= 1");
    if (a.empty()) return {Int(0), Int(0)};
    const Int s = quotient_sum(a);
    if (s - 1 > max_bits)
        throw cap_error("qm_of_cf: quotient sum " + s.get_str() +
                        " exceeds materialization budget");
    // sum over k of (-1)^(k+1) * 2^(s - (a1+...+ak)); the k = t term is +-1,
    // so the numerator is odd and s - 1 is already the normalized exponent.
    Int num = 0;
    Int rem = s;
    bool plus = true;
    for (const Int& q : a) {
        rem -= q;
        Int term;
        mpz_ui_pow_ui(term.get_mpz_t(), 2, rem.get_ui());
        if (plus)
            num += term;
        else
            num -= term;
        plus = !plus;
    }
    return {std::move(num), s - 1};
}

Dyadic qm_of_rational(const Rat& x, unsigned long max_bits) {
    return qm_of_cf(cf_from_rational(x), max_bits);
}

CF qm_inverse(const Dyadic& d) {
    const Dyadic v = dyadic_make(d.num, d.exp);
    if (v.num < 0 || v.exp < 0)
        throw cf_error("qm_inverse: value must lie in [0,1]");
    if (v.num == 0) return {};
    if (v.exp == 0) {
        if (v.num != 1) throw cf_error("qm_inverse: value must lie in [0,1]");
        return {Int(1)};  // the value 1 itself
    }
    const std::size_t nb = mpz_sizeinbase(v.num.get_mpz_t(), 2);
    if (Int(static_cast<unsigned long>(nb)) > v.exp)
        throw cf_error("qm_inverse: value must lie in [0,1]");
    if (v.num == 1) return {v.exp + 1};
    // Binary fraction 0.b1...be (be = 1) read as runs: z1 zeros (possibly
    // none), then alternating one-runs o1..or and zero-runs z2..zr. These are
    // the partial quotients up to the two boundary fixups below.
    const Int z1 = v.exp - static_cast<unsigned long>(nb);
    std::vector<unsigned long> runs;  // o1, z2, o2, ..., (zr, or) or (.., or)
    int bit = 1;
    unsigned long len = 0;
    for (std::size_t i = nb; i-- > 0;) {
        const int cur = mpz_tstbit(v.num.get_mpz_t(), i);
        if (cur == bit) {
            ++len;
        } else {
            runs.push_back(len);
            bit = cur;
            len = 1;
        }
    }
    runs.push_back(len);  // final one-run (num is odd)
    CF out;
    out.reserve(runs.size() + 1);
    out.push_back(z1 + 1);
    if (runs.back() >= 2) {
        for (unsigned long r : runs) out.push_back(Int(r));
    } else {
        // trailing one-run of length 1 merges into the zero-run before it
        for (std::size_t i = 0; i + 2 < runs.size(); ++i) out.push_back(Int(runs[i]));
        out.push_back(Int(runs[runs.size() - 2]) + 1);
    }
    return out;
}

Rat iterate_qm(const Rat& x, unsigned n, const IterateLimits& lim) {
    Rat cur = x;
    cur.canonicalize();
    const unsigned long budget =
        mpz_fits_ulong_p(lim.sum_cap.get_mpz_t()) ? lim.sum_cap.get_ui() + 1
                                                  : static_cast<unsigned long>(-1);
    for (unsigned i = 0; i < n; ++i) {
        const CF a = cf_from_rational(cur);
        const Int s = quotient_sum(a);
        if (s > lim.sum_cap)
            throw cap_error("iterate_qm: quotient sum " + s.get_str() +
                            " exceeds work cap at step " + std::to_string(i + 1));
        cur = dyadic_to_rational(qm_of_cf(a, budget), budget);
    }
    return cur;
}

OrbitReport fixed_point_orbit(const Rat& x, unsigned max_n, const IterateLimits& lim) {
    OrbitReport rep;
    rep.input = x;
    rep.input.canonicalize();
    rep.iterates.push_back(rep.input);
    Rat cur = rep.input;
    for (unsigned i = 0; i < max_n; ++i) {
        try {
            cur = iterate_qm(cur, 1, lim);
        } catch (const cap_error&) {
            rep.capped = true;
            break;
        }
        rep.iterates.push_back(cur);
        if (rep.iterates[rep.iterates.size() - 2] == cur) break;  // fixed point
    }
    const Rat anchors[3] = {Rat(0), Rat(1, 2), Rat(1)};
    const Rat& last = rep.iterates.back();
    rep.target = anchors[0];
    rep.final_distance = abs(last - anchors[0]);
    for (int i = 1; i < 3; ++i) {
        Rat dist = abs(last - anchors[i]);
        if (dist < rep.final_distance) {
            rep.final_distance = dist;
            rep.target = anchors[i];
        }
    }
    const std::size_t m = rep.iterates.size();
    if (m >= 3) {
        const Rat d0 = abs(rep.iterates[m - 3] - rep.target);
        const Rat d1 = abs(rep.iterates[m - 2] - rep.target);
        rep.monotone_tail = d0 > d1 && d1 > rep.final_distance;
    }
    const bool input_anchored =
        rep.input == anchors[0] || rep.input == anchors[1] || rep.input == anchors[2];
    if (input_anchored || (m >= 2 && rep.iterates[m - 1] == rep.iterates[m - 2])) {
        rep.classification = "fixed";
        rep.target = last;
        rep.final_distance = 0;
    } else if (rep.monotone_tail && rep.final_distance < Rat(1, 256)) {
        rep.classification = "toward " + rep.target.get_str();
    } else {
        rep.classification = "unclassified";
    }
    return rep;
}

}  // namespace qmfold
