#include "qmfold/deriv.hpp"

#include <mpfr.h>

#include <utility>

namespace qmfold {

namespace {

Rat rat_of(const mpfr_t v) {
    if (mpfr_zero_p(v)) return Rat(0);
    Int m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
    Rat r(m);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
    return r;
}

}  // namespace

CylinderInterval cylinder(const CF& prefix) {
    if (prefix.empty() || !is_valid_cf(prefix))
        throw cf_error("cylinder: need a nonempty quotient prefix");
    CF bumped = prefix;
    bumped.back() += 1;
    Rat a = cf_to_rational(prefix);
    Rat b = cf_to_rational(bumped);
    CylinderInterval c;
    c.prefix = prefix;
    c.left = a < b ? a : b;
    c.right = a < b ? b : a;
    c.width = c.right - c.left;
    return c;
}

Dyadic qm_image_width(const CF& prefix, unsigned long max_bits) {
    CylinderInterval c = cylinder(prefix);
    Dyadic dl = qm_of_rational(c.left, max_bits);
    Dyadic dr = qm_of_rational(c.right, max_bits);
    Rat w = dyadic_to_rational(dr, max_bits) - dyadic_to_rational(dl, max_bits);
    if (w < 0) w = -w;
    return dyadic_from_rational(w);
}

Log2Enclosure log2_enclosure(const Rat& x, unsigned prec) {
    if (x <= 0) throw cf_error("log2_enclosure: argument must be positive");
    Log2Enclosure out;
    mpfr_t t, r;
    mpfr_init2(t, prec);
    mpfr_init2(r, prec);
    mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDD);
    mpfr_log2(r, t, MPFR_RNDD);
    out.lo = rat_of(r);
    mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDU);
    mpfr_log2(r, t, MPFR_RNDU);
    out.hi = rat_of(r);
    mpfr_clear(t);
    mpfr_clear(r);
    return out;
}

DecayRow fn_difference_quotient(const CF& prefix, std::size_t n, const IterateLimits& lim) {
    if (n == 0) throw cf_error("fn_difference_quotient: need n >= 1");
    CylinderInterval c = cylinder(prefix);
    Rat fl = iterate_qm(c.left, n, lim);
    Rat fr = iterate_qm(c.right, n, lim);
    Rat q = (fr - fl) / c.width;
    if (q < 0) q = -q;
    DecayRow row;
    row.t = prefix.size();
    row.n = n;
    row.quotient = q;
    row.log2q = log2_enclosure(q);
    return row;
}

std::vector<DecayRow> decay_table(const CF& full_prefix, const std::vector<std::size_t>& ts,
                                  std::size_t n_max, const IterateLimits& lim) {
    std::vector<DecayRow> out;
    for (std::size_t t : ts) {
        if (t < 1 || t > full_prefix.size())
            throw cf_error("decay_table: prefix length out of range");
        CF prefix(full_prefix.begin(), full_prefix.begin() + static_cast<std::ptrdiff_t>(t));
        for (std::size_t n = 1; n <= n_max; ++n) {
            try {
                out.push_back(fn_difference_quotient(prefix, n, lim));
            } catch (const cap_error&) {
                DecayRow row;
                row.t = t;
                row.n = n;
                row.capped = true;
                out.push_back(std::move(row));
                break;  // deeper n repeats the same capped work
            }
        }
    }
    return out;
}

std::vector<ChainFactor> chain_factors(const CF& prefix, std::size_t n, const IterateLimits& lim) {
    if (n == 0) throw cf_error("chain_factors: need n >= 1");
    CylinderInterval c = cylinder(prefix);
    std::vector<ChainFactor> out;
    Rat l = c.left;
    Rat r = c.right;
    Rat prev_w = c.width;
    for (std::size_t j = 1; j <= n; ++j) {
        l = iterate_qm(l, 1, lim);
        r = iterate_qm(r, 1, lim);
        Rat w = r - l;
        if (w < 0) w = -w;
        ChainFactor f;
        f.j = j;
        f.factor = w / prev_w;
        f.log2f = log2_enclosure(f.factor);
        out.push_back(std::move(f));
        prev_w = w;
    }
    return out;
}

}  // namespace qmfold
