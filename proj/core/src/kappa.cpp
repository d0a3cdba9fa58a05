#include "qmfold/kappa.hpp"

#include <mpfr.h>

#include <utility>

namespace qmfold {

namespace {

struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(mpfr_prec_t p) { mpfr_init2(v, p); }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
};

Rat rat_of(const mpfr_t x) {
    if (!mpfr_number_p(x)) throw cap_error("kappa: endpoint is not finite");
    if (mpfr_zero_p(x)) return Rat(0);
    Int m;
    const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rat r(m);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
    r.canonicalize();
    return r;
}

Rat pow2_rat(long e) {
    Rat r(1);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
    return r;
}

// One-sided value of L_j with every rounding pushed in direction dir.
void l_endpoint(long j, mpfr_prec_t p, mpfr_rnd_t dir, mpfr_t out) {
    const mpfr_rnd_t anti = (dir == MPFR_RNDD) ? MPFR_RNDU : MPFR_RNDD;
    MpfrVal t(p), u(p);
    mpfr_set_si(t.v, j * j + 4, MPFR_RNDN);  // exact
    mpfr_sqrt(t.v, t.v, dir);
    mpfr_add_si(t.v, t.v, j, dir);
    mpfr_div_ui(t.v, t.v, 2, dir);
    mpfr_log(t.v, t.v, dir);  // log is increasing, direction survives
    mpfr_const_log2(u.v, anti);
    mpfr_mul_si(u.v, u.v, j, anti);
    mpfr_div_ui(u.v, u.v, 2, anti);
    mpfr_sub(out, t.v, u.v, dir);
}

std::pair<Rat, Rat> l_bounds(long j, mpfr_prec_t p) {
    MpfrVal lo(p), hi(p);
    l_endpoint(j, p, MPFR_RNDD, lo.v);
    l_endpoint(j, p, MPFR_RNDU, hi.v);
    return {rat_of(lo.v), rat_of(hi.v)};
}

std::pair<Rat, Rat> kappa_bounds(mpfr_prec_t p) {
    MpfrVal l4lo(p), l4hi(p), l5lo(p), l5hi(p);
    l_endpoint(4, p, MPFR_RNDD, l4lo.v);
    l_endpoint(4, p, MPFR_RNDU, l4hi.v);
    l_endpoint(5, p, MPFR_RNDD, l5lo.v);
    l_endpoint(5, p, MPFR_RNDU, l5hi.v);
    // numerator 4 L5 - 5 L4 and denominator L5 - L4; both strictly negative
    MpfrVal nlo(p), nhi(p), dlo(p), dhi(p), t(p), q(p);
    mpfr_mul_ui(nlo.v, l5lo.v, 4, MPFR_RNDD);
    mpfr_mul_ui(t.v, l4hi.v, 5, MPFR_RNDU);
    mpfr_sub(nlo.v, nlo.v, t.v, MPFR_RNDD);
    mpfr_mul_ui(nhi.v, l5hi.v, 4, MPFR_RNDU);
    mpfr_mul_ui(t.v, l4lo.v, 5, MPFR_RNDD);
    mpfr_sub(nhi.v, nhi.v, t.v, MPFR_RNDU);
    mpfr_sub(dlo.v, l5lo.v, l4hi.v, MPFR_RNDD);
    mpfr_sub(dhi.v, l5hi.v, l4lo.v, MPFR_RNDU);
    if (mpfr_sgn(dhi.v) >= 0)
        throw cap_error("kappa: denominator sign unresolved at this precision");
    // quotient extremes over a zero-free rectangle sit at its corners
    const mpfr_ptr ns[2] = {nlo.v, nhi.v};
    const mpfr_ptr ds[2] = {dlo.v, dhi.v};
    Rat lo, hi;
    bool first = true;
    for (const mpfr_ptr n : ns) {
        for (const mpfr_ptr d : ds) {
            mpfr_div(q.v, n, d, MPFR_RNDD);
            Rat down = rat_of(q.v);
            mpfr_div(q.v, n, d, MPFR_RNDU);
            Rat up = rat_of(q.v);
            if (first || down < lo) lo = down;
            if (first || up > hi) hi = up;
            first = false;
        }
    }
    return {std::move(lo), std::move(hi)};
}

// Intersect a doubling-precision ladder until the enclosure is at most
// `target` wide. Intersection keeps later (tighter) runs inside earlier ones,
// which is what makes the shared midpoint deterministic.
template <typename BoundsAt>
std::pair<Rat, Rat> refine(BoundsAt bounds_at, const Rat& target) {
    Rat lo, hi;
    bool have = false;
    for (mpfr_prec_t p = 256; p <= 65536; p *= 2) {
        auto [l, h] = bounds_at(p);
        if (!have) {
            lo = std::move(l);
            hi = std::move(h);
            have = true;
        } else {
            if (l > lo) lo = std::move(l);
            if (h < hi) hi = std::move(h);
        }
        if (hi - lo <= target) return {std::move(lo), std::move(hi)};
    }
    throw cap_error("kappa: enclosure did not reach requested width");
}

const Rat& master_width() {
    static const Rat w = pow2_rat(-200);
    return w;
}

KappaInterval pad_to(const std::pair<Rat, Rat>& tight, const Rat& width) {
    const Rat mid = (tight.first + tight.second) / 2;
    const Rat half = width / 2;
    return {mid - half, mid + half};
}

void check_width(const Rat& width) {
    if (width <= 0 || width > 8)
        throw cf_error("enclosure width must lie in (0, 8]");
    if (width < pow2_rat(-196))
        throw cap_error("enclosure width below the 2^-196 refinement floor");
}

}  // namespace

Rat kappa_width(const KappaInterval& k) { return k.hi - k.lo; }

KappaInterval kappa2_enclosure(const Rat& width) {
    check_width(width);
    const auto tight = refine([](mpfr_prec_t p) { return kappa_bounds(p); }, master_width());
    return pad_to(tight, width);
}

KappaInterval l_constant_enclosure(int j, const Rat& width) {
    if (j < 1 || j > 64) throw cf_error("l_constant_enclosure: j must lie in [1, 64]");
    check_width(width);
    const auto tight =
        refine([j](mpfr_prec_t p) { return l_bounds(j, p); }, master_width());
    return pad_to(tight, width);
}

}  // namespace qmfold
