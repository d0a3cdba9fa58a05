#include "qmfold/membership.hpp"

#include <random>
#include <utility>

namespace qmfold {

namespace {

Rat rat_floor_plus_one(const Rat& x) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return Rat(f + 1);
}

// Admission threshold for one boundary: (kappa - 1) S_next + sigma + 2.
Rat admission_threshold(const Rat& kappa, const Int& sigma, const Int& next_block_sum) {
    return (kappa - 1) * Rat(next_block_sum) + Rat(sigma) + 2;
}

}  // namespace

std::vector<Int> sigma_sequence(const BlockSpec& spec) {
    validate_spec(spec);
    std::vector<Int> out;
    Int sigma = seq_stats(spec.blocks.front()).sum;
    out.push_back(sigma);
    for (std::size_t k = 1; k < spec.blocks.size(); ++k) {
        Int tau = sigma + spec.slacks[k - 1];
        sigma += tau + seq_stats(spec.blocks[k]).sum;
        out.push_back(sigma);
    }
    return out;
}

std::vector<Int> tau_sequence(const BlockSpec& spec) {
    validate_spec(spec);
    std::vector<Int> out;
    Int sigma = seq_stats(spec.blocks.front()).sum;
    for (std::size_t k = 1; k < spec.blocks.size(); ++k) {
        Int tau = sigma + spec.slacks[k - 1];
        out.push_back(tau);
        sigma += tau + seq_stats(spec.blocks[k]).sum;
    }
    return out;
}

Int minimal_slack(const Int& sigma, const Int& next_block_sum, const KappaInterval& kappa) {
    if (sigma < 1) throw cf_error("minimal_slack: sigma must be positive");
    if (next_block_sum < 0) throw cf_error("minimal_slack: negative block sum");
    Rat thr = admission_threshold(kappa.hi, sigma, next_block_sum);
    Rat least = rat_floor_plus_one(thr);
    return least.get_num();
}

MembershipCertificate certify_membership(const BlockSpec& spec, const KappaInterval& kappa,
                                         bool auto_refine) {
    validate_spec(spec);
    std::vector<Int> sig = sigma_sequence(spec);

    KappaInterval cur = kappa;
    static const Rat floor_width = Rat(1) / Rat(Int(1) << 192);

    MembershipCertificate cert;
    for (;;) {
        cert.checks.clear();
        bool any_fail = false;
        bool any_open = false;
        for (std::size_t k = 1; k < spec.blocks.size(); ++k) {
            ConditionCheck c;
            c.k = k;
            c.sigma = sig[k - 1];
            c.next_block_sum = seq_stats(spec.blocks[k]).sum;
            c.slack = spec.slacks[k - 1];
            c.threshold_lo = admission_threshold(cur.lo, c.sigma, c.next_block_sum);
            c.threshold_hi = admission_threshold(cur.hi, c.sigma, c.next_block_sum);
            Rat s(c.slack);
            if (s > c.threshold_hi) {
                c.verdict = Verdict::pass;
            } else if (s <= c.threshold_lo) {
                c.verdict = Verdict::fail;
                any_fail = true;
            } else {
                c.verdict = Verdict::inconclusive;
                any_open = true;
            }
            cert.checks.push_back(std::move(c));
        }
        if (!any_open || !auto_refine) {
            cert.verdict = any_fail    ? Verdict::fail
                           : any_open  ? Verdict::inconclusive
                                       : Verdict::pass;
            break;
        }
        Rat w = kappa_width(cur);
        if (w <= floor_width) {
            cert.verdict = any_fail ? Verdict::fail : Verdict::inconclusive;
            break;
        }
        Rat next = w * w;
        if (next > w / 2) next = w / 2;
        if (next < floor_width) next = floor_width;
        cur = kappa2_enclosure(next);
    }
    cert.kappa_lo = cur.lo;
    cert.kappa_hi = cur.hi;
    return cert;
}

ImageCertificate certify_image_membership(const BlockSpec& spec, const KappaInterval& kappa) {
    validate_spec(spec);
    std::vector<Int> sig = sigma_sequence(spec);

    ImageCertificate cert;
    bool any_open = false;
    for (std::size_t k = 1; k < spec.blocks.size(); ++k) {
        ImageConditionCheck c;
        c.k = k;
        c.empty_next = spec.blocks[k].empty();
        const Int& sigma = sig[k - 1];
        const Int& s = spec.slacks[k - 1];
        // g_k = z_k - sigma_{B_k} >= 2^{s_k} - 2^{sigma_k - 1} needs s_k >= sigma_k
        // for the difference to be positive; admissible slacks clear it easily.
        if (s >= sigma) {
            c.lhs_low = p2b_sub(p2b_pow2(s), p2b_pow2(sigma - 1), Round::down);
            if (c.empty_next) {
                // S_{B_{k+1}} <= sigma_{B_k} <= 2^{sigma_k - 1}, so the target is
                // at most kappa 2^{sigma_k - 1} + 2.
                Pow2Bound t = p2b_shift(p2b_from_rational(kappa.hi), sigma - 1);
                c.rhs_up = p2b_add(t, p2b_from_rational(Rat(2)), Round::up);
            } else {
                // S_{B_{k+1}} <= 2^{sigma_k + S_{A_{k+1}}}, sigma_{B_k} <= 2^{sigma_k - 1}.
                Int next_sum = seq_stats(spec.blocks[k]).sum;
                Pow2Bound t = p2b_shift(p2b_from_rational(kappa.hi - 1), sigma + next_sum);
                c.rhs_up = p2b_add(t, p2b_pow2(sigma - 1), Round::up);
                c.rhs_up = p2b_add(c.rhs_up, p2b_from_rational(Rat(2)), Round::up);
            }
            c.verdict = p2b_compare(c.lhs_low, c.rhs_up) > 0 ? Verdict::pass
                                                             : Verdict::inconclusive;
        } else {
            c.verdict = Verdict::inconclusive;
        }
        if (c.verdict != Verdict::pass) any_open = true;
        cert.checks.push_back(std::move(c));
    }
    cert.verdict = any_open ? Verdict::inconclusive : Verdict::pass;
    return cert;
}

std::vector<MeasuredImageCondition> measure_image_conditions(const ImagePrefixResult& img,
                                                             const KappaInterval& kappa) {
    std::vector<MeasuredImageCondition> out;
    if (img.blocks.empty()) return out;
    Int sigma_b = img.blocks[0].sum;
    for (std::size_t k = 1; k < img.blocks.size(); ++k) {
        if (k - 1 >= img.zs.size() || !img.zs[k - 1].value.has_value()) break;
        const Int& z = *img.zs[k - 1].value;
        MeasuredImageCondition m;
        m.k = k;
        m.g = z - sigma_b;
        m.rhs_hi = (kappa.hi - 1) * Rat(img.blocks[k].sum) + Rat(sigma_b) + 2;
        m.holds = Rat(m.g) > m.rhs_hi;
        out.push_back(std::move(m));
        sigma_b += z + img.blocks[k].sum;
    }
    return out;
}

BlockSpec generate_spec(const SpecGenOptions& opt, const KappaInterval& kappa) {
    if (opt.num_blocks == 0) throw cf_error("generate_spec: need at least one block");
    if (opt.max_block_len == 0) throw cf_error("generate_spec: first block cannot be empty");
    if (opt.max_entry == 0) throw cf_error("generate_spec: entries must be positive");

    std::mt19937_64 rng(opt.seed);
    auto draw = [&rng](unsigned long lo, unsigned long hi) {
        return lo + static_cast<unsigned long>(rng() % (hi - lo + 1));
    };

    BlockSpec spec;
    CF first;
    std::size_t len = draw(1, opt.max_block_len);
    for (std::size_t i = 0; i < len; ++i) first.push_back(Int(draw(1, opt.max_entry)));
    if (first.size() == 1 && first[0] == 1) {
        // The lone block (1) maps onto 1 itself and carries no usable image
        // block; widen it deterministically.
        if (opt.max_block_len > 1)
            first.push_back(1);
        else
            first[0] = 2;
    }
    spec.blocks.push_back(std::move(first));

    for (std::size_t k = 1; k < opt.num_blocks; ++k) {
        CF block;
        std::size_t lo = opt.allow_empty_blocks ? 0 : 1;
        len = draw(lo, opt.max_block_len);
        for (std::size_t i = 0; i < len; ++i) block.push_back(Int(draw(1, opt.max_entry)));
        spec.blocks.push_back(std::move(block));
    }

    Int sigma = seq_stats(spec.blocks[0]).sum;
    for (std::size_t k = 1; k < opt.num_blocks; ++k) {
        Int next_sum = seq_stats(spec.blocks[k]).sum;
        Int s = minimal_slack(sigma, next_sum, kappa) + Int(draw(0, opt.slack_jitter));
        spec.slacks.push_back(s);
        sigma += sigma + s + next_sum;  // sigma_{k+1} = sigma_k + tau_k + S_{A_{k+1}}
    }
    validate_spec(spec);
    return spec;
}

std::vector<Int> sylvester(std::size_t count) {
    std::vector<Int> v;
    if (count == 0) return v;
    v.push_back(2);
    while (v.size() < count) {
        const Int& p = v.back();
        v.push_back(p * p - p + 1);
    }
    return v;
}

std::vector<Int> cahen_denominators(std::size_t count) {
    std::vector<Int> q;
    if (count >= 1) q.push_back(1);
    if (count >= 2) q.push_back(1);
    while (q.size() < count) {
        const Int& a = q[q.size() - 2];
        const Int& b = q[q.size() - 1];
        q.push_back(a * a * b + a);
    }
    return q;
}

BlockSpec cahen_spec(std::size_t num_blocks) {
    if (num_blocks == 0) throw cf_error("cahen_spec: need at least one block");
    BlockSpec spec;
    spec.blocks.push_back(CF{1, 1, 1, 4, 9});
    std::vector<Int> q = cahen_denominators(num_blocks + 3);
    Int sigma = seq_stats(spec.blocks[0]).sum;
    for (std::size_t k = 1; k < num_blocks; ++k) {
        spec.blocks.push_back(CF{});
        Int tau = q[3 + k] * q[3 + k];
        spec.slacks.push_back(tau - sigma);
        sigma += tau;
    }
    validate_spec(spec);
    return spec;
}

Rat cahen_series_truncation(std::size_t terms) {
    std::vector<Int> v = sylvester(terms);
    Rat sum = 0;
    for (std::size_t i = 0; i < terms; ++i) {
        Rat term = Rat(1) / Rat(v[i] - 1);
        if (i % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

std::vector<AverageRow> running_average(const CF& quotients, const KappaInterval& kappa) {
    if (!is_valid_cf(quotients)) throw cf_error("running_average: invalid quotient sequence");
    std::vector<AverageRow> out;
    Int sum = 0;
    for (std::size_t t = 0; t < quotients.size(); ++t) {
        sum += quotients[t];
        AverageRow row;
        row.t = t + 1;
        row.average = Rat(sum) / Rat(static_cast<unsigned long>(t + 1));
        row.average.canonicalize();
        if (row.average > kappa.hi)
            row.exceeds_kappa = Verdict::pass;
        else if (row.average <= kappa.lo)
            row.exceeds_kappa = Verdict::fail;
        else
            row.exceeds_kappa = Verdict::inconclusive;
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace qmfold
