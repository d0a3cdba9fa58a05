#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qmfold/cf.hpp"
#include "qmfold/folding.hpp"
#include "qmfold/kappa.hpp"
#include "qmfold/pow2bound.hpp"

namespace qmfold {

// Partial-quotient sums sigma_1..sigma_m of the expanded prefix, one per block
// boundary reached: sigma_{k+1} = sigma_k + t_k + S_{A_{k+1}}, t_k = sigma_k + s_k.
std::vector<Int> sigma_sequence(const BlockSpec& spec);
std::vector<Int> tau_sequence(const BlockSpec& spec);  // t_1..t_{m-1}

// Least slack certifiably above the admission threshold
// (kappa - 1) S_next + sigma + 2, judged at the interval's upper end.
Int minimal_slack(const Int& sigma, const Int& next_block_sum, const KappaInterval& kappa);

enum class Verdict { pass, fail, inconclusive };

// One boundary's admission condition s_k > (kappa - 1) S_{A_{k+1}} + sigma_k + 2,
// decided against both ends of the kappa interval.
struct ConditionCheck {
    std::size_t k = 0;  // boundary index, 1-based
    Int sigma;
    Int next_block_sum;
    Int slack;
    Rat threshold_lo;  // with kappa at the interval's low end
    Rat threshold_hi;  // with kappa at the high end; pass needs slack > this
    Verdict verdict = Verdict::inconclusive;
};

struct MembershipCertificate {
    Verdict verdict = Verdict::inconclusive;
    std::vector<ConditionCheck> checks;
    Rat kappa_lo;  // interval that produced the final decision
    Rat kappa_hi;
};

// Straddling checks auto-refine through the canonical enclosure family
// (width -> width^2, floored at 2^-192) until decided or floored.
MembershipCertificate certify_membership(const BlockSpec& spec, const KappaInterval& kappa,
                                         bool auto_refine = true);

// Image-side growth condition g_k > (kappa - 1) S_{B_{k+1}} + sigma_{B_k} + 2,
// certified through a sufficient chain in symbolic power-of-two arithmetic:
//   g_k >= lhs_low,    rhs_up >= (kappa - 1) S_{B_{k+1}} + sigma_{B_k} + 2,
// so lhs_low > rhs_up settles the condition without materializing the image.
// The chain is one-sided: it can pass or come back inconclusive, never fail.
struct ImageConditionCheck {
    std::size_t k = 0;
    bool empty_next = false;
    Pow2Bound lhs_low;
    Pow2Bound rhs_up;
    Verdict verdict = Verdict::inconclusive;
};

struct ImageCertificate {
    Verdict verdict = Verdict::inconclusive;
    std::vector<ImageConditionCheck> checks;
};

ImageCertificate certify_image_membership(const BlockSpec& spec, const KappaInterval& kappa);

// Measured counterpart on a materialized image prefix: the actual
// g_k = z_k - sigma_{B_k} against (kappa_hi - 1) S_{B_{k+1}} + sigma_{B_k} + 2.
struct MeasuredImageCondition {
    std::size_t k = 0;
    Int g;
    Rat rhs_hi;
    bool holds = false;
};

std::vector<MeasuredImageCondition> measure_image_conditions(const ImagePrefixResult& img,
                                                             const KappaInterval& kappa);

struct SpecGenOptions {
    std::size_t num_blocks = 3;
    std::size_t max_block_len = 3;
    unsigned long max_entry = 3;
    unsigned long slack_jitter = 3;  // uniform extra slack above minimal, inclusive
    bool allow_empty_blocks = true;
    std::uint64_t seed = 0;
};

// Deterministic (seeded) spec with certifiably admissible slacks. The first
// block is never the single entry (1), whose image collapses to 1.
BlockSpec generate_spec(const SpecGenOptions& opt, const KappaInterval& kappa);

// Sylvester chain 2, 3, 7, 43, ... (v_{n+1} = v_n^2 - v_n + 1)
std::vector<Int> sylvester(std::size_t count);
// 1, 1, 2, 3, 14, 129, ... (q_{n+2} = q_n^2 q_{n+1} + q_n): the square roots
// of the partial quotients of sum_i (-1)^i / (v_i - 1).
std::vector<Int> cahen_denominators(std::size_t count);
// Block form of that constant: A1 = (1, 1, 1, 4, 9), t_i = q_{3+i}^2, later
// blocks empty.
BlockSpec cahen_spec(std::size_t num_blocks);
// Exact partial sum of the first `terms` series terms.
Rat cahen_series_truncation(std::size_t terms);

struct AverageRow {
    std::size_t t = 0;
    Rat average;  // (a_1 + ... + a_t) / t
    Verdict exceeds_kappa = Verdict::inconclusive;
};

std::vector<AverageRow> running_average(const CF& quotients, const KappaInterval& kappa);

}  // namespace qmfold
