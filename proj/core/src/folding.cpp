#include "qmfold/folding.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "qmfold/minkowski.hpp"

namespace qmfold {

namespace {

// 2^(s+1) - 1
Int fold_z(const Int& slack, unsigned long max_bits) {
    if (slack < 0) throw cf_error("fold: slack must be nonnegative");
    if (slack + 1 > max_bits)
        throw cap_error("fold: z entry of " + Int(slack + 1).get_str() +
                        " bits exceeds materialization budget");
    Int z;
    mpz_ui_pow_ui(z.get_mpz_t(), 2, Int(slack + 1).get_ui());
    return z - 1;
}

void check_fold_image(const CF& prefix_image) {
    if (prefix_image.empty() || !is_canonical(prefix_image))
        throw cf_error("fold: prefix image must be canonical and nonempty");
    if (prefix_image.size() == 1 && prefix_image[0] == 1)
        throw cf_error("fold: prefix image 1 has no alternate representation");
}

bool fold_case_swapped(std::size_t prefix_len, std::size_t k) {
    // the appended entry makes the prefix n = prefix_len + 1 long; the
    // altered representation leads exactly when n and k share parity
    return (prefix_len + 1) % 2 == k % 2;
}

Int range_sum(const CF& a, std::size_t begin, std::size_t end) {
    Int s = 0;
    for (std::size_t i = begin; i < end; ++i) s += a[i];
    return s;
}

// canonical CF of the dyadic value ?(u) itself (the image — not the
// run-length preimage decode)
CF image_cf(const CF& u, unsigned long max_bits) {
    return cf_from_rational(dyadic_to_rational(qm_of_cf(u, max_bits + 1), max_bits + 1));
}

}  // namespace

FoldResult fold_step(const CF& prefix_image, std::size_t prefix_len,
                     const Int& slack, unsigned long max_bits) {
    check_fold_image(prefix_image);
    FoldResult out;
    out.z = fold_z(slack, max_bits);
    out.swapped_head = fold_case_swapped(prefix_len, prefix_image.size());
    CF head = out.swapped_head ? other_representation(prefix_image) : prefix_image;
    CF mirror = out.swapped_head ? prefix_image : other_representation(prefix_image);
    out.z_index = head.size();
    out.image = std::move(head);
    out.image.push_back(out.z);
    out.image.insert(out.image.end(), mirror.rbegin(), mirror.rend());
    return out;
}

FoldBounds fold_range_bounds(const CF& prefix_image, std::size_t prefix_len,
                             const Int& slack, unsigned long max_bits) {
    check_fold_image(prefix_image);
    FoldBounds out;
    out.z_lo = fold_z(slack, max_bits);
    out.z_hi = 2 * out.z_lo + 1;
    out.shared_prefix = fold_case_swapped(prefix_len, prefix_image.size())
                            ? other_representation(prefix_image)
                            : prefix_image;
    out.z_index = out.shared_prefix.size();
    return out;
}

Int read_z_entry(const CF& image, std::size_t z_index, const Int& slack,
                 unsigned long max_bits) {
    if (z_index >= image.size())
        throw cf_error("read_z_entry: index past the end of the image");
    const Int hi = 2 * fold_z(slack, max_bits) + 1;
    Int z = image[z_index];
    if (z_index == image.size() - 1 && z == hi + 1) z = hi;
    return z;
}

void validate_spec(const BlockSpec& spec) {
    if (spec.blocks.empty() || spec.blocks.front().empty())
        throw cf_error("spec: the first block must exist and be nonempty");
    for (const CF& b : spec.blocks)
        if (!is_valid_cf(b)) throw cf_error("spec: block entries must be >= 1");
    if (spec.slacks.size() + 1 != spec.blocks.size())
        throw cf_error("spec: need exactly one slack per block boundary");
    for (const Int& s : spec.slacks)
        if (s < 1) throw cf_error("spec: slacks must be >= 1");
}

CF expand_prefix(const BlockSpec& spec, std::size_t depth) {
    validate_spec(spec);
    if (depth < 1 || depth > spec.blocks.size())
        throw cf_error("expand_prefix: depth out of range");
    CF u = spec.blocks.front();
    Int sigma = quotient_sum(u);
    for (std::size_t i = 1; i < depth; ++i) {
        u.push_back(sigma + spec.slacks[i - 1]);
        u.insert(u.end(), spec.blocks[i].begin(), spec.blocks[i].end());
        sigma = quotient_sum(u);
    }
    return u;
}

ImagePrefixResult image_prefix(const BlockSpec& spec, std::size_t depth,
                               unsigned long max_bits) {
    validate_spec(spec);
    if (depth < 1 || depth > spec.blocks.size())
        throw cf_error("image_prefix: depth out of range");
    ImagePrefixResult res;
    CF u = spec.blocks.front();
    std::size_t n_len = u.size();
    Int sigma = quotient_sum(u);
    if (sigma - 1 > max_bits) {
        res.capped = true;
        return res;
    }
    res.raw = image_cf(u, max_bits);
    res.blocks.push_back({0, res.raw.size(), Int(0)});
    res.depth_reached = 1;

    // Keep the trailing block in the representation the next fold consumes;
    // the range end tracks the (possibly shifted) boundary.
    const auto rewrite = [&](std::size_t next_block) {
        if (next_block >= spec.blocks.size()) return;
        CF c = canonicalize(res.raw);
        if (c.size() == 1 && c[0] == 1) return;  // image 1: single representation
        const bool swap = fold_case_swapped(n_len, c.size());
        CF want = swap ? other_representation(std::move(c)) : std::move(c);
        if (want != res.raw) {
            res.blocks.back().end = want.size();
            res.raw = std::move(want);
        }
    };
    rewrite(1);

    for (std::size_t i = 1; i < depth; ++i) {
        const Int& s = spec.slacks[i - 1];
        const CF& next = spec.blocks[i];
        const Int tau = sigma + s;
        const Int sigma_next = sigma + tau + quotient_sum(next);
        if (sigma_next - 1 > max_bits) {
            res.capped = true;
            ZEntry ze;
            ze.index = res.raw.size();
            ze.slack = s;
            ze.form = next.empty() ? ZForm::exact_pow2m1 : ZForm::bounded;
            res.zs.push_back(std::move(ze));
            break;
        }
        CF cimg = canonicalize(res.raw);
        const bool degenerate = cimg.size() == 1 && cimg[0] == 1;
        const bool swapped = fold_case_swapped(n_len, cimg.size());
        const std::size_t prev_len = res.raw.size();
        u.push_back(tau);
        u.insert(u.end(), next.begin(), next.end());
        n_len = u.size();
        const Int lo = fold_z(s, max_bits + 1);
        CF new_raw;
        if (next.empty()) {
            new_raw = res.raw;
            new_raw.push_back(lo);
            if (!degenerate) {
                const CF mirror = swapped ? std::move(cimg) : other_representation(std::move(cimg));
                new_raw.insert(new_raw.end(), mirror.rbegin(), mirror.rend());
            }
        } else {
            new_raw = image_cf(u, max_bits);
            if (new_raw.size() <= prev_len ||
                !std::equal(res.raw.begin(), res.raw.end(), new_raw.begin()))
                throw std::logic_error("image_prefix: prefix stability violated");
            const Int hi = 2 * lo + 1;
            if (prev_len == new_raw.size() - 1 && new_raw.back() == hi + 1) {
                new_raw.back() = hi;  // canonical merge of [hi, 1] at the boundary
                new_raw.push_back(1);
            }
            if (new_raw[prev_len] < lo || new_raw[prev_len] > hi)
                throw std::logic_error("image_prefix: entry out of fold bounds");
        }
        ZEntry ze;
        ze.index = prev_len;
        ze.slack = s;
        ze.form = next.empty() ? ZForm::exact_pow2m1 : ZForm::measured;
        res.zs.push_back(std::move(ze));
        res.blocks.push_back({prev_len + 1, new_raw.size(), Int(0)});
        res.raw = std::move(new_raw);
        sigma = sigma_next;
        res.depth_reached = i + 1;
        rewrite(i + 1);
    }

    // values and sums come off the final stored form: later representation
    // swaps may have moved a unit across the newest z/block boundary
    for (ZEntry& z : res.zs)
        if (z.index < res.raw.size()) z.value = res.raw[z.index];
    for (BlockImageInfo& b : res.blocks) b.sum = range_sum(res.raw, b.begin, b.end);
    return res;
}

}  // namespace qmfold
