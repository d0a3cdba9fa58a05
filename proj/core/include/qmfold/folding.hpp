#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qmfold/cf.hpp"

namespace qmfold {

// Closed form for the image of a one-entry extension. Input: the canonical
// image [b1..bk] (bk != 1) of a prefix [a1..a_{n-1}], and the slack s >= 0 of
// the appended entry a_n = (a1 + ... + a_{n-1}) + s. The image of the extended
// fraction is head ++ [z] ++ mirror with z = 2^(s+1) - 1, where head/mirror
// are the two representations of the input image (which one leads depends on
// the parity match of n and k).
struct FoldResult {
    CF image;              // verbatim closed form, length 2k + 2; may end in 1
    std::size_t z_index;   // position of z in image
    Int z;                 // 2^(s+1) - 1
    bool swapped_head;     // the altered representation leads (n == k mod 2)
};

FoldResult fold_step(const CF& prefix_image, std::size_t prefix_len,
                     const Int& slack, unsigned long max_bits = 1ul << 26);

// Range version: for ANY continuation past the slack entry, the image starts
// with shared_prefix, and the entry right after it lies in [z_lo, z_hi].
struct FoldBounds {
    CF shared_prefix;
    std::size_t z_index;   // == shared_prefix.size()
    Int z_lo;              // 2^(s+1) - 1
    Int z_hi;              // 2^(s+2) - 1
};

FoldBounds fold_range_bounds(const CF& prefix_image, std::size_t prefix_len,
                             const Int& slack, unsigned long max_bits = 1ul << 26);

// Entry of a measured image at z_index under the bounds reading: a final
// entry equal to z_hi + 1 stands for [z_hi, 1] before the canonical merge.
Int read_z_entry(const CF& image, std::size_t z_index, const Int& slack,
                 unsigned long max_bits = 1ul << 26);

// Blueprint [A1, t1, A2, t2, ...] with t_k = (sum of all entries so far) + s_k.
// blocks[0] nonempty, every entry >= 1, one slack per boundary, each s_k >= 1.
struct BlockSpec {
    std::vector<CF> blocks;
    std::vector<Int> slacks;
};

void validate_spec(const BlockSpec& spec);  // throws cf_error when malformed

// x-prefix through A_depth: [A1, t1, A2, ..., t_{depth-1}, A_depth].
CF expand_prefix(const BlockSpec& spec, std::size_t depth);

enum class ZForm {
    exact_pow2m1,  // produced by an empty-block fold: z = 2^(s+1) - 1 exactly
    measured,      // read from the computed image of a nonempty continuation
    bounded,       // not materialized (capped); only the [lo, hi] shape is known
};

struct ZEntry {
    std::size_t index = 0;     // position in raw (prospective when value is absent)
    Int slack;
    ZForm form = ZForm::measured;
    std::optional<Int> value;  // absent only on a capped trailing entry
};

struct BlockImageInfo {
    std::size_t begin = 0;  // half-open range of the k-th image block inside raw
    std::size_t end = 0;
    Int sum;                // stored-form sum over the range
};

// Image of the depth-prefix in *stored form*: the final block is kept in
// whichever of its two representations the next fold consumes, which makes
// raw literally a prefix of every deeper result. Block sums and z values are
// read off the final stored form (a representation swap can move one trailing
// unit between a z entry and an adjacent block). Construction stops early
// (capped = true) before any step whose image exponent would exceed max_bits;
// the trailing z entry is then reported with its shape only.
struct ImagePrefixResult {
    CF raw;
    std::vector<BlockImageInfo> blocks;  // image blocks B_1 .. B_depth_reached
    std::vector<ZEntry> zs;
    std::size_t depth_reached = 0;
    bool capped = false;
};

ImagePrefixResult image_prefix(const BlockSpec& spec, std::size_t depth,
                               unsigned long max_bits = 4096);

}  // namespace qmfold
