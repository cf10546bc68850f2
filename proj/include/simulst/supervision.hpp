#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "simulst/types.hpp"

namespace simulst {

// Training target with <WAIT> markers. permutation[k] is the original target
// index of the k-th non-WAIT token.
struct ReorderedTarget {
    std::vector<std::string> tokens;
    std::vector<std::size_t> permutation;

    bool operator==(const ReorderedTarget&) const = default;
};

struct ReorderOptions {
    // Emit a single <WAIT> for a run of consecutive empty chunks.
    bool collapse_waits = false;
};

// Throws IntegrityError unless the segmentation has one sorted segment per
// chunk and the segments partition [0, |target|).
ChunkAlignedExample build_example(std::string id, std::vector<Chunk> chunks,
                                  std::vector<std::string> target_tokens,
                                  ChunkSegmentation segmentation,
                                  std::vector<AlignmentLink> links = {});

// Re-checks every ChunkAlignedExample invariant, including stream/segment
// agreement. Throws IntegrityError.
void validate_example(const ChunkAlignedExample& ex);

ReorderedTarget reorder_target(const ChunkAlignedExample& ex, const ReorderOptions& options = {});

// Drops <WAIT> and puts each token back at its original index. Throws
// IntegrityError when the permutation is not a bijection over the tokens.
std::vector<std::string> invert_reorder(const ReorderedTarget& rt);

// Tokens one output unit expands to: its target words, or a single <WAIT>.
std::vector<std::string> unit_tokens(const ChunkAlignedExample& ex, std::size_t unit);

std::size_t empty_segment_count(const ChunkAlignedExample& ex);
std::size_t wait_count(const ReorderedTarget& rt);

}  // namespace simulst
