#include "simulst/supervision.hpp"

#include <algorithm>
#include <limits>

#include "simulst/chunker.hpp"
#include "simulst/error.hpp"

namespace simulst {

ChunkAlignedExample build_example(std::string id, std::vector<Chunk> chunks, std::vector<std::string> target_tokens,
                                  ChunkSegmentation segmentation, std::vector<AlignmentLink> links) {
    ChunkAlignedExample ex;
    ex.id = std::move(id);
    ex.chunks = std::move(chunks);
    ex.target_tokens = std::move(target_tokens);
    ex.segmentation = std::move(segmentation);
    ex.links = std::move(links);
    for (const auto& seg : ex.segmentation.segments) ex.stream.push_back(OutputUnit{seg});
    validate_example(ex);
    return ex;
}

void validate_example(const ChunkAlignedExample& ex) {
    auto fail = [&](const std::string& what) { throw IntegrityError("example \"" + ex.id + "\": " + what); };
    try {
        validate_tiling(ex.chunks, ex.source_length(), std::numeric_limits<std::size_t>::max());
    } catch (const IntegrityError& e) {
        fail(e.what());
    }
    const auto& segs = ex.segmentation.segments;
    if (segs.size() != ex.chunks.size()) {
        fail(std::to_string(segs.size()) + " segments for " + std::to_string(ex.chunks.size()) + " chunks");
    }
    if (ex.stream.size() != segs.size()) fail("stream length differs from segmentation");
    const std::size_t m = ex.target_tokens.size();
    std::vector<bool> seen(m, false);
    for (std::size_t k = 0; k < segs.size(); ++k) {
        if (ex.stream[k].indices != segs[k]) fail("output unit " + std::to_string(k) + " differs from its segment");
        for (std::size_t x = 0; x < segs[k].size(); ++x) {
            const std::size_t j = segs[k][x];
            if (j >= m) fail("segment " + std::to_string(k) + " holds index " + std::to_string(j) + " past the target");
            if (x > 0 && segs[k][x - 1] >= j) fail("segment " + std::to_string(k) + " is not in target order");
            if (seen[j]) fail("target index " + std::to_string(j) + " appears twice");
            seen[j] = true;
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!seen[j]) fail("target index " + std::to_string(j) + " is in no segment");
        if (ex.target_tokens[j] == kWaitToken) fail("target token " + std::to_string(j) + " is the reserved <WAIT>");
    }
}

std::vector<std::string> unit_tokens(const ChunkAlignedExample& ex, std::size_t unit) {
    const OutputUnit& u = ex.stream.at(unit);
    if (u.is_wait()) return {std::string(kWaitToken)};
    std::vector<std::string> out;
    for (auto j : u.indices) out.push_back(ex.target_tokens[j]);
    return out;
}

ReorderedTarget reorder_target(const ChunkAlignedExample& ex, const ReorderOptions& options) {
    ReorderedTarget rt;
    bool last_wait = false;
    for (const auto& unit : ex.stream) {
        if (unit.is_wait()) {
            if (!(options.collapse_waits && last_wait)) rt.tokens.emplace_back(kWaitToken);
            last_wait = true;
            continue;
        }
        for (auto j : unit.indices) {
            rt.tokens.push_back(ex.target_tokens[j]);
            rt.permutation.push_back(j);
        }
        last_wait = false;
    }
    return rt;
}

std::vector<std::string> invert_reorder(const ReorderedTarget& rt) {
    std::vector<const std::string*> words;
    for (const auto& t : rt.tokens) {
        if (t != kWaitToken) words.push_back(&t);
    }
    if (words.size() != rt.permutation.size()) {
        throw IntegrityError("permutation covers " + std::to_string(rt.permutation.size()) + " of " +
                             std::to_string(words.size()) + " tokens");
    }
    std::vector<std::string> out(words.size());
    std::vector<bool> used(words.size(), false);
    for (std::size_t k = 0; k < words.size(); ++k) {
        const std::size_t j = rt.permutation[k];
        if (j >= words.size() || used[j]) throw IntegrityError("permutation is not a bijection");
        used[j] = true;
        out[j] = *words[k];
    }
    return out;
}

std::size_t empty_segment_count(const ChunkAlignedExample& ex) {
    return static_cast<std::size_t>(std::count_if(ex.segmentation.segments.begin(), ex.segmentation.segments.end(),
                                                  [](const auto& s) { return s.empty(); }));
}

std::size_t wait_count(const ReorderedTarget& rt) {
    return static_cast<std::size_t>(std::count(rt.tokens.begin(), rt.tokens.end(), kWaitToken));
}

}  // namespace simulst
