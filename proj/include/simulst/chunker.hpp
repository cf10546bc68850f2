#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "simulst/types.hpp"

namespace simulst {

// A between-token position p (1 <= p < n) where at least one rule fired.
// Reasons are ordered by priority: punctuation, dependency transition, then
// NP / VP / PP phrase edges.
struct BoundaryCandidate {
    std::size_t position = 0;
    std::vector<BoundaryReason> reasons;

    const BoundaryReason& primary() const { return reasons.front(); }
    bool has(BoundaryKind kind) const;
};

struct ChunkerOptions {
    std::size_t max_span = 7;
    // When false, PUNCT tokens do not count toward max_span.
    bool count_punctuation = true;
};

// Rules, over UD tags only:
//   punctuation   token p-1 or token p is PUNCT
//   phrase edge   token p-1 ends the maximal phrase of a content head:
//                 NOUN/PROPN/PRON -> NP, VERB/AUX -> VP, and any phrase whose
//                 first token is an ADP attaching to its right -> PP
//   transition    token p-1 is nsubj/csubj and token p is VERB/AUX
std::vector<BoundaryCandidate> boundary_candidates(const ParsedUtterance& u);

// Largest contiguous [first, last] around `head` in which every other token's
// head also lies inside. The root can only ever be inside its own phrase.
std::pair<std::size_t, std::size_t> phrase_span(const ParsedUtterance& u, std::size_t head);

// Greedy left to right: close at the first candidate, force a MAX_SPAN cut
// when the span is full, END_OF_UTTERANCE for the last chunk.
std::vector<Chunk> chunk_utterance(const ParsedUtterance& u, const ChunkerOptions& options = {});

// Throws IntegrityError unless chunks tile [0, n) with lengths in [1, max_span].
void validate_tiling(std::span<const Chunk> chunks, std::size_t n, std::size_t max_span);

}  // namespace simulst
