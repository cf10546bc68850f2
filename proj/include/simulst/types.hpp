#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simulst {

// Output symbol meaning "keep reading, nothing to emit yet".
inline constexpr std::string_view kWaitToken = "<WAIT>";

using Millis = std::int64_t;

// ─── Source side ─────────────────────────────────────────────────────────────

struct Token {
    std::size_t index = 0;
    std::string surface;
    std::string upos;
    std::string deprel;
    std::optional<std::size_t> head;  // nullopt for the root
    std::optional<Millis> start_ms;
    std::optional<Millis> end_ms;

    bool timed() const { return start_ms.has_value() && end_ms.has_value(); }
    bool operator==(const Token&) const = default;
};

struct ParsedUtterance {
    std::string id;
    std::vector<Token> tokens;
    std::optional<std::string> text;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    bool fully_timed() const;
    // End of the last word; 0 for an empty utterance. Requires fully_timed().
    Millis duration_ms() const;
    std::vector<std::string> surfaces() const;

    bool operator==(const ParsedUtterance&) const = default;
};

struct AlignmentLink {
    std::size_t src = 0;
    std::size_t tgt = 0;
    double score = 1.0;

    bool operator==(const AlignmentLink&) const = default;
};

// ─── Chunking ────────────────────────────────────────────────────────────────

enum class BoundaryKind {
    kPunctuation,
    kPhraseEdgeNP,
    kPhraseEdgeVP,
    kPhraseEdgePP,
    kDepTransition,
    kMaxSpan,
    kEndOfUtterance,
};

std::string_view to_string(BoundaryKind kind);
// Throws ParseError for unknown names.
BoundaryKind boundary_kind_from_string(std::string_view name);

struct BoundaryReason {
    BoundaryKind kind = BoundaryKind::kEndOfUtterance;
    std::string detail;

    bool operator==(const BoundaryReason&) const = default;
};

// Half-open source span [start, end) closed on the right by `reason`.
struct Chunk {
    std::size_t start = 0;
    std::size_t end = 0;
    BoundaryReason reason;

    std::size_t length() const { return end - start; }
    bool operator==(const Chunk&) const = default;
};

// One list of target indices per chunk, each in target-sentence order.
struct ChunkSegmentation {
    std::vector<std::vector<std::size_t>> segments;

    bool operator==(const ChunkSegmentation&) const = default;
};

// ─── Supervision ─────────────────────────────────────────────────────────────

// What the model should emit once a chunk has been read: the listed target
// indices, or a single <WAIT> when the list is empty.
struct OutputUnit {
    std::vector<std::size_t> indices;

    bool is_wait() const { return indices.empty(); }
    bool operator==(const OutputUnit&) const = default;
};

struct ChunkAlignedExample {
    std::string id;
    std::vector<Chunk> chunks;
    std::vector<std::string> target_tokens;
    ChunkSegmentation segmentation;
    std::vector<OutputUnit> stream;
    // Word links the segmentation was grouped from. Kept so that alternative
    // chunkings (the fixed-length baseline) can be regrouped later.
    std::vector<AlignmentLink> links;

    std::size_t source_length() const { return chunks.empty() ? 0 : chunks.back().end; }
    bool operator==(const ChunkAlignedExample&) const = default;
};

// ─── Simulation ──────────────────────────────────────────────────────────────

enum class EventKind { kRead, kWrite, kWait, kEos };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

struct StreamEvent {
    EventKind kind = EventKind::kRead;
    Millis time_ms = 0;
    // READ: audio span [span_begin_ms, span_end_ms) consumed by this step.
    Millis span_begin_ms = 0;
    Millis span_end_ms = 0;
    // WRITE: emitted target token.
    std::string token;
    // Number of source words the event is conditioned on. For READ and EOS
    // this is every word covered so far; WRITE/WAIT carry what the agent
    // declared, which is never more than what was covered.
    std::size_t frontier = 0;

    bool operator==(const StreamEvent&) const = default;
};

struct SimulationTrace {
    std::string id;
    std::vector<StreamEvent> events;
    // delays[i]: audio milliseconds read before target token i was written.
    std::vector<Millis> delays;
    Millis source_duration_ms = 0;
    std::size_t source_words = 0;

    // WRITE payloads in order. <WAIT> is never a WRITE, so never appears here.
    std::vector<std::string> hypothesis() const;
    bool operator==(const SimulationTrace&) const = default;
};

}  // namespace simulst
