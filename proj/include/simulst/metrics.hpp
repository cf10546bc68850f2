#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "simulst/types.hpp"

namespace simulst {

// ─── Latency ─────────────────────────────────────────────────────────────────
//
// Delays are milliseconds of source audio read before each target token. With
// gamma = length / source duration and tau the first token written after the
// whole source was read (or the last token):
//
//   lagging = 1/tau * sum_{i=1..tau} [ d(i) - (i-1)/gamma ]
//
// AL takes length = reference length; LAAL takes max(reference, hypothesis).

struct LaggingResult {
    double value_ms = 0.0;
    std::size_t tau = 0;
    double gamma = 0.0;  // tokens per millisecond
};

struct LatencyReport {
    double al_ms = 0.0;
    double laal_ms = 0.0;
    double stream_laal_ms = 0.0;
    std::size_t tau = 0;
    double gamma = 0.0;
};

// Throws UndefinedMetricError for no delays, zero duration or zero length.
LaggingResult lagging(std::span<const Millis> delays, Millis source_duration_ms, std::size_t length);

LaggingResult average_lagging(const SimulationTrace& trace, std::size_t ref_len);
LaggingResult laal(const SimulationTrace& trace, std::size_t ref_len, std::size_t hyp_len);
LatencyReport latency_report(const SimulationTrace& trace, std::size_t ref_len);

// A reference segment of a continuous stream on the global clock. Tokens whose
// read frontier falls in [start_ms, end_ms] belong to it (earliest segment
// wins at a shared edge).
struct StreamSegment {
    Millis start_ms = 0;
    Millis end_ms = 0;
    std::size_t ref_len = 0;
};

struct StreamLaalResult {
    double value_ms = 0.0;
    std::vector<double> segment_laal_ms;
    std::vector<std::size_t> assigned_tokens;
    // Segments that received no tokens carry no LAAL and no weight.
    std::size_t empty_segments = 0;
};

// Each global delay is assigned to a segment, LAAL is computed per segment on
// its local clock, and the result is the mean weighted by reference length.
// Throws AssignmentError when a delay lies outside every segment.
StreamLaalResult stream_laal(std::span<const Millis> global_delays,
                             std::span<const StreamSegment> segments);

// Per-utterance traces laid back to back on one clock (offset by cumulative
// source duration), then scored as above.
StreamLaalResult stream_laal(std::span<const SimulationTrace> traces,
                             std::span<const std::size_t> ref_lens);

// ─── BLEU ────────────────────────────────────────────────────────────────────

inline constexpr std::size_t kBleuOrder = 4;

// Sufficient statistics; corpus BLEU is a function of their sum.
struct BleuStats {
    std::array<std::size_t, kBleuOrder> matches{};
    std::array<std::size_t, kBleuOrder> totals{};
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;

    BleuStats& operator+=(const BleuStats& other);
};

struct BleuScore {
    double score = 0.0;  // [0, 100]
    std::array<double, kBleuOrder> precisions{};
    double brevity_penalty = 1.0;
    // Order n had no matching n-gram. For n >= 2 the precision was smoothed
    // to 1 / (total + 1); a unigram miss leaves precision 0 and score 0.
    std::array<bool, kBleuOrder> zero_matches{};
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;
};

BleuStats bleu_stats(std::span<const std::string> hyp, std::span<const std::string> ref);
BleuScore bleu_from_stats(const BleuStats& stats);
// Corpus-level BLEU. Throws UndefinedMetricError for an empty corpus and
// std::invalid_argument when the counts differ.
BleuScore bleu(std::span<const std::vector<std::string>> hyps,
               std::span<const std::vector<std::string>> refs);

// ─── Boundary alignment ──────────────────────────────────────────────────────

// Source positions where writing (re)starts: the frontier of every WRITE whose
// frontier differs from the previous WRITE's.
std::vector<std::size_t> translation_triggers(const SimulationTrace& trace);

// Right edges of a chunking (includes the end of the utterance).
std::vector<std::size_t> chunk_boundaries(std::span<const Chunk> chunks);

struct BoundaryTally {
    std::size_t aligned = 0;
    std::size_t triggers = 0;

    BoundaryTally& operator+=(const BoundaryTally& other);
    // Throws UndefinedMetricError when there are no triggers.
    double rate() const;
};

BoundaryTally tally_boundary_alignment(std::span<const std::size_t> triggers,
                                       std::span<const std::size_t> gold_boundaries,
                                       std::size_t tolerance = 1);

// Fraction of triggers within `tolerance` tokens of some gold boundary.
double boundary_alignment_rate(std::span<const std::size_t> triggers,
                               std::span<const std::size_t> gold_boundaries,
                               std::size_t tolerance = 1);

}  // namespace simulst
