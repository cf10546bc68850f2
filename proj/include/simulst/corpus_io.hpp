#pragma once

// Readers and writers for every file the toolkit touches: CoNLL-U parses,
// Pharaoh alignments, word-timestamp manifests, tab-separated bitext, and the
// toolkit's own chunk / supervision / trace JSONL files. All parsers are pure
// functions of their input text.

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simulst/types.hpp"

namespace simulst {

// ─── CoNLL-U ─────────────────────────────────────────────────────────────────

// Multiword ranges ("3-4") and empty nodes ("3.1") are skipped. MISC keys
// start_ms= / end_ms= become token timestamps. Every returned utterance has
// passed validate_utterance().
std::vector<ParsedUtterance> parse_conllu(std::string_view text);
std::string write_conllu(std::span<const ParsedUtterance> utterances);

// Throws StructureError (naming the utterance) on a broken tree, bad indices
// or inconsistent timestamps.
void validate_utterance(const ParsedUtterance& u);

// ─── Alignments ──────────────────────────────────────────────────────────────

// One sentence worth of "i-j" pairs. Result is sorted by (src, tgt) with
// duplicates removed; every score is 1.0.
std::vector<AlignmentLink> parse_pharaoh(std::string_view line, std::size_t n_src,
                                         std::size_t n_tgt);
std::string write_pharaoh(std::span<const AlignmentLink> links);

// ─── Word timestamps ─────────────────────────────────────────────────────────

struct TimedWord {
    std::string word;
    Millis start_ms = 0;
    Millis end_ms = 0;

    bool operator==(const TimedWord&) const = default;
};

using TimestampManifest = std::map<std::string, std::vector<TimedWord>>;

// One JSON object per line: {"id", "words":[{"w","start_ms","end_ms"}...]}.
TimestampManifest parse_timestamp_manifest(std::string_view text);

// Copies timestamps onto tokens in order. Surfaces must match exactly after
// NFC normalization; any count or surface mismatch throws JoinError.
void attach_timestamps(ParsedUtterance& u, std::span<const TimedWord> words);

// Builds an unparsed, fully timed utterance straight from manifest words.
ParsedUtterance utterance_from_words(std::string id, std::span<const TimedWord> words);

std::string nfc_normalize(std::string_view utf8);

// ─── Bitext ──────────────────────────────────────────────────────────────────

struct SentencePair {
    std::string id;
    std::vector<std::string> source;
    std::vector<std::string> target;
};

// "id<TAB>source tokens<TAB>target tokens" per line, whitespace tokenized.
std::vector<SentencePair> parse_bitext(std::string_view text);

// ─── Toolkit JSONL formats ───────────────────────────────────────────────────

struct ChunkedUtterance {
    std::string id;
    std::vector<Chunk> chunks;
};

std::string write_chunks(std::span<const ChunkedUtterance> items);
std::vector<ChunkedUtterance> read_chunks(std::string_view text);

// With collapse_waits, runs of empty chunks produce a single "<WAIT>" in
// target_stream; per-chunk entries are unchanged.
std::string write_supervision(std::span<const ChunkAlignedExample> examples,
                              bool collapse_waits = false);
std::vector<ChunkAlignedExample> read_supervision(std::string_view text);

std::string write_traces(std::span<const SimulationTrace> traces);
std::vector<SimulationTrace> read_traces(std::string_view text);

// ─── Files ───────────────────────────────────────────────────────────────────

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace simulst
