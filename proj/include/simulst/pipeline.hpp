#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simulst/chunker.hpp"
#include "simulst/corpus_io.hpp"
#include "simulst/metrics.hpp"
#include "simulst/stream_sim.hpp"
#include "simulst/supervision.hpp"
#include "simulst/types.hpp"

namespace simulst {

enum class AgentKind { kOracle, kWaitK, kFixed, kFullWait };

std::string_view to_string(AgentKind kind);
AgentKind agent_kind_from_string(std::string_view name);

struct AgentSpec {
    AgentKind kind = AgentKind::kOracle;
    std::size_t k = 3;
    std::size_t span = 7;
};

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const ChunkAlignedExample& ex);

// Everything one end-to-end run depends on. Paths are resolved against the
// manifest's directory when loaded from JSON.
struct RunManifest {
    std::filesystem::path conllu;
    std::filesystem::path bitext;
    std::optional<std::filesystem::path> timestamps;  // else CoNLL-U MISC
    std::optional<std::filesystem::path> links;       // else trained aligner
    ChunkerOptions chunker;
    std::size_t aligner_iterations = 10;
    double aligner_threshold = 0.1;
    bool collapse_waits = false;
    AgentSpec agent;
    WindowConfig window;
    std::vector<double> strides;
    std::filesystem::path output_dir = "runs";

    static RunManifest from_json_text(std::string_view text, const std::filesystem::path& base_dir);
    static RunManifest load(const std::filesystem::path& path);
    std::string to_json_text() const;

    // Throws ConfigError for missing paths or bad parameters.
    void validate() const;
    // SHA-256 over the settings and the bytes of every input file.
    std::string content_hash() const;
};

struct CorpusStats {
    std::size_t utterances = 0;
    std::size_t chunks = 0;
    std::size_t empty_segments = 0;
    std::map<std::size_t, std::size_t> chunk_length_histogram;
    std::size_t target_tokens = 0;
    std::size_t linked_target_tokens = 0;
    std::size_t skipped_training_pairs = 0;
    std::vector<std::string> failures;

    double wait_rate() const;
    double alignment_coverage() const;
};

struct BuiltCorpus {
    std::vector<ParsedUtterance> utterances;  // fully timed, same order as examples
    std::vector<ChunkAlignedExample> examples;
    CorpusStats stats;
};

struct BuildOptions {
    ChunkerOptions chunker;
    std::size_t aligner_iterations = 10;
    double aligner_threshold = 0.1;
};

// Joins parses, bitext, optional timestamps and optional links by id, then
// chunks, aligns, groups and builds every example. Join problems are listed
// in stats.failures and then raised as JoinError; `on_failure` (if set) sees
// the partial stats first.
BuiltCorpus build_corpus(std::vector<ParsedUtterance> parses, std::span<const SentencePair> bitext,
                         const TimestampManifest* timestamps,
                         const std::vector<std::vector<AlignmentLink>>* links,
                         const BuildOptions& options,
                         const std::function<void(const CorpusStats&)>& on_failure = {});

BuiltCorpus build_corpus(const RunManifest& manifest,
                         const std::function<void(const CorpusStats&)>& on_failure = {});

struct EvaluationResult {
    std::vector<SimulationTrace> traces;
    std::vector<LatencyReport> per_utterance;
    double stream_laal_ms = 0.0;
    BleuScore bleu;
    BoundaryTally boundary;
};

EvaluationResult evaluate(const BuiltCorpus& corpus, const AgentSpec& agent, const WindowConfig& window);

struct SweepRow {
    double stride_s = 0.0;
    double stream_laal_ms = 0.0;
    double bleu = 0.0;
    double mean_al_ms = 0.0;
    double boundary_alignment = 0.0;
};

// One row per stride, sorted by stride.
std::vector<SweepRow> sweep_stride(const BuiltCorpus& corpus, const AgentSpec& agent,
                                   const WindowConfig& base, std::span<const double> strides);

// Runs build + simulate + score (+ sweep when strides are given) and writes
// everything under <output_dir>/<hash prefix>/. Returns that directory.
std::filesystem::path run_pipeline(const RunManifest& manifest);

// JSON renderings shared by the pipeline and the CLI.
std::string stats_json(const CorpusStats& stats);
std::string report_json(const EvaluationResult& result, std::span<const ChunkAlignedExample> examples);
std::string sweep_json(std::span<const SweepRow> rows);

// Runs fn(i) for i in [0, n) on a small worker pool. Results must be written
// to per-index slots so that output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace simulst
