#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "simulst/corpus_io.hpp"
#include "simulst/types.hpp"

namespace simulst {

class LexiconTable;

struct TrainingOptions {
    std::size_t iterations = 10;
    // Additive count smoothing; also the floor for unseen pairs.
    double smoothing = 1e-9;
    // Called after every M-step with the 1-based iteration number.
    std::function<void(std::size_t, const LexiconTable&)> on_iteration;
};

// IBM Model 1 translation table t(target | source) with a NULL source word.
class LexiconTable {
public:
    // t(tgt | src). Unknown target words get the source word's floor; unknown
    // source words get 0.
    double probability(std::string_view src, std::string_view tgt) const;
    double null_probability(std::string_view tgt) const;

    std::size_t source_vocabulary_size() const { return src_words_.size(); }
    std::size_t target_vocabulary_size() const { return tgt_words_.size(); }
    const std::vector<std::string>& source_words() const { return src_words_; }
    const std::vector<std::string>& target_words() const { return tgt_words_; }

    // Sum of t(f | src) over the whole target vocabulary.
    double row_mass(std::string_view src) const;
    double null_row_mass() const;

    // Most probable target word for `src` (ties go to the earlier word).
    std::string best_translation(std::string_view src) const;

    // Corpus log-likelihood after each iteration; entry 0 is the uniform start.
    const std::vector<double>& log_likelihood_history() const { return log_likelihood_; }
    std::size_t skipped_pairs() const { return skipped_pairs_; }

private:
    friend LexiconTable train_lexicon(std::span<const SentencePair>, const TrainingOptions&);

    static constexpr std::uint32_t kNull = 0;  // row 0 is the NULL word

    struct Row {
        std::unordered_map<std::uint32_t, double> probs;
        double unseen = 0.0;
    };

    double row_probability(std::uint32_t src_id, std::string_view tgt) const;
    double row_mass(std::uint32_t src_id) const;

    std::vector<std::string> src_words_;
    std::vector<std::string> tgt_words_;
    std::unordered_map<std::string, std::uint32_t> src_ids_;  // ids start at 1
    std::unordered_map<std::string, std::uint32_t> tgt_ids_;
    std::vector<Row> rows_;
    std::vector<double> log_likelihood_;
    std::size_t skipped_pairs_ = 0;
};

// Deterministic given input order. Pairs with an empty side are skipped and
// counted. Throws ConfigError for an empty bitext or zero iterations.
LexiconTable train_lexicon(std::span<const SentencePair> bitext, const TrainingOptions& options = {});

// For each target position, link to the best source word if it beats NULL and
// reaches `threshold`. Links come out sorted by target index.
std::vector<AlignmentLink> align_pair(std::span<const std::string> src,
                                      std::span<const std::string> tgt,
                                      const LexiconTable& table, double threshold);

// Each target index goes to the earliest chunk holding one of its linked
// source words; unlinked target indices go to the last chunk.
ChunkSegmentation group_segments(std::span<const Chunk> chunks,
                                 std::span<const AlignmentLink> links, std::size_t tgt_len);

}  // namespace simulst
