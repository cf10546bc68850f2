#include "simulst/aligner.hpp"

#include <algorithm>
#include <cmath>

#include "simulst/error.hpp"

namespace simulst {

double LexiconTable::row_probability(std::uint32_t src_id, std::string_view tgt) const {
    const Row& row = rows_[src_id];
    auto t = tgt_ids_.find(std::string(tgt));
    if (t == tgt_ids_.end()) return row.unseen;
    auto p = row.probs.find(t->second);
    return p == row.probs.end() ? row.unseen : p->second;
}

double LexiconTable::probability(std::string_view src, std::string_view tgt) const {
    auto s = src_ids_.find(std::string(src));
    if (s == src_ids_.end()) return 0.0;
    return row_probability(s->second, tgt);
}

double LexiconTable::null_probability(std::string_view tgt) const {
    if (rows_.empty()) return 0.0;
    return row_probability(kNull, tgt);
}

double LexiconTable::row_mass(std::uint32_t src_id) const {
    const Row& row = rows_[src_id];
    double mass = 0.0;
    for (const auto& [f, p] : row.probs) mass += p;
    return mass + static_cast<double>(tgt_words_.size() - row.probs.size()) * row.unseen;
}

double LexiconTable::row_mass(std::string_view src) const {
    auto s = src_ids_.find(std::string(src));
    return s == src_ids_.end() ? 0.0 : row_mass(s->second);
}

double LexiconTable::null_row_mass() const { return rows_.empty() ? 0.0 : row_mass(kNull); }

std::string LexiconTable::best_translation(std::string_view src) const {
    auto s = src_ids_.find(std::string(src));
    if (s == src_ids_.end()) return {};
    const Row& row = rows_[s->second];
    std::uint32_t best = 0;
    double best_p = -1.0;
    for (const auto& [f, p] : row.probs) {
        if (p > best_p || (p == best_p && f < best)) {
            best = f;
            best_p = p;
        }
    }
    return best_p < 0.0 ? std::string{} : tgt_words_[best];
}

LexiconTable train_lexicon(std::span<const SentencePair> bitext, const TrainingOptions& options) {
    if (bitext.empty()) throw ConfigError("cannot train an aligner on an empty bitext");
    if (options.iterations == 0) throw ConfigError("aligner needs at least one iteration");
    if (!(options.smoothing > 0.0)) throw ConfigError("smoothing must be positive");

    LexiconTable table;
    struct Encoded {
        std::vector<std::uint32_t> src;  // with NULL at position 0
        std::vector<std::uint32_t> tgt;
    };
    std::vector<Encoded> corpus;
    for (const auto& pair : bitext) {
        if (pair.source.empty() || pair.target.empty()) {
            ++table.skipped_pairs_;
            continue;
        }
        Encoded e;
        e.src.push_back(LexiconTable::kNull);
        for (const auto& w : pair.source) {
            auto [it, fresh] = table.src_ids_.emplace(w, static_cast<std::uint32_t>(table.src_words_.size() + 1));
            if (fresh) table.src_words_.push_back(w);
            e.src.push_back(it->second);
        }
        for (const auto& w : pair.target) {
            auto [it, fresh] = table.tgt_ids_.emplace(w, static_cast<std::uint32_t>(table.tgt_words_.size()));
            if (fresh) table.tgt_words_.push_back(w);
            e.tgt.push_back(it->second);
        }
        corpus.push_back(std::move(e));
    }
    if (corpus.empty()) return table;

    const double vf = static_cast<double>(table.tgt_words_.size());
    table.rows_.resize(table.src_words_.size() + 1);
    for (auto& row : table.rows_) row.unseen = 1.0 / vf;
    for (const auto& e : corpus) {
        for (auto s : e.src) {
            for (auto f : e.tgt) table.rows_[s].probs[f] = 1.0 / vf;
        }
    }

    auto lookup = [&](std::uint32_t s, std::uint32_t f) {
        const auto& row = table.rows_[s];
        auto it = row.probs.find(f);
        return it == row.probs.end() ? row.unseen : it->second;
    };

    // One E-step; returns the log-likelihood of the current table and fills
    // expected counts when asked.
    auto expect = [&](std::vector<std::unordered_map<std::uint32_t, double>>* counts, std::vector<double>* totals) {
        double ll = 0.0;
        for (const auto& e : corpus) {
            const double norm = static_cast<double>(e.src.size());
            for (auto f : e.tgt) {
                double denom = 0.0;
                for (auto s : e.src) denom += lookup(s, f);
                ll += std::log(denom / norm);
                if (!counts) continue;
                for (auto s : e.src) {
                    const double post = lookup(s, f) / denom;
                    (*counts)[s][f] += post;
                    (*totals)[s] += post;
                }
            }
        }
        return ll;
    };

    const double eps = options.smoothing;
    for (std::size_t it = 1; it <= options.iterations; ++it) {
        std::vector<std::unordered_map<std::uint32_t, double>> counts(table.rows_.size());
        std::vector<double> totals(table.rows_.size(), 0.0);
        table.log_likelihood_.push_back(expect(&counts, &totals));
        for (std::size_t s = 0; s < table.rows_.size(); ++s) {
            const double denom = totals[s] + eps * vf;
            auto& row = table.rows_[s];
            row.probs.clear();
            for (const auto& [f, c] : counts[s]) row.probs[f] = (c + eps) / denom;
            row.unseen = eps / denom;
        }
        if (options.on_iteration) options.on_iteration(it, table);
    }
    table.log_likelihood_.push_back(expect(nullptr, nullptr));
    return table;
}

std::vector<AlignmentLink> align_pair(std::span<const std::string> src, std::span<const std::string> tgt,
                                      const LexiconTable& table, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("alignment threshold must lie in [0, 1]");
    std::vector<AlignmentLink> links;
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        double best = table.null_probability(tgt[j]);
        std::optional<std::size_t> best_i;
        for (std::size_t i = 0; i < src.size(); ++i) {
            const double p = table.probability(src[i], tgt[j]);
            if (p > best) {
                best = p;
                best_i = i;
            }
        }
        if (best_i && best >= threshold) links.push_back({*best_i, j, best});
    }
    return links;
}

ChunkSegmentation group_segments(std::span<const Chunk> chunks, std::span<const AlignmentLink> links,
                                 std::size_t tgt_len) {
    ChunkSegmentation seg;
    if (chunks.empty()) {
        if (tgt_len > 0) throw IntegrityError("cannot place target tokens without chunks");
        return seg;
    }
    const std::size_t n = chunks.back().end;
    std::vector<std::size_t> owner(tgt_len, chunks.size() - 1);
    std::vector<bool> linked(tgt_len, false);
    for (const auto& l : links) {
        if (l.src >= n) throw BoundsError("link source " + std::to_string(l.src) + " outside " + std::to_string(n) + " source tokens");
        if (l.tgt >= tgt_len) throw BoundsError("link target " + std::to_string(l.tgt) + " outside " + std::to_string(tgt_len) + " target tokens");
        auto it = std::upper_bound(chunks.begin(), chunks.end(), l.src,
                                   [](std::size_t s, const Chunk& c) { return s < c.end; });
        const auto k = static_cast<std::size_t>(it - chunks.begin());
        if (!linked[l.tgt] || k < owner[l.tgt]) owner[l.tgt] = k;
        linked[l.tgt] = true;
    }
    seg.segments.resize(chunks.size());
    for (std::size_t j = 0; j < tgt_len; ++j) seg.segments[owner[j]].push_back(j);
    return seg;
}

}  // namespace simulst
