#include "simulst/chunker.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "simulst/error.hpp"

namespace simulst {

namespace {

bool is_punct(const Token& t) { return t.upos == "PUNCT"; }

std::string_view base_relation(std::string_view deprel) {
    return deprel.substr(0, deprel.find(':'));
}

// Dependents that attach to a phrase rather than head one of their own.
bool is_functional(const Token& t) {
    static constexpr std::array<std::string_view, 13> kFunctional = {
        "aux", "case", "cc", "clf", "compound", "cop", "det", "expl", "fixed", "flat", "goeswith", "mark", "punct"};
    if (t.deprel == "nmod:poss") return true;
    const auto base = base_relation(t.deprel);
    return std::find(kFunctional.begin(), kFunctional.end(), base) != kFunctional.end();
}

int priority(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::kPunctuation: return 0;
        case BoundaryKind::kDepTransition: return 1;
        case BoundaryKind::kPhraseEdgeNP: return 2;
        case BoundaryKind::kPhraseEdgeVP: return 3;
        case BoundaryKind::kPhraseEdgePP: return 4;
        case BoundaryKind::kMaxSpan: return 5;
        case BoundaryKind::kEndOfUtterance: return 6;
    }
    return 7;
}

void add_reason(std::vector<BoundaryReason>& at, BoundaryKind kind, std::string detail) {
    for (const auto& r : at) {
        if (r.kind == kind) return;
    }
    at.push_back({kind, std::move(detail)});
}

}  // namespace

bool BoundaryCandidate::has(BoundaryKind kind) const {
    return std::any_of(reasons.begin(), reasons.end(), [&](const BoundaryReason& r) { return r.kind == kind; });
}

std::pair<std::size_t, std::size_t> phrase_span(const ParsedUtterance& u, std::size_t head) {
    const std::size_t n = u.tokens.size();
    if (head >= n) throw BoundsError("phrase head " + std::to_string(head) + " outside utterance of " + std::to_string(n));
    std::size_t a = 0;
    std::size_t b = n - 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t t = a; t <= b; ++t) {
            if (t == head) continue;
            const auto& h = u.tokens[t].head;
            if (h && *h >= a && *h <= b) continue;
            if (t < head) {
                a = t + 1;
            } else {
                b = t - 1;
            }
            changed = true;
            break;
        }
    }
    return {a, b};
}

std::vector<BoundaryCandidate> boundary_candidates(const ParsedUtterance& u) {
    const std::size_t n = u.tokens.size();
    std::vector<std::vector<BoundaryReason>> at(n + 1);
    if (n < 2) return {};

    for (std::size_t p = 1; p < n; ++p) {
        const Token& left = u.tokens[p - 1];
        const Token& right = u.tokens[p];
        if (is_punct(left) || is_punct(right)) {
            add_reason(at[p], BoundaryKind::kPunctuation, "PUNCT:" + (is_punct(left) ? left : right).surface);
        }
        const auto rel = base_relation(left.deprel);
        if ((rel == "nsubj" || rel == "csubj") && (right.upos == "VERB" || right.upos == "AUX")) {
            add_reason(at[p], BoundaryKind::kDepTransition, std::string(rel) + "->" + right.upos);
        }
    }

    for (std::size_t h = 0; h < n; ++h) {
        const Token& head = u.tokens[h];
        if (is_functional(head) || is_punct(head)) continue;
        const auto [first, last] = phrase_span(u, h);
        const std::size_t edge = last + 1;
        if (edge >= n) continue;
        if (head.upos == "NOUN" || head.upos == "PROPN" || head.upos == "PRON") {
            add_reason(at[edge], BoundaryKind::kPhraseEdgeNP, "NP:" + head.surface);
        } else if (head.upos == "VERB" || head.upos == "AUX") {
            add_reason(at[edge], BoundaryKind::kPhraseEdgeVP, "VP:" + head.surface);
        }
        const Token& lead = u.tokens[first];
        if (lead.upos == "ADP" && lead.head && *lead.head > first) {
            add_reason(at[edge], BoundaryKind::kPhraseEdgePP, "PP:" + lead.surface + ".." + head.surface);
        }
    }

    std::vector<BoundaryCandidate> out;
    for (std::size_t p = 1; p < n; ++p) {
        if (at[p].empty()) continue;
        std::stable_sort(at[p].begin(), at[p].end(),
                         [](const auto& x, const auto& y) { return priority(x.kind) < priority(y.kind); });
        out.push_back({p, std::move(at[p])});
    }
    return out;
}

std::vector<Chunk> chunk_utterance(const ParsedUtterance& u, const ChunkerOptions& options) {
    if (options.max_span == 0) throw ConfigError("max_span must be at least 1");
    const std::size_t n = u.tokens.size();
    std::vector<const BoundaryReason*> cut(n + 1, nullptr);
    const auto candidates = boundary_candidates(u);
    for (const auto& c : candidates) cut[c.position] = &c.primary();

    std::vector<Chunk> chunks;
    std::size_t start = 0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (options.count_punctuation || !is_punct(u.tokens[i])) ++counted;
        const std::size_t pos = i + 1;
        if (pos == n) {
            chunks.push_back({start, n, {BoundaryKind::kEndOfUtterance, "end"}});
        } else if (cut[pos]) {
            chunks.push_back({start, pos, *cut[pos]});
        } else if (counted >= options.max_span) {
            chunks.push_back({start, pos, {BoundaryKind::kMaxSpan, "cap=" + std::to_string(options.max_span)}});
        } else {
            continue;
        }
        start = pos;
        counted = 0;
    }
    return chunks;
}

void validate_tiling(std::span<const Chunk> chunks, std::size_t n, std::size_t max_span) {
    std::size_t expect = 0;
    for (std::size_t k = 0; k < chunks.size(); ++k) {
        const Chunk& c = chunks[k];
        const std::string where = "chunk " + std::to_string(k);
        if (c.start != expect) throw IntegrityError(where + " starts at " + std::to_string(c.start) + ", expected " + std::to_string(expect));
        if (c.end <= c.start) throw IntegrityError(where + " is empty");
        if (c.length() > max_span) throw IntegrityError(where + " is longer than " + std::to_string(max_span));
        expect = c.end;
    }
    if (expect != n) throw IntegrityError("chunks cover " + std::to_string(expect) + " of " + std::to_string(n) + " tokens");
}

}  // namespace simulst
