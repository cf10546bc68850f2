#include <chrono>
#include <map>

#include "doctest.h"
#include "simulst/chunker.hpp"
#include "simulst/corpus_io.hpp"
#include "simulst/error.hpp"
#include "test_support.hpp"

using namespace simulst;
using K = BoundaryKind;

namespace {

using CandidateTable = std::map<std::size_t, std::vector<K>>;

CandidateTable table_of(const ParsedUtterance& u) {
    CandidateTable t;
    for (const auto& c : boundary_candidates(u)) {
        for (const auto& r : c.reasons) t[c.position].push_back(r.kind);
    }
    return t;
}

struct Expected {
    CandidateTable candidates;
    std::vector<std::pair<std::size_t, K>> chunks;  // (end, reason)
};

// Hand-derived from the fixture trees.
const std::vector<Expected>& fixture_expectations() {
    static const std::vector<Expected> e = {
        {{{4, {K::kDepTransition, K::kPhraseEdgeNP}}, {9, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{4, K::kDepTransition}, {9, K::kPunctuation}, {10, K::kEndOfUtterance}}},
        {{{1, {K::kDepTransition, K::kPhraseEdgeNP}}, {5, {K::kPhraseEdgeNP}}, {6, {K::kPunctuation, K::kPhraseEdgeNP}}},
         {{1, K::kDepTransition}, {5, K::kPhraseEdgeNP}, {6, K::kPunctuation}, {7, K::kEndOfUtterance}}},
        {{{1, {K::kDepTransition, K::kPhraseEdgeNP}},
          {7, {K::kPhraseEdgeNP, K::kPhraseEdgePP}},
          {10, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{1, K::kDepTransition}, {7, K::kPhraseEdgeNP}, {10, K::kPunctuation}, {11, K::kEndOfUtterance}}},
        {{{2, {K::kDepTransition, K::kPhraseEdgeNP}}, {6, {K::kPhraseEdgeNP}}, {8, {K::kPunctuation, K::kPhraseEdgeNP}}},
         {{2, K::kDepTransition}, {6, K::kPhraseEdgeNP}, {8, K::kPunctuation}, {9, K::kEndOfUtterance}}},
        {{{2, {K::kDepTransition, K::kPhraseEdgeNP}},
          {5, {K::kPhraseEdgePP}},
          {8, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{2, K::kDepTransition}, {5, K::kPhraseEdgePP}, {8, K::kPunctuation}, {9, K::kEndOfUtterance}}},
        {{{1, {K::kPunctuation}},
          {2, {K::kPunctuation}},
          {6, {K::kPhraseEdgeNP}},
          {8, {K::kDepTransition, K::kPhraseEdgeNP}},
          {9, {K::kPunctuation, K::kPhraseEdgeVP}}},
         {{1, K::kPunctuation},
          {2, K::kPunctuation},
          {6, K::kPhraseEdgeNP},
          {8, K::kDepTransition},
          {9, K::kPunctuation},
          {10, K::kEndOfUtterance}}},
        {{{2, {K::kDepTransition, K::kPhraseEdgeNP}},
          {5, {K::kPhraseEdgeNP}},
          {8, {K::kPhraseEdgeNP, K::kPhraseEdgePP}},
          {10, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{2, K::kDepTransition}, {5, K::kPhraseEdgeNP}, {8, K::kPhraseEdgeNP}, {10, K::kPunctuation}, {11, K::kEndOfUtterance}}},
        {{{1, {K::kDepTransition, K::kPhraseEdgeNP}}, {11, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{1, K::kDepTransition}, {8, K::kMaxSpan}, {11, K::kPunctuation}, {12, K::kEndOfUtterance}}},
        {{{1, {K::kDepTransition, K::kPhraseEdgeNP}},
          {6, {K::kPhraseEdgeNP}},
          {8, {K::kDepTransition, K::kPhraseEdgeNP}},
          {10, {K::kPunctuation}}},
         {{1, K::kDepTransition}, {6, K::kPhraseEdgeNP}, {8, K::kDepTransition}, {10, K::kPunctuation}, {11, K::kEndOfUtterance}}},
        {{{6, {K::kPhraseEdgeNP, K::kPhraseEdgePP}}, {12, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{6, K::kPhraseEdgeNP}, {12, K::kPunctuation}, {13, K::kEndOfUtterance}}},
        {{{5, {K::kPhraseEdgeNP, K::kPhraseEdgePP}}, {13, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{5, K::kPhraseEdgeNP}, {12, K::kMaxSpan}, {13, K::kPunctuation}, {14, K::kEndOfUtterance}}},
        {{{3, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}},
          {4, {K::kPunctuation}},
          {6, {K::kDepTransition, K::kPhraseEdgeNP}},
          {11, {K::kPunctuation, K::kPhraseEdgeNP, K::kPhraseEdgePP}}},
         {{3, K::kPunctuation}, {4, K::kPunctuation}, {6, K::kDepTransition}, {11, K::kPunctuation}, {12, K::kEndOfUtterance}}},
    };
    return e;
}

std::size_t forced_cuts(const std::vector<Chunk>& chunks) {
    std::size_t n = 0;
    for (const auto& c : chunks) n += c.reason.kind == K::kMaxSpan;
    return n;
}

std::vector<std::size_t> unforced_edges(const std::vector<Chunk>& chunks) {
    std::vector<std::size_t> out;
    for (const auto& c : chunks) {
        if (c.reason.kind != K::kMaxSpan) out.push_back(c.end);
    }
    return out;
}

}  // namespace

TEST_CASE("boundary candidates on the fixture match the hand-derived table") {
    const auto parses = simulst::testing::fixture_parses();
    const auto& expected = fixture_expectations();
    REQUIRE(parses.size() == expected.size());
    for (std::size_t i = 0; i < parses.size(); ++i) {
        CAPTURE(parses[i].id);
        CHECK(table_of(parses[i]) == expected[i].candidates);
    }
}

TEST_CASE("chunk_utterance on the fixture matches the hand-derived chunks") {
    const auto parses = simulst::testing::fixture_parses();
    const auto& expected = fixture_expectations();
    for (std::size_t i = 0; i < parses.size(); ++i) {
        CAPTURE(parses[i].id);
        const auto chunks = chunk_utterance(parses[i]);
        REQUIRE(chunks.size() == expected[i].chunks.size());
        for (std::size_t k = 0; k < chunks.size(); ++k) {
            CHECK(chunks[k].end == expected[i].chunks[k].first);
            CHECK(chunks[k].reason.kind == expected[i].chunks[k].second);
        }
        CHECK_NOTHROW(validate_tiling(chunks, parses[i].size(), 7));
    }
}

TEST_CASE("reason details name the evidence") {
    const auto parses = simulst::testing::fixture_parses();
    const auto chunks = chunk_utterance(parses[0]);
    CHECK(chunks[0].reason.detail == "nsubj->VERB");
    CHECK(chunks[1].reason.detail == "PUNCT:.");
    const auto cands = boundary_candidates(parses[4]);  // "The museum opens at nine in the morning ."
    CHECK(cands[1].primary().detail == "PP:at..nine");
}

TEST_CASE("phrase_span") {
    const auto parses = simulst::testing::fixture_parses();
    const auto& s1 = parses[0];  // The quick brown fox jumps over the lazy dog .
    CHECK(phrase_span(s1, 3) == std::pair<std::size_t, std::size_t>{0, 3});
    CHECK(phrase_span(s1, 8) == std::pair<std::size_t, std::size_t>{5, 8});
    CHECK(phrase_span(s1, 4) == std::pair<std::size_t, std::size_t>{0, 9});
    CHECK(phrase_span(s1, 1) == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK_THROWS_AS(phrase_span(s1, 10), BoundsError);
}

TEST_CASE("subject subtypes trigger the dependency transition") {
    auto u = parse_conllu(
        "1\tIt\tit\tPRON\t_\t_\t3\tnsubj:pass\t_\t_\n"
        "2\twas\tbe\tAUX\t_\t_\t3\taux:pass\t_\t_\n"
        "3\tbuilt\tbuild\tVERB\t_\t_\t0\troot\t_\t_\n")[0];
    const auto c = boundary_candidates(u);
    REQUIRE_FALSE(c.empty());
    CHECK(c[0].position == 1);
    CHECK(c[0].primary().kind == K::kDepTransition);
}

TEST_CASE("degenerate utterances") {
    ParsedUtterance empty;
    CHECK(chunk_utterance(empty).empty());
    CHECK(boundary_candidates(empty).empty());

    const auto one = simulst::testing::uniform_utterance(1, 100);
    const auto chunks = chunk_utterance(one);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].reason.kind == K::kEndOfUtterance);

    CHECK_THROWS_AS(chunk_utterance(one, {0, true}), ConfigError);
}

TEST_CASE("max_span=1 gives single-token chunks") {
    for (const auto& u : simulst::testing::fixture_parses()) {
        for (const auto& c : chunk_utterance(u, {1, true})) CHECK(c.length() == 1);
    }
}

TEST_CASE("punctuation is always a chunk of its own, so counting it never matters") {
    simulst::testing::Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const auto u = simulst::testing::random_parse(rng, 1, 30);
        const std::size_t cap = 1 + rng() % 7;
        const auto counted = chunk_utterance(u, {cap, true});
        CHECK(chunk_utterance(u, {cap, false}) == counted);
        for (const auto& c : counted) {
            for (std::size_t i = c.start; i < c.end; ++i) {
                if (u.tokens[i].upos == "PUNCT") CHECK(c.length() == 1);
            }
        }
    }
}

TEST_CASE("validate_tiling catches gaps, overlaps, empties and long chunks") {
    CHECK_THROWS_AS(validate_tiling(std::vector<Chunk>{{0, 2, {}}, {3, 4, {}}}, 4, 7), IntegrityError);
    CHECK_THROWS_AS(validate_tiling(std::vector<Chunk>{{0, 2, {}}, {1, 4, {}}}, 4, 7), IntegrityError);
    CHECK_THROWS_AS(validate_tiling(std::vector<Chunk>{{0, 0, {}}, {0, 4, {}}}, 4, 7), IntegrityError);
    CHECK_THROWS_AS(validate_tiling(std::vector<Chunk>{{0, 4, {}}}, 4, 3), IntegrityError);
    CHECK_THROWS_AS(validate_tiling(std::vector<Chunk>{{0, 3, {}}}, 4, 7), IntegrityError);
    CHECK_NOTHROW(validate_tiling(std::vector<Chunk>{}, 0, 7));
}

TEST_CASE("property: chunks tile every random parse within the cap") {
    simulst::testing::Rng rng(1234);
    for (int trial = 0; trial < 500; ++trial) {
        const auto u = simulst::testing::random_parse(rng, 0, 40);
        const std::size_t cap = 1 + rng() % 9;
        const auto chunks = chunk_utterance(u, {cap, true});
        CHECK_NOTHROW(validate_tiling(chunks, u.size(), cap));
        if (!chunks.empty()) CHECK(chunks.back().reason.kind == K::kEndOfUtterance);
        // Every rule-driven cut sits on a candidate.
        const auto cands = boundary_candidates(u);
        for (std::size_t k = 0; k + 1 < chunks.size(); ++k) {
            if (chunks[k].reason.kind == K::kMaxSpan) continue;
            const bool found = std::any_of(cands.begin(), cands.end(),
                                           [&](const auto& c) { return c.position == chunks[k].end; });
            CHECK(found);
        }
    }
}

TEST_CASE("property: lowering the cap only adds forced cuts") {
    simulst::testing::Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto u = simulst::testing::random_parse(rng, 1, 40);
        std::size_t prev_count = 0;
        std::vector<std::size_t> unforced;
        for (std::size_t cap = 40; cap >= 1; --cap) {
            const auto chunks = chunk_utterance(u, {cap, true});
            CHECK(chunks.size() >= prev_count);
            prev_count = chunks.size();
            auto edges = unforced_edges(chunks);
            // Candidates always cut, so the rule-driven boundaries never move.
            if (cap == 40) unforced = edges;
            CHECK(edges == unforced);
            if (cap == 40) CHECK(forced_cuts(chunks) == 0);
        }
    }
}

TEST_CASE("property: candidates lie strictly inside and carry ordered reasons") {
    simulst::testing::Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto u = simulst::testing::random_parse(rng, 0, 30);
        std::size_t last = 0;
        for (const auto& c : boundary_candidates(u)) {
            CHECK(c.position >= 1);
            CHECK(c.position < u.size());
            CHECK(c.position > last);
            last = c.position;
            REQUIRE_FALSE(c.reasons.empty());
            if (c.has(K::kPunctuation)) CHECK(c.primary().kind == K::kPunctuation);
        }
    }
}
