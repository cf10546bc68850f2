#include "doctest.h"
#include "simulst/corpus_io.hpp"
#include "simulst/error.hpp"
#include "simulst/metrics.hpp"
#include "simulst/stream_sim.hpp"
#include "test_support.hpp"

using namespace simulst;

namespace {

std::vector<std::string> toks(const std::string& s) { return split_whitespace(s); }

SimulationTrace trace_with(std::vector<Millis> delays, Millis duration) {
    SimulationTrace tr;
    tr.id = "t";
    tr.delays = std::move(delays);
    tr.source_duration_ms = duration;
    return tr;
}

}  // namespace

// ─── Latency ─────────────────────────────────────────────────────────────────

TEST_CASE("lagging by hand") {
    // T = 2000, |Y| = 4: ideal delays 0, 500, 1000, 1500.
    const std::vector<Millis> d = {500, 1000, 1500, 2000};
    const auto r = lagging(d, 2000, 4);
    CHECK(r.tau == 4);
    CHECK(r.gamma == doctest::Approx(4.0 / 2000.0));
    CHECK(r.value_ms == doctest::Approx(500.0));

    // tau stops at the first token written at the end of the source.
    const std::vector<Millis> late = {2000, 2000, 2000};
    const auto full = lagging(late, 2000, 3);
    CHECK(full.tau == 1);
    CHECK(full.value_ms == doctest::Approx(2000.0));

    // Mixed: d = 400, 2000, 2000 with T = 2000, |Y| = 2.
    const std::vector<Millis> mix = {400, 2000, 2000};
    const auto m = lagging(mix, 2000, 2);
    CHECK(m.tau == 2);
    CHECK(m.value_ms == doctest::Approx((400.0 + (2000.0 - 1000.0)) / 2.0));
}

TEST_CASE("AL and LAAL differ only under over-generation") {
    const auto tr = trace_with({300, 600, 900, 1200, 1200, 1200}, 1200);
    const auto al = average_lagging(tr, 3);
    const auto la = laal(tr, 3, 6);
    // AL: gamma = 3/1200, ideal step 400. tau = 4.
    CHECK(al.tau == 4);
    CHECK(al.value_ms == doctest::Approx((300.0 + 200.0 + 100.0 + 0.0) / 4.0));
    // LAAL: ideal step 200.
    CHECK(la.value_ms == doctest::Approx((300.0 + 400.0 + 500.0 + 600.0) / 4.0));
    CHECK(la.value_ms >= al.value_ms);
    CHECK(laal(tr, 6, 3).value_ms == doctest::Approx(la.value_ms));
}

TEST_CASE("full wait gives AL equal to the source duration") {
    for (Millis T : {1, 999, 3315, 123457}) {
        const auto tr = trace_with(std::vector<Millis>(7, T), T);
        CHECK(average_lagging(tr, 7).value_ms == static_cast<double>(T));
        CHECK(average_lagging(tr, 3).value_ms == static_cast<double>(T));
    }
}

TEST_CASE("lagging is undefined for degenerate input") {
    const std::vector<Millis> none;
    const std::vector<Millis> some = {10};
    CHECK_THROWS_AS(lagging(none, 100, 3), UndefinedMetricError);
    CHECK_THROWS_AS(lagging(some, 0, 3), UndefinedMetricError);
    CHECK_THROWS_AS(lagging(some, 100, 0), UndefinedMetricError);
}

TEST_CASE("latency_report bundles the single-trace numbers") {
    const auto tr = trace_with({500, 1000, 1500, 2000}, 2000);
    const auto r = latency_report(tr, 4);
    CHECK(r.al_ms == doctest::Approx(500.0));
    CHECK(r.laal_ms == doctest::Approx(500.0));
    CHECK(r.stream_laal_ms == doctest::Approx(500.0));
    CHECK(r.tau == 4);
}

TEST_CASE("StreamLAAL on one segment equals LAAL") {
    const auto tr = trace_with({300, 600, 900, 1200, 1200, 1200}, 1200);
    const std::vector<SimulationTrace> traces = {tr};
    const std::vector<std::size_t> refs = {3};
    CHECK(stream_laal(traces, refs).value_ms == doctest::Approx(laal(tr, 3, 6).value_ms));
}

TEST_CASE("StreamLAAL assigns on the global clock and weights by reference length") {
    const std::vector<SimulationTrace> traces = {trace_with({1000, 1000}, 1000), trace_with({500, 2000, 2000}, 2000)};
    const std::vector<std::size_t> refs = {2, 3};
    const auto r = stream_laal(traces, refs);
    // Segment 1: [0, 1000], local d = 1000, 1000 -> LAAL 1000.
    // Segment 2: [1000, 3000], local d = 500, 2000, 2000, |Y| = 3, T = 2000:
    //   tau = 2, (500 + (2000 - 666.67)) / 2.
    const double seg2 = (500.0 + (2000.0 - 2000.0 / 3.0)) / 2.0;
    REQUIRE(r.segment_laal_ms.size() == 2);
    CHECK(r.segment_laal_ms[0] == doctest::Approx(1000.0));
    CHECK(r.segment_laal_ms[1] == doctest::Approx(seg2));
    CHECK(r.value_ms == doctest::Approx((2.0 * 1000.0 + 3.0 * seg2) / 5.0));
    CHECK(r.assigned_tokens == std::vector<std::size_t>{2, 3});
    CHECK(r.empty_segments == 0);
}

TEST_CASE("StreamLAAL edge handling") {
    // A delay on a shared edge belongs to the earlier segment.
    const std::vector<StreamSegment> segs = {{0, 1000, 1}, {1000, 2000, 1}};
    const std::vector<Millis> edge = {1000};
    const auto r = stream_laal(edge, segs);
    CHECK(r.assigned_tokens == std::vector<std::size_t>{1, 0});
    CHECK(r.empty_segments == 1);
    CHECK(r.value_ms == doctest::Approx(1000.0));

    const std::vector<Millis> outside = {2500};
    CHECK_THROWS_AS(stream_laal(outside, segs), AssignmentError);
    CHECK_THROWS_AS(stream_laal(std::vector<Millis>{}, segs), UndefinedMetricError);
    CHECK_THROWS_AS(stream_laal(std::vector<SimulationTrace>{}, std::vector<std::size_t>{1}), std::invalid_argument);
}

// ─── BLEU ────────────────────────────────────────────────────────────────────

TEST_CASE("BLEU identity, disjoint and empty") {
    const std::vector<std::vector<std::string>> refs = {toks("the cat is on the mat"), toks("hello")};
    CHECK(bleu(refs, refs).score == doctest::Approx(100.0));
    const std::vector<std::vector<std::string>> disjoint = {toks("a b c d e f"), toks("x")};
    CHECK(bleu(disjoint, refs).score == 0.0);

    // Identity on a two-token sentence: higher orders have no n-grams at all.
    const std::vector<std::vector<std::string>> two = {toks("guten tag")};
    const auto b = bleu(two, two);
    CHECK(b.score == doctest::Approx(100.0));
    CHECK(b.zero_matches[2]);

    const std::vector<std::vector<std::string>> empty_hyp = {{}};
    const std::vector<std::vector<std::string>> one_ref = {toks("x y")};
    const auto e = bleu(empty_hyp, one_ref);
    CHECK(e.score == 0.0);
    CHECK(e.brevity_penalty == 0.0);

    CHECK_THROWS_AS(bleu(std::vector<std::vector<std::string>>{}, std::vector<std::vector<std::string>>{}),
                    UndefinedMetricError);
    CHECK_THROWS_AS(bleu(two, refs), std::invalid_argument);
}

TEST_CASE("BLEU on a hand-computed two-sentence corpus") {
    const std::vector<std::vector<std::string>> refs = {toks("the cat is on the mat"),
                                                        toks("there is a dog in the garden")};
    const std::vector<std::vector<std::string>> hyps = {toks("the cat sat on the mat"), toks("a dog is in the garden")};
    const auto b = bleu(hyps, refs);
    // Matches 11/12, 6/10, 2/8, 0/6 (smoothed to 1/7); c = 12, r = 13.
    CHECK(b.precisions[0] == doctest::Approx(11.0 / 12.0));
    CHECK(b.precisions[1] == doctest::Approx(6.0 / 10.0));
    CHECK(b.precisions[2] == doctest::Approx(2.0 / 8.0));
    CHECK(b.precisions[3] == doctest::Approx(1.0 / 7.0));
    CHECK(b.zero_matches[3]);
    CHECK(b.brevity_penalty == doctest::Approx(std::exp(1.0 - 13.0 / 12.0)));
    CHECK(b.score == doctest::Approx(34.4437126723861).epsilon(1e-9));
}

TEST_CASE("BLEU clips repeated n-grams") {
    const std::vector<std::vector<std::string>> refs = {toks("the cat")};
    const std::vector<std::vector<std::string>> hyps = {toks("the the the the")};
    const auto s = bleu_stats(hyps[0], refs[0]);
    CHECK(s.matches[0] == 1);
    CHECK(s.totals[0] == 4);
}

TEST_CASE("BLEU stats add up") {
    BleuStats a = bleu_stats(toks("a b c"), toks("a b d"));
    const BleuStats b = bleu_stats(toks("x y"), toks("x y"));
    a += b;
    CHECK(a.matches[0] == 4);
    CHECK(a.totals[1] == 3);
    CHECK(a.hyp_len == 5);
}

// ─── Boundary alignment ──────────────────────────────────────────────────────

TEST_CASE("triggers are frontier changes between writes") {
    SimulationTrace tr;
    tr.events = {{EventKind::kRead, 0, 0, 0, "", 2},  {EventKind::kWrite, 0, 0, 0, "a", 2},
                 {EventKind::kWrite, 0, 0, 0, "b", 2}, {EventKind::kWait, 0, 0, 0, "", 4},
                 {EventKind::kWrite, 0, 0, 0, "c", 5}, {EventKind::kWrite, 0, 0, 0, "d", 7}};
    CHECK(translation_triggers(tr) == std::vector<std::size_t>{2, 5, 7});
}

TEST_CASE("boundary alignment rate") {
    const std::vector<std::size_t> gold = {3, 6, 10};
    const std::vector<std::size_t> trig = {3, 5, 8, 10};
    CHECK(boundary_alignment_rate(trig, gold) == doctest::Approx(0.75));
    CHECK(boundary_alignment_rate(trig, gold, 0) == doctest::Approx(0.5));
    CHECK(boundary_alignment_rate(trig, gold, 2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(boundary_alignment_rate(std::vector<std::size_t>{}, gold), UndefinedMetricError);
    CHECK(boundary_alignment_rate(trig, std::vector<std::size_t>{}) == 0.0);
    CHECK(chunk_boundaries(std::vector<Chunk>{{0, 3, {}}, {3, 5, {}}}) == std::vector<std::size_t>{3, 5});
}

TEST_CASE("latency matches an event-log replay on wait-k traces") {
    const auto parses = simulst::testing::fixture_parses();
    const auto bitext = parse_bitext(read_text_file(simulst::testing::data_file("fixture_bitext.tsv")));
    for (std::size_t i = 0; i < parses.size(); ++i) {
        auto agent = wait_k_agent(2, bitext[i].target);
        WindowConfig w;
        w.stride_s = 0.5;
        const auto tr = run_simulation(parses[i], *agent, w);
        const std::vector<SimulationTrace> one = {tr};
        const auto replay = simulst::testing::replay_latency(write_traces(one), bitext[i].target.size());
        const auto rep = latency_report(tr, bitext[i].target.size());
        CHECK(std::abs(rep.al_ms - replay.al_ms) < 1e-6);
        CHECK(std::abs(rep.laal_ms - replay.laal_ms) < 1e-6);
    }
}
