#include "test_support.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "simulst/corpus_io.hpp"
#include "simulst/supervision.hpp"

namespace simulst::testing {

std::filesystem::path data_dir() { return SIMULST_TEST_DATA_DIR; }

std::filesystem::path data_file(const std::string& name) { return data_dir() / name; }

std::vector<ParsedUtterance> fixture_parses() {
    auto parses = parse_conllu(read_text_file(data_file("fixture.conllu")));
    const auto manifest = parse_timestamp_manifest(read_text_file(data_file("fixture_timestamps.jsonl")));
    for (auto& u : parses) attach_timestamps(u, manifest.at(u.id));
    return parses;
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

ParsedUtterance random_parse(Rng& rng, std::size_t min_len, std::size_t max_len) {
    static const std::vector<std::string> kUpos = {"NOUN", "PROPN", "PRON", "VERB", "AUX", "ADP", "DET",
                                                   "ADJ",  "ADV",   "NUM",  "PUNCT", "CCONJ", "SCONJ", "PART"};
    static const std::vector<std::string> kDeprel = {"nsubj", "obj",  "obl",   "det",       "case", "amod",
                                                     "advmod", "punct", "aux", "nmod:poss", "csubj", "conj",
                                                     "cc",     "mark", "nsubj:pass", "compound", "xcomp", "nmod"};
    ParsedUtterance u;
    u.id = "rand-" + std::to_string(rng() % 1000000);
    const std::size_t n = pick(rng, min_len, max_len);
    if (n == 0) return u;

    // Attach tokens in random order to an already attached token: a tree.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    u.tokens.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Token& t = u.tokens[i];
        t.index = i;
        t.surface = "w" + std::to_string(i);
        t.upos = kUpos[pick(rng, 0, kUpos.size() - 1)];
        t.deprel = kDeprel[pick(rng, 0, kDeprel.size() - 1)];
    }
    u.tokens[order[0]].deprel = "root";
    for (std::size_t k = 1; k < n; ++k) {
        // Prefer nearby heads so phrases look somewhat local.
        const std::size_t attached = order[pick(rng, 0, k - 1)];
        u.tokens[order[k]].head = attached;
    }
    Millis t = static_cast<Millis>(pick(rng, 0, 500));
    for (auto& tok : u.tokens) {
        tok.start_ms = t;
        t += static_cast<Millis>(pick(rng, 0, 600));
        tok.end_ms = t;
        t += static_cast<Millis>(pick(rng, 0, 200));
    }
    return u;
}

std::vector<Chunk> random_chunks(Rng& rng, std::size_t n, std::size_t max_span) {
    std::vector<Chunk> chunks;
    std::size_t s = 0;
    while (s < n) {
        const std::size_t len = pick(rng, 1, std::min(max_span, n - s));
        const bool last = s + len == n;
        chunks.push_back({s, s + len, {last ? BoundaryKind::kEndOfUtterance : BoundaryKind::kPhraseEdgeNP, ""}});
        s += len;
    }
    return chunks;
}

ChunkAlignedExample random_example(Rng& rng) {
    const std::size_t n = pick(rng, 1, 25);
    auto chunks = random_chunks(rng, n, 7);
    const std::size_t m = pick(rng, 0, 30);
    std::vector<std::string> target;
    for (std::size_t j = 0; j < m; ++j) target.push_back("t" + std::to_string(pick(rng, 0, 9)));
    ChunkSegmentation seg;
    seg.segments.resize(chunks.size());
    for (std::size_t j = 0; j < m; ++j) seg.segments[pick(rng, 0, chunks.size() - 1)].push_back(j);
    return build_example("rand", std::move(chunks), std::move(target), std::move(seg));
}

ParsedUtterance uniform_utterance(std::size_t n, Millis ms, const std::string& id) {
    ParsedUtterance u;
    u.id = id;
    for (std::size_t i = 0; i < n; ++i) {
        Token t;
        t.index = i;
        t.surface = "s" + std::to_string(i);
        t.upos = "X";
        t.deprel = i == 0 ? "root" : "dep";
        if (i > 0) t.head = 0;
        t.start_ms = static_cast<Millis>(i) * ms;
        t.end_ms = static_cast<Millis>(i + 1) * ms;
        u.tokens.push_back(t);
    }
    return u;
}

ReplayLatency replay_latency(const std::string& trace_json_line, std::size_t ref_len) {
    const auto j = nlohmann::json::parse(trace_json_line);
    std::vector<double> d;
    double duration = 0.0;
    for (const auto& e : j.at("events")) {
        const std::string kind = e.at("kind").get<std::string>();
        if (kind == "READ") duration = e.at("payload").at(1).get<double>();
        if (kind == "WRITE") d.push_back(e.at("time_ms").get<double>());
    }
    const double hyp_len = static_cast<double>(d.size());

    // Column by column, as one would in a spreadsheet.
    auto column = [&](double length) {
        std::vector<double> ideal(d.size()), excess(d.size());
        std::size_t cutoff = d.size();
        for (std::size_t row = 0; row < d.size(); ++row) {
            ideal[row] = static_cast<double>(row) * (duration / length);
            excess[row] = d[row] - ideal[row];
            if (cutoff == d.size() && d[row] >= duration) cutoff = row + 1;
        }
        double total = 0.0;
        for (std::size_t row = 0; row < cutoff; ++row) total += excess[row];
        return total / static_cast<double>(cutoff);
    };
    return {column(static_cast<double>(ref_len)), column(std::max(static_cast<double>(ref_len), hyp_len))};
}

}  // namespace simulst::testing
