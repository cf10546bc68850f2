#include "simulst/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include <openssl/evp.h>

#include "json.hpp"
#include "simulst/aligner.hpp"
#include "simulst/error.hpp"

namespace simulst {

using nlohmann::json;
namespace fs = std::filesystem;

// ─── Agents ──────────────────────────────────────────────────────────────────

namespace {

constexpr std::pair<AgentKind, std::string_view> kAgentNames[] = {
    {AgentKind::kOracle, "oracle"},
    {AgentKind::kWaitK, "wait-k"},
    {AgentKind::kFixed, "fixed"},
    {AgentKind::kFullWait, "full-wait"},
};

}  // namespace

std::string_view to_string(AgentKind kind) {
    for (const auto& [k, name] : kAgentNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

AgentKind agent_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kAgentNames) {
        if (n == name) return k;
    }
    throw ConfigError("unknown agent \"" + std::string(name) + "\" (oracle, wait-k, fixed, full-wait)");
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const ChunkAlignedExample& ex) {
    switch (spec.kind) {
        case AgentKind::kOracle: return oracle_agent(ex);
        case AgentKind::kWaitK: return wait_k_agent(spec.k, ex.target_tokens);
        case AgentKind::kFixed: return fixed_length_agent(spec.span, ex);
        case AgentKind::kFullWait: return full_wait_agent(ex.target_tokens);
    }
    throw ConfigError("unknown agent kind");
}

// ─── Manifest ────────────────────────────────────────────────────────────────

namespace {

std::string context_name(ContextMode m) { return m == ContextMode::kWindow ? "window" : "full"; }

ContextMode context_from_name(const std::string& s) {
    if (s == "full") return ContextMode::kFull;
    if (s == "window") return ContextMode::kWindow;
    throw ConfigError("context must be \"full\" or \"window\", got \"" + s + "\"");
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

json settings_json(const RunManifest& m) {
    return {
        {"chunker", {{"max_span", m.chunker.max_span}, {"count_punctuation", m.chunker.count_punctuation}}},
        {"aligner", {{"iterations", m.aligner_iterations}, {"threshold", m.aligner_threshold}}},
        {"supervision", {{"collapse_waits", m.collapse_waits}}},
        {"agent", {{"kind", std::string(to_string(m.agent.kind))}, {"k", m.agent.k}, {"span", m.agent.span}}},
        {"window",
         {{"window_s", m.window.window_s}, {"stride_s", m.window.stride_s}, {"context", context_name(m.window.context)}}},
        {"strides", m.strides},
    };
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace

RunManifest RunManifest::from_json_text(std::string_view text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("run manifest is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("run manifest must be a JSON object");
    reject_unknown(j,
                   {"conllu", "bitext", "timestamps", "links", "chunker", "aligner", "supervision", "agent", "window",
                    "strides", "output_dir"},
                   "run manifest");

    auto path = [&](const char* key) { return (base_dir / j.at(key).get<std::string>()).lexically_normal(); };
    RunManifest m;
    try {
        if (!j.contains("conllu") || !j.contains("bitext")) throw ConfigError("run manifest needs \"conllu\" and \"bitext\"");
        m.conllu = path("conllu");
        m.bitext = path("bitext");
        if (j.contains("timestamps")) m.timestamps = path("timestamps");
        if (j.contains("links")) m.links = path("links");
        if (j.contains("output_dir")) m.output_dir = path("output_dir");
        else m.output_dir = (base_dir / m.output_dir).lexically_normal();
        if (j.contains("chunker")) {
            const auto& c = j.at("chunker");
            reject_unknown(c, {"max_span", "count_punctuation"}, "chunker");
            m.chunker.max_span = c.value("max_span", m.chunker.max_span);
            m.chunker.count_punctuation = c.value("count_punctuation", m.chunker.count_punctuation);
        }
        if (j.contains("aligner")) {
            const auto& a = j.at("aligner");
            reject_unknown(a, {"iterations", "threshold"}, "aligner");
            m.aligner_iterations = a.value("iterations", m.aligner_iterations);
            m.aligner_threshold = a.value("threshold", m.aligner_threshold);
        }
        if (j.contains("supervision")) {
            const auto& s = j.at("supervision");
            reject_unknown(s, {"collapse_waits"}, "supervision");
            m.collapse_waits = s.value("collapse_waits", m.collapse_waits);
        }
        if (j.contains("agent")) {
            const auto& a = j.at("agent");
            reject_unknown(a, {"kind", "k", "span"}, "agent");
            if (a.contains("kind")) m.agent.kind = agent_kind_from_string(a.at("kind").get<std::string>());
            m.agent.k = a.value("k", m.agent.k);
            m.agent.span = a.value("span", m.agent.span);
        }
        if (j.contains("window")) {
            const auto& w = j.at("window");
            reject_unknown(w, {"window_s", "stride_s", "context"}, "window");
            m.window.window_s = w.value("window_s", m.window.window_s);
            m.window.stride_s = w.value("stride_s", m.window.stride_s);
            if (w.contains("context")) m.window.context = context_from_name(w.at("context").get<std::string>());
        }
        if (j.contains("strides")) m.strides = j.at("strides").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad run manifest field: ") + e.what());
    }
    return m;
}

RunManifest RunManifest::load(const fs::path& path) {
    return from_json_text(read_text_file(path), path.parent_path());
}

std::string RunManifest::to_json_text() const {
    json j = settings_json(*this);
    j["conllu"] = conllu.string();
    j["bitext"] = bitext.string();
    if (timestamps) j["timestamps"] = timestamps->string();
    if (links) j["links"] = links->string();
    j["output_dir"] = output_dir.string();
    return j.dump(2) + "\n";
}

void RunManifest::validate() const {
    auto must_exist = [](const fs::path& p, const char* what) {
        if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " file not found: " + p.string());
    };
    must_exist(conllu, "conllu");
    must_exist(bitext, "bitext");
    if (timestamps) must_exist(*timestamps, "timestamps");
    if (links) must_exist(*links, "links");
    if (chunker.max_span == 0) throw ConfigError("chunker.max_span must be at least 1");
    if (aligner_iterations == 0) throw ConfigError("aligner.iterations must be at least 1");
    if (!(aligner_threshold >= 0.0 && aligner_threshold <= 1.0)) throw ConfigError("aligner.threshold must lie in [0, 1]");
    if (agent.k == 0) throw ConfigError("agent.k must be at least 1");
    if (agent.span == 0) throw ConfigError("agent.span must be at least 1");
    window.validate();
    for (double s : strides) {
        WindowConfig w = window;
        w.stride_s = s;
        w.validate();
    }
}

std::string RunManifest::content_hash() const {
    std::string blob = "settings\n" + settings_json(*this).dump() + "\n";
    auto add = [&](const char* role, const fs::path& p) {
        const std::string bytes = read_text_file(p);
        blob += std::string(role) + " " + std::to_string(bytes.size()) + "\n" + bytes + "\n";
    };
    add("conllu", conllu);
    add("bitext", bitext);
    if (timestamps) add("timestamps", *timestamps);
    if (links) add("links", *links);
    return sha256_hex(blob);
}

// ─── Stats ───────────────────────────────────────────────────────────────────

double CorpusStats::wait_rate() const {
    return chunks == 0 ? 0.0 : static_cast<double>(empty_segments) / static_cast<double>(chunks);
}

double CorpusStats::alignment_coverage() const {
    return target_tokens == 0 ? 0.0 : static_cast<double>(linked_target_tokens) / static_cast<double>(target_tokens);
}

std::string stats_json(const CorpusStats& s) {
    json hist = json::object();
    for (const auto& [len, count] : s.chunk_length_histogram) hist[std::to_string(len)] = count;
    return json{{"utterances", s.utterances},
                {"chunks", s.chunks},
                {"empty_segments", s.empty_segments},
                {"wait_rate", s.wait_rate()},
                {"chunk_length_histogram", hist},
                {"target_tokens", s.target_tokens},
                {"linked_target_tokens", s.linked_target_tokens},
                {"alignment_coverage", s.alignment_coverage()},
                {"skipped_training_pairs", s.skipped_training_pairs},
                {"failures", s.failures}}
               .dump(2) +
           "\n";
}

// ─── Worker pool ─────────────────────────────────────────────────────────────

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>({n, std::max(1u, std::thread::hardware_concurrency()), std::size_t{8}});
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ─── Build ───────────────────────────────────────────────────────────────────

BuiltCorpus build_corpus(std::vector<ParsedUtterance> parses, std::span<const SentencePair> bitext,
                         const TimestampManifest* timestamps, const std::vector<std::vector<AlignmentLink>>* links,
                         const BuildOptions& options, const std::function<void(const CorpusStats&)>& on_failure) {
    BuiltCorpus corpus;
    CorpusStats& stats = corpus.stats;

    std::map<std::string, std::size_t> bitext_at;
    for (std::size_t i = 0; i < bitext.size(); ++i) bitext_at.emplace(bitext[i].id, i);
    if (links && links->size() != bitext.size()) {
        stats.failures.push_back("links: " + std::to_string(links->size()) + " lines for " +
                                 std::to_string(bitext.size()) + " bitext pairs");
    }

    std::set<std::string> parse_ids;
    for (auto& u : parses) {
        if (!parse_ids.insert(u.id).second) {
            stats.failures.push_back(u.id + ": duplicate parse id");
            continue;
        }
        auto b = bitext_at.find(u.id);
        if (b == bitext_at.end()) {
            stats.failures.push_back(u.id + ": missing from bitext");
            continue;
        }
        const auto& pair = bitext[b->second];
        bool same_source = pair.source.size() == u.size();
        for (std::size_t i = 0; same_source && i < u.size(); ++i) {
            same_source = nfc_normalize(pair.source[i]) == nfc_normalize(u.tokens[i].surface);
        }
        if (!same_source) {
            stats.failures.push_back(u.id + ": bitext source differs from the parse");
            continue;
        }
        if (timestamps) {
            auto t = timestamps->find(u.id);
            if (t == timestamps->end()) {
                stats.failures.push_back(u.id + ": missing from timestamp manifest");
                continue;
            }
            try {
                attach_timestamps(u, t->second);
            } catch (const Error& e) {
                stats.failures.push_back(e.what());
            }
        }
    }
    for (const auto& p : bitext) {
        if (!parse_ids.count(p.id)) stats.failures.push_back(p.id + ": missing from parses");
    }
    if (timestamps) {
        for (const auto& [id, words] : *timestamps) {
            if (!parse_ids.count(id)) stats.failures.push_back(id + ": timestamps without a parse");
        }
    }
    if (!stats.failures.empty()) {
        stats.utterances = parses.size();
        if (on_failure) on_failure(stats);
        std::string msg = "corpus join failed:";
        for (const auto& f : stats.failures) msg += "\n  " + f;
        throw JoinError(msg);
    }

    std::optional<LexiconTable> table;
    if (!links && !bitext.empty()) {
        TrainingOptions topts;
        topts.iterations = options.aligner_iterations;
        table = train_lexicon(bitext, topts);
        stats.skipped_training_pairs = table->skipped_pairs();
    }

    const std::size_t n = parses.size();
    corpus.examples.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const ParsedUtterance& u = parses[i];
        const std::size_t b = bitext_at.at(u.id);
        const SentencePair& pair = bitext[b];
        std::vector<AlignmentLink> l =
            links ? (*links)[b] : align_pair(pair.source, pair.target, *table, options.aligner_threshold);
        auto chunks = chunk_utterance(u, options.chunker);
        auto seg = group_segments(chunks, l, pair.target.size());
        corpus.examples[i] = build_example(u.id, std::move(chunks), pair.target, std::move(seg), std::move(l));
    });

    stats.utterances = n;
    for (const auto& ex : corpus.examples) {
        stats.chunks += ex.chunks.size();
        stats.empty_segments += empty_segment_count(ex);
        for (const auto& c : ex.chunks) ++stats.chunk_length_histogram[c.length()];
        stats.target_tokens += ex.target_tokens.size();
        std::set<std::size_t> linked;
        for (const auto& l : ex.links) linked.insert(l.tgt);
        stats.linked_target_tokens += linked.size();
    }
    corpus.utterances = std::move(parses);
    return corpus;
}

BuiltCorpus build_corpus(const RunManifest& manifest, const std::function<void(const CorpusStats&)>& on_failure) {
    manifest.validate();
    auto parses = parse_conllu(read_text_file(manifest.conllu));
    const auto bitext = parse_bitext(read_text_file(manifest.bitext));

    std::optional<TimestampManifest> ts;
    if (manifest.timestamps) ts = parse_timestamp_manifest(read_text_file(*manifest.timestamps));

    std::optional<std::vector<std::vector<AlignmentLink>>> links;
    if (manifest.links) {
        links.emplace();
        const std::string text = read_text_file(*manifest.links);
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos < text.size() || line_no < bitext.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view line = pos < text.size()
                                        ? std::string_view(text).substr(pos, nl == std::string::npos ? std::string::npos : nl - pos)
                                        : std::string_view{};
            if (line_no >= bitext.size()) {
                if (!split_whitespace(line).empty()) {
                    throw JoinError("links file has more lines than the bitext (" + std::to_string(bitext.size()) + ")");
                }
            } else {
                const auto& p = bitext[line_no];
                try {
                    links->push_back(parse_pharaoh(line, p.source.size(), p.target.size()));
                } catch (const ParseError& e) {
                    throw ParseError(std::string(e.what()) + " (" + p.id + ")", line_no + 1);
                }
            }
            ++line_no;
            if (nl == std::string::npos) break;
            pos = nl + 1;
        }
        while (links->size() < bitext.size()) links->emplace_back();
    }

    BuildOptions opts{manifest.chunker, manifest.aligner_iterations, manifest.aligner_threshold};
    return build_corpus(std::move(parses), bitext, ts ? &*ts : nullptr, links ? &*links : nullptr, opts, on_failure);
}

// ─── Evaluate ────────────────────────────────────────────────────────────────

EvaluationResult evaluate(const BuiltCorpus& corpus, const AgentSpec& agent, const WindowConfig& window) {
    window.validate();
    EvaluationResult r;
    const std::size_t n = corpus.examples.size();
    if (corpus.utterances.size() != n) throw IntegrityError("corpus utterances and examples differ in count");
    for (const auto& u : corpus.utterances) {
        if (!u.fully_timed()) throw ConfigError("utterance \"" + u.id + "\" has no word timestamps");
    }
    r.traces.resize(n);
    r.per_utterance.resize(n);
    std::vector<BoundaryTally> tallies(n);
    parallel_for(n, [&](std::size_t i) {
        const auto& ex = corpus.examples[i];
        auto a = make_agent(agent, ex);
        r.traces[i] = run_simulation(corpus.utterances[i], *a, window);
        if (!r.traces[i].delays.empty() && r.traces[i].source_duration_ms > 0 && !ex.target_tokens.empty()) {
            r.per_utterance[i] = latency_report(r.traces[i], ex.target_tokens.size());
        }
        tallies[i] = tally_boundary_alignment(translation_triggers(r.traces[i]), chunk_boundaries(ex.chunks));
    });
    if (n == 0) return r;

    std::vector<std::size_t> ref_lens;
    std::vector<std::vector<std::string>> hyps;
    std::vector<std::vector<std::string>> refs;
    for (std::size_t i = 0; i < n; ++i) {
        ref_lens.push_back(corpus.examples[i].target_tokens.size());
        hyps.push_back(r.traces[i].hypothesis());
        refs.push_back(corpus.examples[i].target_tokens);
        r.boundary += tallies[i];
    }
    const auto sl = stream_laal(std::span<const SimulationTrace>(r.traces), ref_lens);
    r.stream_laal_ms = sl.value_ms;
    for (std::size_t i = 0; i < n; ++i) r.per_utterance[i].stream_laal_ms = sl.segment_laal_ms[i];
    r.bleu = bleu(hyps, refs);
    return r;
}

namespace {

double mean_al(const EvaluationResult& r) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        if (r.per_utterance[i].tau == 0) continue;
        sum += r.per_utterance[i].al_ms;
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double mean_laal(const EvaluationResult& r) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        if (r.per_utterance[i].tau == 0) continue;
        sum += r.per_utterance[i].laal_ms;
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

json bleu_json(const BleuScore& b) {
    return {{"score", b.score},
            {"precisions", b.precisions},
            {"brevity_penalty", b.brevity_penalty},
            {"zero_matches", b.zero_matches},
            {"hyp_len", b.hyp_len},
            {"ref_len", b.ref_len}};
}

json boundary_json(const BoundaryTally& t) {
    return {{"aligned", t.aligned},
            {"triggers", t.triggers},
            {"rate", t.triggers == 0 ? json(nullptr) : json(t.rate())}};
}

}  // namespace

std::vector<SweepRow> sweep_stride(const BuiltCorpus& corpus, const AgentSpec& agent, const WindowConfig& base,
                                   std::span<const double> strides) {
    std::vector<double> sorted(strides.begin(), strides.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<SweepRow> rows;
    for (double s : sorted) {
        WindowConfig cfg = base;
        cfg.stride_s = s;
        if (cfg.window_s < s) cfg.window_s = s;
        const auto r = evaluate(corpus, agent, cfg);
        rows.push_back({s, r.stream_laal_ms, r.bleu.score, mean_al(r),
                        r.boundary.triggers == 0 ? 0.0 : r.boundary.rate()});
    }
    return rows;
}

std::string report_json(const EvaluationResult& result, std::span<const ChunkAlignedExample> examples) {
    json utts = json::array();
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
        const auto& tr = result.traces[i];
        const auto& lat = result.per_utterance[i];
        const std::vector<std::string> hyp = tr.hypothesis();
        json u = {{"id", tr.id}, {"hyp_len", hyp.size()}};
        if (i < examples.size()) {
            const auto& ex = examples[i];
            u["ref_len"] = ex.target_tokens.size();
            u["bleu"] = bleu_from_stats(bleu_stats(hyp, ex.target_tokens)).score;
            u["boundary"] = boundary_json(
                tally_boundary_alignment(translation_triggers(tr), chunk_boundaries(ex.chunks)));
        }
        if (lat.tau > 0) {
            u["al_ms"] = lat.al_ms;
            u["laal_ms"] = lat.laal_ms;
            u["stream_laal_ms"] = lat.stream_laal_ms;
            u["tau"] = lat.tau;
            u["gamma"] = lat.gamma;
        }
        utts.push_back(std::move(u));
    }
    json corpus = {{"utterances", result.traces.size()},
                   {"stream_laal_ms", result.stream_laal_ms},
                   {"mean_al_ms", mean_al(result)},
                   {"mean_laal_ms", mean_laal(result)},
                   {"bleu", bleu_json(result.bleu)},
                   {"boundary_alignment", boundary_json(result.boundary)}};
    return json{{"corpus", corpus}, {"utterances", utts}}.dump(2) + "\n";
}

std::string sweep_json(std::span<const SweepRow> rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"stride_s", r.stride_s},
                       {"stream_laal_ms", r.stream_laal_ms},
                       {"bleu", r.bleu},
                       {"mean_al_ms", r.mean_al_ms},
                       {"boundary_alignment", r.boundary_alignment}});
    }
    return out.dump(2) + "\n";
}

// ─── Run ─────────────────────────────────────────────────────────────────────

fs::path run_pipeline(const RunManifest& manifest) {
    manifest.validate();
    const std::string hash = manifest.content_hash();
    const fs::path dir = manifest.output_dir / hash.substr(0, 16);
    fs::create_directories(dir);

    json recorded = json::parse(manifest.to_json_text());
    recorded["content_hash"] = hash;
    write_text_file(dir / "manifest.json", recorded.dump(2) + "\n");

    BuiltCorpus corpus = build_corpus(manifest, [&](const CorpusStats& s) { write_text_file(dir / "stats.json", stats_json(s)); });
    write_text_file(dir / "supervision.jsonl", write_supervision(corpus.examples, manifest.collapse_waits));
    write_text_file(dir / "stats.json", stats_json(corpus.stats));

    std::vector<ChunkedUtterance> chunked;
    for (const auto& ex : corpus.examples) chunked.push_back({ex.id, ex.chunks});
    write_text_file(dir / "chunks.jsonl", write_chunks(chunked));

    const auto result = evaluate(corpus, manifest.agent, manifest.window);
    write_text_file(dir / "traces.jsonl", write_traces(result.traces));
    write_text_file(dir / "report.json", report_json(result, corpus.examples));

    if (!manifest.strides.empty()) {
        const auto rows = sweep_stride(corpus, manifest.agent, manifest.window, manifest.strides);
        write_text_file(dir / "sweep.json", sweep_json(rows));
    }
    return dir;
}

}  // namespace simulst
