// simulst: command-line front end for chunking, alignment, supervision
// building, streaming simulation and scoring.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simulst/aligner.hpp"
#include "simulst/chunker.hpp"
#include "simulst/corpus_io.hpp"
#include "simulst/error.hpp"
#include "simulst/metrics.hpp"
#include "simulst/pipeline.hpp"
#include "simulst/stream_sim.hpp"
#include "simulst/supervision.hpp"

using namespace simulst;

namespace {

void emit(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-") {
        std::cout << content;
    } else {
        write_text_file(out, content);
    }
}

std::vector<std::string> split_lines_keep_empty(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::vector<AlignmentLink>> read_links(const std::string& path, const std::vector<SentencePair>& bitext) {
    const auto lines = split_lines_keep_empty(read_text_file(path));
    std::vector<std::vector<AlignmentLink>> links;
    for (std::size_t i = 0; i < bitext.size(); ++i) {
        const std::string line = i < lines.size() ? lines[i] : std::string{};
        try {
            links.push_back(parse_pharaoh(line, bitext[i].source.size(), bitext[i].target.size()));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " (" + bitext[i].id + ")", i + 1);
        }
    }
    return links;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Syntax-chunked supervision and streaming simulation for simultaneous speech translation"};
    app.require_subcommand(1);

    // chunk
    auto* chunk = app.add_subcommand("chunk", "Chunk CoNLL-U parses into syntactic spans");
    std::string conllu_path, chunk_out;
    ChunkerOptions chunk_opts;
    bool no_count_punct = false;
    chunk->add_option("--conllu", conllu_path, "CoNLL-U input")->required()->check(CLI::ExistingFile);
    chunk->add_option("--max-span", chunk_opts.max_span, "Maximum chunk length")->check(CLI::PositiveNumber);
    chunk->add_flag("--no-count-punct", no_count_punct, "Do not count PUNCT tokens toward the span limit");
    chunk->add_option("--out", chunk_out, "Chunks JSONL output (default stdout)");

    // align
    auto* align = app.add_subcommand("align", "Word-align a bitext (IBM Model 1) and print Pharaoh lines");
    std::string align_bitext, align_out;
    std::size_t align_iters = 10;
    double align_threshold = 0.1;
    align->add_option("--bitext", align_bitext, "Bitext TSV (id, source, target)")->required()->check(CLI::ExistingFile);
    align->add_option("--iters", align_iters, "EM iterations")->check(CLI::PositiveNumber);
    align->add_option("--threshold", align_threshold, "Minimum link probability")->check(CLI::Range(0.0, 1.0));
    align->add_option("--out", align_out, "Pharaoh output (default stdout)");

    // build
    auto* build = app.add_subcommand("build", "Build chunk-aligned supervision JSONL");
    std::string build_chunks, build_links, build_bitext, build_out;
    bool collapse = false;
    std::size_t build_iters = 10;
    double build_threshold = 0.1;
    build->add_option("--chunks", build_chunks, "Chunks JSONL from `chunk`")->required()->check(CLI::ExistingFile);
    build->add_option("--bitext", build_bitext, "Bitext TSV")->required()->check(CLI::ExistingFile);
    build->add_option("--links", build_links, "Pharaoh links, one line per bitext pair (default: train an aligner)")
        ->check(CLI::ExistingFile);
    build->add_option("--iters", build_iters, "EM iterations when training")->check(CLI::PositiveNumber);
    build->add_option("--threshold", build_threshold, "Minimum link probability when training")->check(CLI::Range(0.0, 1.0));
    build->add_flag("--collapse-waits", collapse, "One <WAIT> per run of empty chunks in target_stream");
    build->add_option("--out", build_out, "Supervision JSONL output (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a streaming policy over timed source words");
    std::string sim_sup, sim_manifest, sim_agent = "oracle", sim_context = "full", sim_out;
    AgentSpec sim_spec;
    WindowConfig sim_window;
    simulate->add_option("--supervision", sim_sup, "Supervision JSONL")->required()->check(CLI::ExistingFile);
    simulate->add_option("--manifest", sim_manifest, "Word timestamp JSONL")->required()->check(CLI::ExistingFile);
    simulate->add_option("--agent", sim_agent, "oracle | wait-k | fixed | full-wait")
        ->check(CLI::IsMember({"oracle", "wait-k", "fixed", "full-wait"}));
    simulate->add_option("--k", sim_spec.k, "k for wait-k")->check(CLI::PositiveNumber);
    simulate->add_option("--span", sim_spec.span, "Chunk span for the fixed agent")->check(CLI::PositiveNumber);
    simulate->add_option("--stride", sim_window.stride_s, "Clock stride in seconds");
    simulate->add_option("--window", sim_window.window_s, "Audio window in seconds");
    simulate->add_option("--context", sim_context, "full | window")->check(CLI::IsMember({"full", "window"}));
    simulate->add_option("--out", sim_out, "Trace JSONL output (default stdout)");

    // score
    auto* score = app.add_subcommand("score", "Score traces: AL, LAAL, StreamLAAL, BLEU, boundary alignment");
    std::string score_traces, score_refs, score_sup, score_report;
    std::size_t tolerance = 1;
    score->add_option("--traces", score_traces, "Trace JSONL")->required()->check(CLI::ExistingFile);
    score->add_option("--refs", score_refs, "Bitext TSV with references")->required()->check(CLI::ExistingFile);
    score->add_option("--supervision", score_sup, "Supervision JSONL (gold chunk boundaries)")->check(CLI::ExistingFile);
    score->add_option("--tolerance", tolerance, "Boundary tolerance in tokens");
    score->add_option("--report", score_report, "JSON report output (default stdout)");

    // run
    auto* run = app.add_subcommand("run", "End-to-end run from a manifest");
    std::string run_manifest;
    run->add_option("--manifest", run_manifest, "Run manifest JSON")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*chunk) {
            chunk_opts.count_punctuation = !no_count_punct;
            std::vector<ChunkedUtterance> items;
            for (const auto& u : parse_conllu(read_text_file(conllu_path))) {
                items.push_back({u.id, chunk_utterance(u, chunk_opts)});
            }
            emit(chunk_out, write_chunks(items));
        } else if (*align) {
            const auto bitext = parse_bitext(read_text_file(align_bitext));
            TrainingOptions topts;
            topts.iterations = align_iters;
            const auto table = train_lexicon(bitext, topts);
            std::string out;
            for (const auto& p : bitext) out += write_pharaoh(align_pair(p.source, p.target, table, align_threshold)) + "\n";
            emit(align_out, out);
        } else if (*build) {
            const auto chunked = read_chunks(read_text_file(build_chunks));
            const auto bitext = parse_bitext(read_text_file(build_bitext));
            std::vector<std::vector<AlignmentLink>> links;
            if (!build_links.empty()) {
                links = read_links(build_links, bitext);
            } else {
                TrainingOptions topts;
                topts.iterations = build_iters;
                const auto table = train_lexicon(bitext, topts);
                for (const auto& p : bitext) links.push_back(align_pair(p.source, p.target, table, build_threshold));
            }
            std::map<std::string, std::size_t> at;
            for (std::size_t i = 0; i < bitext.size(); ++i) at.emplace(bitext[i].id, i);
            std::vector<ChunkAlignedExample> examples;
            std::vector<std::string> missing;
            for (const auto& c : chunked) {
                auto it = at.find(c.id);
                if (it == at.end()) {
                    missing.push_back(c.id);
                    continue;
                }
                const auto& p = bitext[it->second];
                if (!c.chunks.empty() && c.chunks.back().end != p.source.size()) {
                    throw JoinError("\"" + c.id + "\": chunks cover " + std::to_string(c.chunks.back().end) +
                                    " words, bitext source has " + std::to_string(p.source.size()));
                }
                auto seg = group_segments(c.chunks, links[it->second], p.target.size());
                examples.push_back(build_example(c.id, c.chunks, p.target, std::move(seg), links[it->second]));
            }
            if (!missing.empty()) {
                std::string msg = "ids missing from the bitext:";
                for (const auto& id : missing) msg += " " + id;
                throw JoinError(msg);
            }
            emit(build_out, write_supervision(examples, collapse));
        } else if (*simulate) {
            sim_spec.kind = agent_kind_from_string(sim_agent);
            sim_window.context = sim_context == "window" ? ContextMode::kWindow : ContextMode::kFull;
            const auto examples = read_supervision(read_text_file(sim_sup));
            const auto manifest = parse_timestamp_manifest(read_text_file(sim_manifest));
            std::vector<SimulationTrace> traces(examples.size());
            parallel_for(examples.size(), [&](std::size_t i) {
                const auto& ex = examples[i];
                auto it = manifest.find(ex.id);
                if (it == manifest.end()) throw JoinError("\"" + ex.id + "\" has no word timestamps");
                const auto u = utterance_from_words(ex.id, it->second);
                auto agent = make_agent(sim_spec, ex);
                traces[i] = run_simulation(u, *agent, sim_window);
            });
            emit(sim_out, write_traces(traces));
        } else if (*score) {
            const auto traces = read_traces(read_text_file(score_traces));
            const auto refs_bitext = parse_bitext(read_text_file(score_refs));
            std::map<std::string, const SentencePair*> refs;
            for (const auto& p : refs_bitext) refs.emplace(p.id, &p);
            std::map<std::string, ChunkAlignedExample> gold;
            if (!score_sup.empty()) {
                for (auto& ex : read_supervision(read_text_file(score_sup))) gold.emplace(ex.id, std::move(ex));
            }
            EvaluationResult result;
            std::vector<ChunkAlignedExample> examples;
            std::vector<std::size_t> ref_lens;
            std::vector<std::vector<std::string>> hyps, ref_tokens;
            for (const auto& tr : traces) {
                auto it = refs.find(tr.id);
                if (it == refs.end()) throw JoinError("no reference for \"" + tr.id + "\"");
                const auto& ref = it->second->target;
                result.traces.push_back(tr);
                LatencyReport lat;
                if (!tr.delays.empty() && tr.source_duration_ms > 0 && !ref.empty()) lat = latency_report(tr, ref.size());
                result.per_utterance.push_back(lat);
                ref_lens.push_back(ref.size());
                hyps.push_back(tr.hypothesis());
                ref_tokens.push_back(ref);
                auto g = gold.find(tr.id);
                if (g != gold.end()) {
                    result.boundary +=
                        tally_boundary_alignment(translation_triggers(tr), chunk_boundaries(g->second.chunks), tolerance);
                    examples.push_back(g->second);
                }
            }
            if (!traces.empty()) {
                const auto sl = stream_laal(std::span<const SimulationTrace>(result.traces), ref_lens);
                result.stream_laal_ms = sl.value_ms;
                for (std::size_t i = 0; i < sl.segment_laal_ms.size(); ++i) {
                    result.per_utterance[i].stream_laal_ms = sl.segment_laal_ms[i];
                }
                result.bleu = bleu(hyps, ref_tokens);
            }
            if (examples.size() != traces.size()) examples.clear();
            emit(score_report, report_json(result, examples));
        } else if (*run) {
            const auto dir = run_pipeline(RunManifest::load(run_manifest));
            std::cout << dir.string() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
