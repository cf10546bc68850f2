#include "simulst/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "json.hpp"
#include "simulst/error.hpp"
#include "simulst/supervision.hpp"

namespace simulst {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    }
    return lines;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t at = text.find(sep, pos);
        parts.push_back(text.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos));
        if (at == std::string_view::npos) break;
        pos = at + 1;
    }
    return parts;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_blank(std::string_view line) {
    return trim(line).empty();
}

json parse_json_line(std::string_view line, std::size_t line_no) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
}

template <typename T>
T require_field(const json& obj, const char* key, std::size_t line_no) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(std::string("missing field \"") + key + "\"", line_no);
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad field \"") + key + "\": " + e.what(), line_no);
    }
}

}  // namespace

// ─── Domain helpers declared in types.hpp ────────────────────────────────────

bool ParsedUtterance::fully_timed() const {
    return std::all_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.timed(); });
}

Millis ParsedUtterance::duration_ms() const {
    Millis end = 0;
    for (const auto& t : tokens) end = std::max(end, t.end_ms.value_or(0));
    return end;
}

std::vector<std::string> ParsedUtterance::surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

std::vector<std::string> SimulationTrace::hypothesis() const {
    std::vector<std::string> out;
    for (const auto& e : events) {
        if (e.kind == EventKind::kWrite) out.push_back(e.token);
    }
    return out;
}

namespace {

constexpr std::pair<BoundaryKind, std::string_view> kBoundaryNames[] = {
    {BoundaryKind::kPunctuation, "PUNCTUATION"},
    {BoundaryKind::kPhraseEdgeNP, "PHRASE_EDGE_NP"},
    {BoundaryKind::kPhraseEdgeVP, "PHRASE_EDGE_VP"},
    {BoundaryKind::kPhraseEdgePP, "PHRASE_EDGE_PP"},
    {BoundaryKind::kDepTransition, "DEP_TRANSITION"},
    {BoundaryKind::kMaxSpan, "MAX_SPAN"},
    {BoundaryKind::kEndOfUtterance, "END_OF_UTTERANCE"},
};

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::kRead, "READ"},
    {EventKind::kWrite, "WRITE"},
    {EventKind::kWait, "WAIT"},
    {EventKind::kEos, "EOS"},
};

}  // namespace

std::string_view to_string(BoundaryKind kind) {
    for (const auto& [k, name] : kBoundaryNames) {
        if (k == kind) return name;
    }
    return "UNKNOWN";
}

BoundaryKind boundary_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kBoundaryNames) {
        if (n == name) return k;
    }
    throw ParseError("unknown boundary reason \"" + std::string(name) + "\"", 0);
}

std::string_view to_string(EventKind kind) {
    for (const auto& [k, name] : kEventNames) {
        if (k == kind) return name;
    }
    return "UNKNOWN";
}

EventKind event_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kEventNames) {
        if (n == name) return k;
    }
    throw ParseError("unknown event kind \"" + std::string(name) + "\"", 0);
}

// ─── CoNLL-U ─────────────────────────────────────────────────────────────────

void validate_utterance(const ParsedUtterance& u) {
    const std::size_t n = u.tokens.size();
    auto fail = [&](const std::string& what) {
        throw StructureError("utterance \"" + u.id + "\": " + what);
    };
    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Token& t = u.tokens[i];
        if (t.index != i) fail("token indices must run 0.." + std::to_string(n - 1) + " without gaps");
        if (!t.head) {
            ++roots;
        } else if (*t.head == i) {
            fail("token " + std::to_string(i) + " is its own head");
        } else if (*t.head >= n) {
            fail("token " + std::to_string(i) + " has out-of-range head " + std::to_string(*t.head + 1));
        }
    }
    if (n > 0 && roots != 1) fail("expected exactly one root, found " + std::to_string(roots));

    // Every head chain must reach the root within n steps.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t at = i;
        std::size_t steps = 0;
        while (u.tokens[at].head) {
            at = *u.tokens[at].head;
            if (++steps > n) fail("head cycle through token " + std::to_string(i));
        }
    }

    std::optional<Millis> last_start;
    for (const Token& t : u.tokens) {
        if (t.start_ms.has_value() != t.end_ms.has_value()) {
            fail("token " + std::to_string(t.index) + " has only one of start_ms/end_ms");
        }
        if (!t.timed()) continue;
        if (*t.start_ms < 0) fail("negative start_ms on token " + std::to_string(t.index));
        if (*t.start_ms > *t.end_ms) fail("start_ms > end_ms on token " + std::to_string(t.index));
        if (last_start && *t.start_ms < *last_start) {
            fail("start_ms decreases at token " + std::to_string(t.index));
        }
        last_start = t.start_ms;
    }
}

std::vector<ParsedUtterance> parse_conllu(std::string_view text) {
    std::vector<ParsedUtterance> out;
    ParsedUtterance current;
    bool open = false;
    std::size_t sentence_no = 0;

    auto flush = [&] {
        if (!open) return;
        ++sentence_no;
        if (current.id.empty()) current.id = std::to_string(sentence_no);
        validate_utterance(current);
        out.push_back(std::move(current));
        current = ParsedUtterance{};
        open = false;
    };

    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        std::string_view line = lines[ln];
        if (is_blank(line)) {
            flush();
            continue;
        }
        if (line.front() == '#') {
            std::string_view body = trim(line.substr(1));
            auto take = [&](std::string_view key) -> std::optional<std::string> {
                if (body.substr(0, key.size()) != key) return std::nullopt;
                std::string_view rest = trim(body.substr(key.size()));
                if (rest.empty() || rest.front() != '=') return std::nullopt;
                return std::string(trim(rest.substr(1)));
            };
            if (auto id = take("sent_id")) {
                current.id = *id;
                open = true;
            } else if (auto t = take("text")) {
                current.text = *t;
                open = true;
            }
            continue;
        }

        auto cols = split_on(line, '\t');
        if (cols.size() != 10) {
            throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()), line_no);
        }
        const std::string_view id_col = cols[0];
        if (id_col.find('-') != std::string_view::npos || id_col.find('.') != std::string_view::npos) {
            open = true;
            continue;  // multiword range or empty node
        }
        std::size_t id = 0;
        if (!parse_int(id_col, id) || id == 0) throw ParseError("bad token id \"" + std::string(id_col) + "\"", line_no);
        std::size_t head = 0;
        if (!parse_int(cols[6], head)) throw ParseError("bad head \"" + std::string(cols[6]) + "\"", line_no);

        Token tok;
        tok.index = id - 1;
        tok.surface = std::string(cols[1]);
        tok.upos = std::string(cols[3]);
        tok.deprel = std::string(cols[7]);
        if (head > 0) tok.head = head - 1;
        if (cols[9] != "_") {
            for (std::string_view item : split_on(cols[9], '|')) {
                auto eq = item.find('=');
                if (eq == std::string_view::npos) continue;
                std::string_view key = item.substr(0, eq);
                std::string_view value = item.substr(eq + 1);
                if (key != "start_ms" && key != "end_ms") continue;
                Millis ms = 0;
                if (!parse_int(value, ms)) {
                    throw ParseError("bad " + std::string(key) + " value \"" + std::string(value) + "\"", line_no);
                }
                (key == "start_ms" ? tok.start_ms : tok.end_ms) = ms;
            }
        }
        current.tokens.push_back(std::move(tok));
        open = true;
    }
    flush();
    return out;
}

std::string write_conllu(std::span<const ParsedUtterance> utterances) {
    std::ostringstream os;
    auto field = [](const std::string& s) -> const std::string& {
        static const std::string underscore = "_";
        return s.empty() ? underscore : s;
    };
    for (const auto& u : utterances) {
        os << "# sent_id = " << u.id << '\n';
        if (u.text) os << "# text = " << *u.text << '\n';
        for (const auto& t : u.tokens) {
            os << t.index + 1 << '\t' << field(t.surface) << "\t_\t" << field(t.upos) << "\t_\t_\t"
               << (t.head ? *t.head + 1 : 0) << '\t' << field(t.deprel) << "\t_\t";
            if (t.timed()) {
                os << "start_ms=" << *t.start_ms << "|end_ms=" << *t.end_ms;
            } else {
                os << '_';
            }
            os << '\n';
        }
        os << '\n';
    }
    return os.str();
}

// ─── Pharaoh ─────────────────────────────────────────────────────────────────

std::vector<AlignmentLink> parse_pharaoh(std::string_view line, std::size_t n_src, std::size_t n_tgt) {
    std::vector<AlignmentLink> links;
    for (const std::string& pair : split_whitespace(line)) {
        const auto dash = pair.find('-');
        std::size_t i = 0;
        std::size_t j = 0;
        if (dash == std::string::npos || !parse_int(std::string_view(pair).substr(0, dash), i) ||
            !parse_int(std::string_view(pair).substr(dash + 1), j)) {
            throw ParseError("malformed alignment pair \"" + pair + "\"", 0);
        }
        if (i >= n_src || j >= n_tgt) {
            throw BoundsError("alignment pair " + pair + " outside a " + std::to_string(n_src) + "x" +
                              std::to_string(n_tgt) + " sentence pair");
        }
        links.push_back({i, j, 1.0});
    }
    std::sort(links.begin(), links.end(), [](const auto& a, const auto& b) {
        return std::tie(a.src, a.tgt) < std::tie(b.src, b.tgt);
    });
    links.erase(std::unique(links.begin(), links.end(),
                            [](const auto& a, const auto& b) { return a.src == b.src && a.tgt == b.tgt; }),
                links.end());
    return links;
}

std::string write_pharaoh(std::span<const AlignmentLink> links) {
    std::string out;
    for (const auto& l : links) {
        if (!out.empty()) out += ' ';
        out += std::to_string(l.src) + '-' + std::to_string(l.tgt);
    }
    return out;
}

// ─── Timestamps ──────────────────────────────────────────────────────────────

TimestampManifest parse_timestamp_manifest(std::string_view text) {
    TimestampManifest manifest;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        if (is_blank(lines[ln])) continue;
        const json obj = parse_json_line(lines[ln], line_no);
        const auto id = require_field<std::string>(obj, "id", line_no);
        const auto words = require_field<json>(obj, "words", line_no);
        if (!words.is_array()) throw ParseError("\"words\" must be an array", line_no);

        std::vector<TimedWord> timed;
        for (const auto& w : words) {
            TimedWord tw{require_field<std::string>(w, "w", line_no), require_field<Millis>(w, "start_ms", line_no),
                         require_field<Millis>(w, "end_ms", line_no)};
            const std::string where = "utterance \"" + id + "\" word " + std::to_string(timed.size());
            if (tw.start_ms < 0) throw ValidationError(where + ": negative start_ms");
            if (tw.start_ms > tw.end_ms) throw ValidationError(where + ": start_ms > end_ms");
            if (!timed.empty()) {
                const auto& prev = timed.back();
                if (tw.start_ms < prev.start_ms) throw ValidationError(where + ": start_ms decreases");
                if (tw.start_ms < prev.end_ms) throw ValidationError(where + ": overlaps the previous word");
            }
            timed.push_back(std::move(tw));
        }
        if (!manifest.emplace(id, std::move(timed)).second) {
            throw DuplicateError("duplicate utterance id \"" + id + "\" at line " + std::to_string(line_no));
        }
    }
    return manifest;
}

std::string nfc_normalize(std::string_view utf8) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
    const auto in = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    const icu::UnicodeString normalized = nfc->normalize(in, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

void attach_timestamps(ParsedUtterance& u, std::span<const TimedWord> words) {
    if (words.size() != u.tokens.size()) {
        throw JoinError("utterance \"" + u.id + "\": " + std::to_string(u.tokens.size()) + " tokens but " +
                        std::to_string(words.size()) + " timed words");
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (nfc_normalize(u.tokens[i].surface) != nfc_normalize(words[i].word)) {
            throw JoinError("utterance \"" + u.id + "\": token " + std::to_string(i) + " \"" + u.tokens[i].surface +
                            "\" does not match timed word \"" + words[i].word + "\"");
        }
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
        u.tokens[i].start_ms = words[i].start_ms;
        u.tokens[i].end_ms = words[i].end_ms;
    }
    validate_utterance(u);
}

ParsedUtterance utterance_from_words(std::string id, std::span<const TimedWord> words) {
    ParsedUtterance u;
    u.id = std::move(id);
    for (std::size_t i = 0; i < words.size(); ++i) {
        Token t;
        t.index = i;
        t.surface = words[i].word;
        t.start_ms = words[i].start_ms;
        t.end_ms = words[i].end_ms;
        u.tokens.push_back(std::move(t));
    }
    return u;
}

// ─── Bitext ──────────────────────────────────────────────────────────────────

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<SentencePair> parse_bitext(std::string_view text) {
    std::vector<SentencePair> pairs;
    std::set<std::string> seen;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (is_blank(lines[ln])) continue;
        auto cols = split_on(lines[ln], '\t');
        if (cols.size() != 3) {
            throw ParseError("bitext lines need 3 tab-separated fields (id, source, target), found " +
                                 std::to_string(cols.size()),
                             ln + 1);
        }
        SentencePair p{std::string(trim(cols[0])), split_whitespace(cols[1]), split_whitespace(cols[2])};
        if (!seen.insert(p.id).second) throw DuplicateError("duplicate bitext id \"" + p.id + "\"");
        pairs.push_back(std::move(p));
    }
    return pairs;
}

// ─── Chunks JSONL ────────────────────────────────────────────────────────────

std::string write_chunks(std::span<const ChunkedUtterance> items) {
    std::string out;
    for (const auto& item : items) {
        json chunks = json::array();
        for (const auto& c : item.chunks) {
            chunks.push_back({{"start", c.start},
                              {"end", c.end},
                              {"reason", std::string(to_string(c.reason.kind))},
                              {"detail", c.reason.detail}});
        }
        out += json{{"id", item.id}, {"chunks", std::move(chunks)}}.dump();
        out += '\n';
    }
    return out;
}

std::vector<ChunkedUtterance> read_chunks(std::string_view text) {
    std::vector<ChunkedUtterance> items;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (is_blank(lines[ln])) continue;
        const json obj = parse_json_line(lines[ln], ln + 1);
        ChunkedUtterance item{require_field<std::string>(obj, "id", ln + 1), {}};
        for (const auto& c : require_field<json>(obj, "chunks", ln + 1)) {
            Chunk chunk;
            chunk.start = require_field<std::size_t>(c, "start", ln + 1);
            chunk.end = require_field<std::size_t>(c, "end", ln + 1);
            chunk.reason.kind = boundary_kind_from_string(require_field<std::string>(c, "reason", ln + 1));
            if (c.contains("detail")) chunk.reason.detail = c.at("detail").get<std::string>();
            item.chunks.push_back(std::move(chunk));
        }
        items.push_back(std::move(item));
    }
    return items;
}

// ─── Supervision JSONL ───────────────────────────────────────────────────────

std::string write_supervision(std::span<const ChunkAlignedExample> examples, bool collapse_waits) {
    std::string out;
    for (const auto& ex : examples) {
        json chunks = json::array();
        for (std::size_t k = 0; k < ex.chunks.size(); ++k) {
            const Chunk& c = ex.chunks[k];
            chunks.push_back({{"src_span", {c.start, c.end}},
                              {"reason", std::string(to_string(c.reason.kind))},
                              {"detail", c.reason.detail},
                              {"indices", ex.stream[k].indices},
                              {"target", unit_tokens(ex, k)}});
        }
        json links = json::array();
        for (const auto& l : ex.links) links.push_back({l.src, l.tgt, l.score});

        const ReorderedTarget rt = reorder_target(ex, ReorderOptions{collapse_waits});
        out += json{{"id", ex.id},
                    {"chunks", std::move(chunks)},
                    {"target_stream", rt.tokens},
                    {"target_tokens", ex.target_tokens},
                    {"links", std::move(links)}}
                   .dump();
        out += '\n';
    }
    return out;
}

std::vector<ChunkAlignedExample> read_supervision(std::string_view text) {
    std::vector<ChunkAlignedExample> examples;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        if (is_blank(lines[ln])) continue;
        const json obj = parse_json_line(lines[ln], line_no);
        auto id = require_field<std::string>(obj, "id", line_no);
        auto target = require_field<std::vector<std::string>>(obj, "target_tokens", line_no);

        std::vector<Chunk> chunks;
        ChunkSegmentation seg;
        std::vector<std::vector<std::string>> unit_text;
        for (const auto& c : require_field<json>(obj, "chunks", line_no)) {
            const auto span = require_field<std::vector<std::size_t>>(c, "src_span", line_no);
            if (span.size() != 2) throw ParseError("src_span must be [start, end]", line_no);
            Chunk chunk{span[0], span[1], {}};
            chunk.reason.kind = boundary_kind_from_string(require_field<std::string>(c, "reason", line_no));
            if (c.contains("detail")) chunk.reason.detail = c.at("detail").get<std::string>();
            chunks.push_back(std::move(chunk));
            seg.segments.push_back(require_field<std::vector<std::size_t>>(c, "indices", line_no));
            unit_text.push_back(require_field<std::vector<std::string>>(c, "target", line_no));
        }
        std::vector<AlignmentLink> links;
        if (obj.contains("links")) {
            for (const auto& l : obj.at("links")) {
                if (!l.is_array() || l.size() < 2) throw ParseError("links entries must be [src, tgt, score]", line_no);
                links.push_back({l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>(),
                                 l.size() > 2 ? l.at(2).get<double>() : 1.0});
            }
        }

        ChunkAlignedExample ex = build_example(id, std::move(chunks), std::move(target), std::move(seg), std::move(links));
        for (std::size_t k = 0; k < ex.chunks.size(); ++k) {
            if (unit_text[k] != unit_tokens(ex, k)) {
                throw IntegrityError("utterance \"" + ex.id + "\": chunk " + std::to_string(k) +
                                     " target does not match its indices");
            }
        }
        const auto stream = require_field<std::vector<std::string>>(obj, "target_stream", line_no);
        if (stream != reorder_target(ex).tokens && stream != reorder_target(ex, {true}).tokens) {
            throw IntegrityError("utterance \"" + ex.id + "\": target_stream disagrees with its chunks");
        }
        examples.push_back(std::move(ex));
    }
    return examples;
}

// ─── Traces JSONL ────────────────────────────────────────────────────────────

std::string write_traces(std::span<const SimulationTrace> traces) {
    std::string out;
    for (const auto& tr : traces) {
        json events = json::array();
        for (const auto& e : tr.events) {
            json payload;
            switch (e.kind) {
                case EventKind::kRead: payload = {e.span_begin_ms, e.span_end_ms}; break;
                case EventKind::kWrite: payload = e.token; break;
                case EventKind::kWait: payload = std::string(kWaitToken); break;
                case EventKind::kEos: payload = nullptr; break;
            }
            events.push_back({{"kind", std::string(to_string(e.kind))},
                              {"time_ms", e.time_ms},
                              {"payload", std::move(payload)},
                              {"frontier", e.frontier}});
        }
        out += json{{"id", tr.id},
                    {"events", std::move(events)},
                    {"delays", tr.delays},
                    {"source_duration_ms", tr.source_duration_ms},
                    {"source_words", tr.source_words}}
                   .dump();
        out += '\n';
    }
    return out;
}

std::vector<SimulationTrace> read_traces(std::string_view text) {
    std::vector<SimulationTrace> traces;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        if (is_blank(lines[ln])) continue;
        const json obj = parse_json_line(lines[ln], line_no);
        SimulationTrace tr;
        tr.id = require_field<std::string>(obj, "id", line_no);
        tr.delays = require_field<std::vector<Millis>>(obj, "delays", line_no);
        tr.source_duration_ms = require_field<Millis>(obj, "source_duration_ms", line_no);
        tr.source_words = obj.value("source_words", std::size_t{0});
        for (const auto& e : require_field<json>(obj, "events", line_no)) {
            StreamEvent ev;
            ev.kind = event_kind_from_string(require_field<std::string>(e, "kind", line_no));
            ev.time_ms = require_field<Millis>(e, "time_ms", line_no);
            ev.frontier = e.value("frontier", std::size_t{0});
            const json& payload = e.contains("payload") ? e.at("payload") : json();
            if (ev.kind == EventKind::kRead) {
                if (!payload.is_array() || payload.size() != 2) throw ParseError("READ payload must be [begin, end]", line_no);
                ev.span_begin_ms = payload.at(0).get<Millis>();
                ev.span_end_ms = payload.at(1).get<Millis>();
            } else if (ev.kind == EventKind::kWrite) {
                if (!payload.is_string()) throw ParseError("WRITE payload must be a token", line_no);
                ev.token = payload.get<std::string>();
            }
            tr.events.push_back(std::move(ev));
        }
        traces.push_back(std::move(tr));
    }
    return traces;
}

// ─── Files ───────────────────────────────────────────────────────────────────

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace simulst
