#include "simulst/stream_sim.hpp"

#include <algorithm>
#include <cmath>

#include "simulst/aligner.hpp"
#include "simulst/error.hpp"

namespace simulst {

Millis WindowConfig::window_ms() const { return static_cast<Millis>(std::llround(window_s * 1000.0)); }
Millis WindowConfig::stride_ms() const { return static_cast<Millis>(std::llround(stride_s * 1000.0)); }

void WindowConfig::validate() const {
    if (!(stride_s > 0.0) || stride_ms() <= 0) throw ConfigError("stride must be positive");
    if (!(window_s >= stride_s)) throw ConfigError("stride must not exceed the window");
}

AgentView::AgentView(std::span<const SourceWord> words, std::size_t covered, Millis clock_ms, bool source_finished,
                     std::span<const std::string> emitted, Millis window_ms, ContextMode context)
    : words_(words),
      covered_(covered),
      clock_ms_(clock_ms),
      finished_(source_finished),
      emitted_(emitted),
      window_ms_(window_ms),
      context_(context) {}

const SourceWord& AgentView::word(std::size_t i) const {
    if (i >= covered_) {
        throw CausalityError("word " + std::to_string(i) + " is not covered at " + std::to_string(clock_ms_) + " ms");
    }
    const SourceWord& w = words_[i];
    if (context_ == ContextMode::kWindow && w.start_ms < clock_ms_ - window_ms_) {
        throw CausalityError("word " + std::to_string(i) + " has left the " + std::to_string(window_ms_) + " ms window");
    }
    return w;
}

Action Action::write(std::string token, std::optional<std::size_t> frontier) {
    return {ActionKind::kWrite, std::move(token), frontier};
}
Action Action::wait(std::optional<std::size_t> frontier) { return {ActionKind::kWait, {}, frontier}; }
Action Action::eos() { return {ActionKind::kEos, {}, std::nullopt}; }

SimulationTrace run_simulation(const ParsedUtterance& u, Agent& agent, const WindowConfig& cfg) {
    cfg.validate();
    if (!u.fully_timed()) throw ConfigError("utterance \"" + u.id + "\" has untimed tokens");

    std::vector<SourceWord> words;
    words.reserve(u.size());
    for (const auto& t : u.tokens) words.push_back({t.surface, *t.start_ms, *t.end_ms});

    SimulationTrace trace;
    trace.id = u.id;
    trace.source_duration_ms = u.duration_ms();
    trace.source_words = words.size();
    const Millis total = trace.source_duration_ms;
    const Millis stride = cfg.stride_ms();

    agent.begin(words.size());

    std::vector<std::string> emitted;
    std::size_t covered = 0;
    Millis prev = 0;
    for (Millis k = 1;; ++k) {
        const Millis clock = std::min(k * stride, total);
        while (covered < words.size() && words[covered].end_ms <= clock) ++covered;
        const bool finished = clock >= total;
        trace.events.push_back({EventKind::kRead, clock, prev, clock, {}, covered});
        prev = clock;

        const AgentView view(words, covered, clock, finished, emitted, cfg.window_ms(), cfg.context);
        const auto actions = agent.step(view);
        bool ended = false;
        for (const auto& a : actions) {
            if (ended) throw ProtocolError("agent acted after EOS in \"" + u.id + "\"");
            if (a.kind == ActionKind::kEos) {
                if (!finished) {
                    throw ProtocolError("agent emitted EOS at " + std::to_string(clock) + " ms before the source ended");
                }
                trace.events.push_back({EventKind::kEos, clock, 0, 0, {}, covered});
                ended = true;
                continue;
            }
            const std::size_t frontier = a.frontier.value_or(covered);
            if (frontier > covered) {
                throw CausalityError("action conditioned on " + std::to_string(frontier) + " words with only " +
                                     std::to_string(covered) + " covered at " + std::to_string(clock) + " ms");
            }
            if (a.kind == ActionKind::kWait || a.token == kWaitToken) {
                trace.events.push_back({EventKind::kWait, clock, 0, 0, {}, frontier});
                continue;
            }
            trace.events.push_back({EventKind::kWrite, clock, 0, 0, a.token, frontier});
            trace.delays.push_back(clock);
            emitted.push_back(a.token);
        }
        if (ended) break;
        if (finished) throw ProtocolError("agent did not emit EOS once \"" + u.id + "\" was fully read");
    }
    return trace;
}

namespace {

class OracleAgent : public Agent {
public:
    explicit OracleAgent(ChunkAlignedExample ex) : ex_(std::move(ex)) {}

    void begin(std::size_t source_words) override {
        if (source_words != ex_.source_length()) {
            throw ConfigError("supervision for \"" + ex_.id + "\" covers " + std::to_string(ex_.source_length()) +
                              " words, source has " + std::to_string(source_words));
        }
        next_ = 0;
    }

    std::vector<Action> step(const AgentView& view) override {
        std::vector<Action> out;
        while (next_ < ex_.chunks.size() && ex_.chunks[next_].end <= view.covered()) {
            const std::size_t frontier = ex_.chunks[next_].end;
            if (ex_.stream[next_].is_wait()) {
                out.push_back(Action::wait(frontier));
            } else {
                for (auto j : ex_.stream[next_].indices) out.push_back(Action::write(ex_.target_tokens[j], frontier));
            }
            ++next_;
        }
        if (view.source_finished()) out.push_back(Action::eos());
        return out;
    }

private:
    ChunkAlignedExample ex_;
    std::size_t next_ = 0;
};

class WaitKAgent : public Agent {
public:
    WaitKAgent(std::size_t k, std::vector<std::string> translation) : k_(k), translation_(std::move(translation)) {
        if (k_ == 0) throw ConfigError("wait-k needs k >= 1");
    }

    void begin(std::size_t) override { written_ = 0; }

    std::vector<Action> step(const AgentView& view) override {
        std::vector<Action> out;
        while (written_ < translation_.size() && written_ + k_ <= view.covered()) {
            out.push_back(Action::write(translation_[written_], written_ + k_));
            ++written_;
        }
        if (view.source_finished()) {
            for (; written_ < translation_.size(); ++written_) out.push_back(Action::write(translation_[written_]));
            out.push_back(Action::eos());
        }
        return out;
    }

private:
    std::size_t k_;
    std::vector<std::string> translation_;
    std::size_t written_ = 0;
};

class FullWaitAgent : public Agent {
public:
    explicit FullWaitAgent(std::vector<std::string> translation) : translation_(std::move(translation)) {}

    std::vector<Action> step(const AgentView& view) override {
        if (!view.source_finished()) return {};
        std::vector<Action> out;
        for (const auto& t : translation_) out.push_back(Action::write(t));
        out.push_back(Action::eos());
        return out;
    }

private:
    std::vector<std::string> translation_;
};

}  // namespace

std::unique_ptr<Agent> oracle_agent(const ChunkAlignedExample& ex) { return std::make_unique<OracleAgent>(ex); }

std::unique_ptr<Agent> wait_k_agent(std::size_t k, std::vector<std::string> translation) {
    return std::make_unique<WaitKAgent>(k, std::move(translation));
}

std::unique_ptr<Agent> full_wait_agent(std::vector<std::string> translation) {
    return std::make_unique<FullWaitAgent>(std::move(translation));
}

ChunkAlignedExample fixed_length_example(std::size_t span, const ChunkAlignedExample& ex) {
    if (span == 0) throw ConfigError("fixed chunk span must be at least 1");
    const std::size_t n = ex.source_length();
    std::vector<Chunk> chunks;
    for (std::size_t s = 0; s < n; s += span) {
        const std::size_t e = std::min(n, s + span);
        if (e == n) {
            chunks.push_back({s, e, {BoundaryKind::kEndOfUtterance, "end"}});
        } else {
            chunks.push_back({s, e, {BoundaryKind::kMaxSpan, "fixed=" + std::to_string(span)}});
        }
    }
    auto seg = group_segments(chunks, ex.links, ex.target_tokens.size());
    return build_example(ex.id, std::move(chunks), ex.target_tokens, std::move(seg), ex.links);
}

std::unique_ptr<Agent> fixed_length_agent(std::size_t span, const ChunkAlignedExample& ex) {
    return std::make_unique<OracleAgent>(fixed_length_example(span, ex));
}

}  // namespace simulst
