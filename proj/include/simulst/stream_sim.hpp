#pragma once

// Discrete-event simulation of sliding-window streaming inference over timed
// source words. The simulator owns the clock; an agent only ever sees the
// words that are fully inside the audio read so far.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simulst/supervision.hpp"
#include "simulst/types.hpp"

namespace simulst {

enum class ContextMode { kFull, kWindow };

struct WindowConfig {
    double window_s = 8.0;
    double stride_s = 1.0;
    ContextMode context = ContextMode::kFull;

    Millis window_ms() const;
    Millis stride_ms() const;
    // Throws ConfigError unless 0 < stride <= window.
    void validate() const;
};

// Strides swept by the inference-time latency/quality experiment.
inline constexpr double kStandardStrides[] = {0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0};

struct SourceWord {
    std::string surface;
    Millis start_ms = 0;
    Millis end_ms = 0;
};

// What an agent may look at during one step.
class AgentView {
public:
    AgentView(std::span<const SourceWord> words, std::size_t covered, Millis clock_ms,
              bool source_finished, std::span<const std::string> emitted, Millis window_ms,
              ContextMode context);

    Millis clock_ms() const { return clock_ms_; }
    bool source_finished() const { return finished_; }
    // Words fully covered by the audio read so far; they form a prefix.
    std::size_t covered() const { return covered_; }
    // Throws CausalityError for a word that is not covered yet, or (in window
    // mode) one that has slid out of the audio window.
    const SourceWord& word(std::size_t i) const;
    std::span<const std::string> emitted() const { return emitted_; }

private:
    std::span<const SourceWord> words_;
    std::size_t covered_;
    Millis clock_ms_;
    bool finished_;
    std::span<const std::string> emitted_;
    Millis window_ms_;
    ContextMode context_;
};

enum class ActionKind { kWrite, kWait, kEos };

struct Action {
    ActionKind kind = ActionKind::kEos;
    std::string token;
    // Source words this action is conditioned on; defaults to view.covered().
    std::optional<std::size_t> frontier;

    static Action write(std::string token, std::optional<std::size_t> frontier = {});
    static Action wait(std::optional<std::size_t> frontier = {});
    static Action eos();
};

class Agent {
public:
    virtual ~Agent() = default;
    // Called once before the first step. Agents use it to reject a source
    // they were not configured for.
    virtual void begin(std::size_t source_words) { (void)source_words; }
    // Actions to take at this clock step, then yield.
    virtual std::vector<Action> step(const AgentView& view) = 0;
};

// Advances the clock in stride steps (the last step lands exactly on the end
// of the audio) and lets the agent act after every READ. The agent must emit
// EOS at the step where the source is finished.
SimulationTrace run_simulation(const ParsedUtterance& u, Agent& agent, const WindowConfig& cfg);

// Replays gold supervision: chunk k's unit (or one <WAIT>) as soon as its last
// word is covered, then EOS.
std::unique_ptr<Agent> oracle_agent(const ChunkAlignedExample& ex);

// Waits for k words, then one target token per newly covered word; flushes at
// the end of the source.
std::unique_ptr<Agent> wait_k_agent(std::size_t k, std::vector<std::string> translation);

// Everything after the source is finished.
std::unique_ptr<Agent> full_wait_agent(std::vector<std::string> translation);

// Oracle behaviour over fixed `span`-token chunks, with the example's word
// links regrouped against that chunking.
std::unique_ptr<Agent> fixed_length_agent(std::size_t span, const ChunkAlignedExample& ex);

// The fixed-span version of `ex` that fixed_length_agent replays.
ChunkAlignedExample fixed_length_example(std::size_t span, const ChunkAlignedExample& ex);

}  // namespace simulst
