#include "simulst/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "simulst/error.hpp"

namespace simulst {

// ─── Latency ─────────────────────────────────────────────────────────────────

LaggingResult lagging(std::span<const Millis> delays, Millis source_duration_ms, std::size_t length) {
    if (delays.empty()) throw UndefinedMetricError("lagging is undefined without written tokens");
    if (source_duration_ms <= 0) throw UndefinedMetricError("lagging is undefined for a zero-duration source");
    if (length == 0) throw UndefinedMetricError("lagging is undefined for a zero-length reference");

    LaggingResult r;
    const double T = static_cast<double>(source_duration_ms);
    r.gamma = static_cast<double>(length) / T;
    r.tau = delays.size();
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] >= source_duration_ms) {
            r.tau = i + 1;
            break;
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < r.tau; ++i) {
        sum += static_cast<double>(delays[i]) - static_cast<double>(i) * T / static_cast<double>(length);
    }
    r.value_ms = sum / static_cast<double>(r.tau);
    return r;
}

LaggingResult average_lagging(const SimulationTrace& trace, std::size_t ref_len) {
    return lagging(trace.delays, trace.source_duration_ms, ref_len);
}

LaggingResult laal(const SimulationTrace& trace, std::size_t ref_len, std::size_t hyp_len) {
    return lagging(trace.delays, trace.source_duration_ms, std::max(ref_len, hyp_len));
}

LatencyReport latency_report(const SimulationTrace& trace, std::size_t ref_len) {
    const auto al = average_lagging(trace, ref_len);
    const auto la = laal(trace, ref_len, trace.delays.size());
    return {al.value_ms, la.value_ms, la.value_ms, al.tau, al.gamma};
}

StreamLaalResult stream_laal(std::span<const Millis> global_delays, std::span<const StreamSegment> segments) {
    StreamLaalResult r;
    std::vector<std::vector<Millis>> local(segments.size());
    std::size_t seg = 0;
    for (const Millis d : global_delays) {
        // Delays are non-decreasing, so the search only moves forward.
        std::size_t k = seg;
        while (k < segments.size() && d > segments[k].end_ms) ++k;
        if (k == segments.size() || d < segments[k].start_ms) {
            // Fall back to a full scan for out-of-order input.
            k = segments.size();
            for (std::size_t s = 0; s < segments.size(); ++s) {
                if (d >= segments[s].start_ms && d <= segments[s].end_ms) {
                    k = s;
                    break;
                }
            }
            if (k == segments.size()) {
                throw AssignmentError("delay " + std::to_string(d) + " ms falls outside every reference segment");
            }
        }
        seg = k;
        local[k].push_back(d - segments[k].start_ms);
    }

    double weighted = 0.0;
    double weight = 0.0;
    r.segment_laal_ms.assign(segments.size(), 0.0);
    r.assigned_tokens.assign(segments.size(), 0);
    for (std::size_t k = 0; k < segments.size(); ++k) {
        r.assigned_tokens[k] = local[k].size();
        if (local[k].empty()) {
            ++r.empty_segments;
            continue;
        }
        const auto& s = segments[k];
        const auto la = lagging(local[k], s.end_ms - s.start_ms, std::max(s.ref_len, local[k].size()));
        r.segment_laal_ms[k] = la.value_ms;
        weighted += la.value_ms * static_cast<double>(s.ref_len);
        weight += static_cast<double>(s.ref_len);
    }
    if (weight <= 0.0) throw UndefinedMetricError("StreamLAAL is undefined: no segment received tokens");
    r.value_ms = weighted / weight;
    return r;
}

StreamLaalResult stream_laal(std::span<const SimulationTrace> traces, std::span<const std::size_t> ref_lens) {
    if (traces.size() != ref_lens.size()) throw std::invalid_argument("one reference length per trace is required");
    std::vector<Millis> global;
    std::vector<StreamSegment> segments;
    Millis offset = 0;
    for (std::size_t k = 0; k < traces.size(); ++k) {
        for (const Millis d : traces[k].delays) global.push_back(offset + d);
        segments.push_back({offset, offset + traces[k].source_duration_ms, ref_lens[k]});
        offset += traces[k].source_duration_ms;
    }
    return stream_laal(global, segments);
}

// ─── BLEU ────────────────────────────────────────────────────────────────────

BleuStats& BleuStats::operator+=(const BleuStats& other) {
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        matches[n] += other.matches[n];
        totals[n] += other.totals[n];
    }
    hyp_len += other.hyp_len;
    ref_len += other.ref_len;
    return *this;
}

namespace {

std::unordered_map<std::string, std::size_t> ngram_counts(std::span<const std::string> words, std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    if (words.size() < n) return counts;
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
        std::string key = words[i];
        for (std::size_t j = 1; j < n; ++j) {
            key += '\x1f';
            key += words[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

BleuStats bleu_stats(std::span<const std::string> hyp, std::span<const std::string> ref) {
    BleuStats s;
    s.hyp_len = hyp.size();
    s.ref_len = ref.size();
    for (std::size_t n = 1; n <= kBleuOrder; ++n) {
        const auto h = ngram_counts(hyp, n);
        const auto r = ngram_counts(ref, n);
        for (const auto& [gram, count] : h) {
            auto it = r.find(gram);
            if (it != r.end()) s.matches[n - 1] += std::min(count, it->second);
        }
        s.totals[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    }
    return s;
}

BleuScore bleu_from_stats(const BleuStats& stats) {
    BleuScore b;
    b.hyp_len = stats.hyp_len;
    b.ref_len = stats.ref_len;
    if (stats.hyp_len == 0) {
        b.brevity_penalty = 0.0;
        b.zero_matches.fill(true);
        return b;
    }
    double log_sum = 0.0;
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        const double m = static_cast<double>(stats.matches[n]);
        const double t = static_cast<double>(stats.totals[n]);
        if (stats.matches[n] == 0) {
            b.zero_matches[n] = true;
            b.precisions[n] = n == 0 ? 0.0 : 1.0 / (t + 1.0);
        } else {
            b.precisions[n] = m / t;
        }
        if (b.precisions[n] > 0.0) log_sum += std::log(b.precisions[n]);
    }
    const double c = static_cast<double>(stats.hyp_len);
    const double r = static_cast<double>(stats.ref_len);
    b.brevity_penalty = c < r ? std::exp(1.0 - r / c) : 1.0;
    if (b.precisions[0] > 0.0) {
        b.score = 100.0 * b.brevity_penalty * std::exp(log_sum / static_cast<double>(kBleuOrder));
    }
    return b;
}

BleuScore bleu(std::span<const std::vector<std::string>> hyps, std::span<const std::vector<std::string>> refs) {
    if (hyps.size() != refs.size()) throw std::invalid_argument("BLEU needs one reference per hypothesis");
    if (hyps.empty()) throw UndefinedMetricError("BLEU is undefined for an empty corpus");
    BleuStats total;
    for (std::size_t i = 0; i < hyps.size(); ++i) total += bleu_stats(hyps[i], refs[i]);
    return bleu_from_stats(total);
}

// ─── Boundary alignment ──────────────────────────────────────────────────────

std::vector<std::size_t> translation_triggers(const SimulationTrace& trace) {
    std::vector<std::size_t> out;
    std::optional<std::size_t> last;
    for (const auto& e : trace.events) {
        if (e.kind != EventKind::kWrite) continue;
        if (!last || *last != e.frontier) out.push_back(e.frontier);
        last = e.frontier;
    }
    return out;
}

std::vector<std::size_t> chunk_boundaries(std::span<const Chunk> chunks) {
    std::vector<std::size_t> out;
    for (const auto& c : chunks) out.push_back(c.end);
    return out;
}

BoundaryTally& BoundaryTally::operator+=(const BoundaryTally& other) {
    aligned += other.aligned;
    triggers += other.triggers;
    return *this;
}

double BoundaryTally::rate() const {
    if (triggers == 0) throw UndefinedMetricError("boundary alignment is undefined without triggers");
    return static_cast<double>(aligned) / static_cast<double>(triggers);
}

BoundaryTally tally_boundary_alignment(std::span<const std::size_t> triggers, std::span<const std::size_t> gold_boundaries,
                                       std::size_t tolerance) {
    BoundaryTally t;
    t.triggers = triggers.size();
    for (const auto x : triggers) {
        const bool hit = std::any_of(gold_boundaries.begin(), gold_boundaries.end(), [&](std::size_t b) {
            return (x > b ? x - b : b - x) <= tolerance;
        });
        if (hit) ++t.aligned;
    }
    return t;
}

double boundary_alignment_rate(std::span<const std::size_t> triggers, std::span<const std::size_t> gold_boundaries,
                               std::size_t tolerance) {
    return tally_boundary_alignment(triggers, gold_boundaries, tolerance).rate();
}

}  // namespace simulst
