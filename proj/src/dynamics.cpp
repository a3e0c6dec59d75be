#include "csam/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace csam {

bool ErasurePattern::contains(uint32_t c) const {
    return std::binary_search(missing_clusters.begin(), missing_clusters.end(), c);
}

void ErasurePattern::validate(const NetworkConfig& cfg) const {
    for (size_t i = 0; i < missing_clusters.size(); ++i) {
        if (missing_clusters[i] >= cfg.cluster_count)
            throw std::invalid_argument("erasure pattern names a cluster out of range");
        if (i > 0 && missing_clusters[i] <= missing_clusters[i - 1])
            throw std::invalid_argument("erasure pattern must be sorted and unique");
    }
}

ScoreVector individual_scores(const CliqueMemory& mem, const ActivationState& state) {
    const uint32_t n = mem.config().total_neurons();
    ScoreVector scores(n);
    auto sw = state.bits().words();
    for (uint32_t k = 0; k < n; ++k)
        scores[k] = static_cast<int32_t>(bits::count_and(mem.row(k), sw));
    return scores;
}

// number of clusters holding an active neuron adjacent to the target
int32_t clusterwise_score(const CliqueMemory& mem, const ActivationState& state, uint32_t neuron) {
    const NetworkConfig& cfg = mem.config();
    auto rw = mem.row(neuron);
    auto sw = state.bits().words();
    int32_t score = 0;
    for (uint32_t c = 0; c < cfg.cluster_count; ++c)
        if (bits::any_and_in_range(rw, sw, c * cfg.neurons_per_cluster, cfg.neurons_per_cluster))
            ++score;
    return score;
}

ScoreVector clusterwise_scores(const CliqueMemory& mem, const ActivationState& state) {
    const NetworkConfig& cfg = mem.config();
    const uint32_t n = cfg.total_neurons();
    ScoreVector scores(n);
    if (cfg.neurons_per_cluster % bits::word_bits == 0) {
        // cluster slices fall on word boundaries: test each slice branch-free
        const uint32_t wpc = cfg.neurons_per_cluster / bits::word_bits;
        auto sw = state.bits().words();
        for (uint32_t k = 0; k < n; ++k) {
            auto rw = mem.row(k);
            int32_t score = 0;
            for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
                uint64_t hit = 0;
                const uint32_t base = c * wpc;
                for (uint32_t w = 0; w < wpc; ++w)
                    hit |= rw[base + w] & sw[base + w];
                score += hit != 0;
            }
            scores[k] = score;
        }
        return scores;
    }
    for (uint32_t k = 0; k < n; ++k)
        scores[k] = clusterwise_score(mem, state, k);
    return scores;
}

ActivationState cluster_winners(const NetworkConfig& cfg, const ScoreVector& scores) {
    ActivationState next(cfg);
    const uint32_t L = cfg.neurons_per_cluster;
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        uint32_t base = c * L;
        int32_t best = scores[base];
        for (uint32_t l = 1; l < L; ++l)
            best = std::max(best, scores[base + l]);
        for (uint32_t l = 0; l < L; ++l)
            if (scores[base + l] == best)
                next.set(base + l);
    }
    return next;
}

StepResult sum_of_sum_step(const CliqueMemory& mem, const ActivationState& state) {
    StepResult r;
    r.scores = individual_scores(mem, state);
    r.next = cluster_winners(mem.config(), r.scores);
    return r;
}

StepResult sum_of_max_step(const CliqueMemory& mem, const ActivationState& state) {
    const NetworkConfig& cfg = mem.config();
    StepResult r;
    r.scores = clusterwise_scores(mem, state);
    r.next = ActivationState(cfg);
    const int32_t full = static_cast<int32_t>(cfg.cluster_count);
    for (uint32_t k = 0; k < cfg.total_neurons(); ++k)
        if (state.test(k) && r.scores[k] == full)
            r.next.set(k);
    return r;
}

ActivationState init_erasure(const NetworkConfig& cfg, const Message& msg,
                             const ErasurePattern& pattern, Dynamics scheme) {
    if (!msg.valid_for(cfg))
        throw std::invalid_argument("message does not fit the network");
    pattern.validate(cfg);
    ActivationState state(cfg);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        if (pattern.contains(c)) {
            if (scheme == Dynamics::SumOfSum)
                state.bits().set_range(c * cfg.neurons_per_cluster, cfg.neurons_per_cluster);
        } else {
            state.set(global_index(cfg, {c, msg.symbols[c]}));
        }
    }
    return state;
}

FixedPointResult run_until_fixed(const CliqueMemory& mem, ActivationState state,
                                 const RetrievalParams& params, Dynamics dynamics) {
    FixedPointResult r;
    r.state = std::move(state);
    while (r.iterations < params.max_iterations) {
        ++r.iterations;
        StepResult step = dynamics == Dynamics::SumOfSum ? sum_of_sum_step(mem, r.state)
                                                         : sum_of_max_step(mem, r.state);
        if (step.next == r.state) {
            r.converged = true;
            break;
        }
        r.state = std::move(step.next);
    }
    return r;
}

JointResult joint_with_stats(const CliqueMemory& mem, const ActivationState& probe,
                             const ErasurePattern& pattern) {
    const NetworkConfig& cfg = mem.config();
    pattern.validate(cfg);
    JointResult r;
    r.state = probe;
    if (pattern.missing_clusters.empty()) return r;

    const uint32_t L = cfg.neurons_per_cluster;
    const int32_t want =
        static_cast<int32_t>(cfg.cluster_count - pattern.missing_clusters.size());

    ScoreVector seed_scores = individual_scores(mem, probe);
    for (uint32_t p : pattern.missing_clusters) {
        uint32_t base = p * L;
        for (uint32_t l = 0; l < L; ++l) {
            if (seed_scores[base + l] == want)
                r.state.set(base + l);
            else
                r.state.reset(base + l);
        }
    }

    // clusterwise elimination restricted to the missing clusters
    const int32_t full = static_cast<int32_t>(cfg.cluster_count);
    for (;;) {
        ++r.iterations;
        ActivationState next = r.state;
        bool changed = false;
        for (uint32_t p : pattern.missing_clusters) {
            uint32_t base = p * L;
            for (uint32_t l = 0; l < L; ++l) {
                uint32_t k = base + l;
                if (!r.state.test(k)) continue;
                if (clusterwise_score(mem, r.state, k) != full) {
                    next.reset(k);
                    changed = true;
                }
            }
        }
        r.state = std::move(next);
        if (!changed) break;
    }
    return r;
}

ActivationState joint(const CliqueMemory& mem, const ActivationState& probe,
                      const ErasurePattern& pattern) {
    return joint_with_stats(mem, probe, pattern).state;
}

} // namespace csam
