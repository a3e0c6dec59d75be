#include "csam/retrieval.hpp"

#include <algorithm>
#include <stdexcept>

namespace csam {

const char* algorithm_tag(Algorithm a) {
    switch (a) {
        case Algorithm::Direct: return "direct";
        case Algorithm::DirectPlus: return "direct-plus";
        case Algorithm::Construct: return "construct";
        case Algorithm::Delegate: return "delegate";
        case Algorithm::CutAndPaste: return "cut-and-paste";
        case Algorithm::Erasure: return "erasure";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_tag(std::string_view tag) {
    for (Algorithm a : {Algorithm::Direct, Algorithm::DirectPlus, Algorithm::Construct,
                        Algorithm::Delegate, Algorithm::CutAndPaste, Algorithm::Erasure})
        if (tag == algorithm_tag(a)) return a;
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

Clique clique_of_message(const NetworkConfig& cfg, const Message& msg) {
    Clique q;
    q.members.reserve(cfg.cluster_count);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c)
        q.members.push_back({c, msg.symbols[c]});
    return q;
}

bool cluster_slice_equal(const ActivationState& a, const ActivationState& b, uint32_t c) {
    uint32_t L = a.config().neurons_per_cluster;
    for (uint32_t l = 0; l < L; ++l)
        if (a.test(c * L + l) != b.test(c * L + l)) return false;
    return true;
}

ScoreVector scores_by_rule(const CliqueMemory& mem, const ActivationState& state,
                           ScoringRule rule) {
    return rule == ScoringRule::Individual ? individual_scores(mem, state)
                                           : clusterwise_scores(mem, state);
}

// Shared tail of delegate and erasure retrieval: after joint completion,
// clusters of the pattern that did not settle on a single neuron go through
// clique search; the winners overwrite their clusters, then the whole state
// must decode.
void complete_after_joint(const CliqueMemory& mem, ActivationState state,
                          const ErasurePattern& pattern, RetrievalOutcome& out) {
    const NetworkConfig& cfg = mem.config();
    ClusterPartition reduced;
    for (uint32_t p : pattern.missing_clusters) {
        if (state.cluster_active_count(p) == 1) continue;
        ClusterPartition::Set set;
        set.cluster = p;
        uint32_t base = p * cfg.neurons_per_cluster;
        for (uint32_t l = 0; l < cfg.neurons_per_cluster; ++l)
            if (state.test(base + l)) set.neurons.push_back(base + l);
        reduced.sets.push_back(std::move(set));
    }
    auto found = find_clique(mem, reduced);
    if (!found) return;
    for (const auto& set : reduced.sets)
        state.clear_cluster(set.cluster);
    for (NeuronRef r : found->members)
        state.set(global_index(cfg, r));
    auto msg = decode(state);
    if (!msg) return;
    out.clique = clique_of_message(cfg, *msg);
    out.message = std::move(msg);
}

} // namespace

RetrievalOutcome retrieve_direct(const CliqueMemory& mem, const ActivationState& probe,
                                 const RetrievalParams& params) {
    auto t0 = Clock::now();
    RetrievalOutcome out;
    out.algorithm = Algorithm::Direct;
    FixedPointResult fixed = run_until_fixed(mem, probe, params, Dynamics::SumOfSum);
    out.iterations = fixed.iterations;
    out.converged = fixed.converged;
    if (auto msg = decode(fixed.state)) {
        out.clique = clique_of_message(mem.config(), *msg);
        out.message = std::move(msg);
    }
    out.elapsed = Clock::now() - t0;
    return out;
}

RetrievalOutcome retrieve_direct_plus(const CliqueMemory& mem, const ActivationState& probe) {
    auto t0 = Clock::now();
    RetrievalOutcome out;
    out.algorithm = Algorithm::DirectPlus;
    const NetworkConfig& cfg = mem.config();

    ActivationState state = probe;
    const uint32_t cap = cfg.total_neurons();
    for (;;) {
        ++out.iterations;
        ActivationState next = cluster_winners(cfg, clusterwise_scores(mem, state));
        if (next == state) {
            out.converged = true;
            break;
        }
        state = std::move(next);
        if (out.iterations >= cap) {
            out.converged = false;
            break;
        }
    }

    if (auto found = find_clique(mem, partition_from_state(state))) {
        if (auto msg = message_from(*found, cfg)) {
            out.clique = std::move(found);
            out.message = std::move(msg);
        }
    }
    out.elapsed = Clock::now() - t0;
    return out;
}

RetrievalOutcome retrieve_construct(const CliqueMemory& mem, const ActivationState& probe,
                                    const ConstructOptions& options) {
    auto t0 = Clock::now();
    RetrievalOutcome out;
    out.algorithm = Algorithm::Construct;
    const NetworkConfig& cfg = mem.config();
    const uint32_t n = cfg.total_neurons();
    const int32_t full = static_cast<int32_t>(cfg.cluster_count);

    ActivationState state = probe;
    BitMatrix active_adj(n, n); // adjacency restricted to the active set
    ScoreVector scores(n, 0);
    std::vector<uint32_t> fresh; // activated since the last round
    state.bits().for_each_set([&](uint32_t k) { fresh.push_back(k); });

    auto restrict_row = [&](uint32_t k) {
        auto dst = active_adj.row(k);
        auto src = mem.row(k);
        auto act = state.bits().words();
        for (size_t w = 0; w < dst.size(); ++w)
            dst[w] = src[w] & act[w];
    };

    for (;;) {
        ++out.iterations;

        if (options.incremental_adjacency) {
            for (uint32_t a : fresh) {
                restrict_row(a);
                BitVec row_active(n);
                auto rw = row_active.words();
                auto src = active_adj.row(a);
                for (size_t w = 0; w < rw.size(); ++w) rw[w] = src[w];
                row_active.for_each_set([&](uint32_t u) { active_adj.set(u, a); });
            }
        } else {
            active_adj.clear();
            state.bits().for_each_set([&](uint32_t k) { restrict_row(k); });
        }
        fresh.clear();

        if (options.incremental_scores) {
            for (uint32_t k = 0; k < n; ++k)
                if (scores[k] < full)
                    scores[k] = clusterwise_score(mem, state, k);
        } else {
            scores = clusterwise_scores(mem, state);
        }

        ClusterPartition candidates;
        candidates.sets.resize(cfg.cluster_count);
        for (uint32_t c = 0; c < cfg.cluster_count; ++c)
            candidates.sets[c].cluster = c;
        for (uint32_t k = 0; k < n; ++k)
            if (scores[k] == full)
                candidates.sets[k / cfg.neurons_per_cluster].neurons.push_back(k);

        if (auto found = find_clique(active_adj, mem.frequency(), cfg, candidates)) {
            if (auto msg = message_from(*found, cfg)) {
                out.clique = std::move(found);
                out.message = std::move(msg);
                break;
            }
        }

        // subjoin every inactive neuron whose score reaches the running
        // maximum of the scan; the first inactive neuron seeds the maximum
        bool any_inactive = false;
        int32_t running_max = 0;
        for (uint32_t k = 0; k < n; ++k) {
            if (state.test(k)) continue;
            if (!any_inactive || scores[k] >= running_max) {
                any_inactive = true;
                running_max = scores[k];
                state.set(k);
                fresh.push_back(k);
            }
        }
        if (!any_inactive) break; // nothing left to add: no clique exists
    }
    out.elapsed = Clock::now() - t0;
    return out;
}

RetrievalOutcome retrieve_delegate(const CliqueMemory& mem, const ActivationState& probe,
                                   ScoringRule first_pass) {
    auto t0 = Clock::now();
    RetrievalOutcome out;
    out.algorithm = Algorithm::Delegate;
    const NetworkConfig& cfg = mem.config();

    ActivationState winners = cluster_winners(cfg, scores_by_rule(mem, probe, first_pass));
    ActivationState state = probe;
    ErasurePattern pattern;
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        if (cluster_slice_equal(winners, probe, c)) continue;
        state.clear_cluster(c);
        pattern.missing_clusters.push_back(c);
    }

    JointResult completed = joint_with_stats(mem, state, pattern);
    out.iterations = 1 + completed.iterations;
    complete_after_joint(mem, std::move(completed.state), pattern, out);
    out.elapsed = Clock::now() - t0;
    return out;
}

RetrievalOutcome retrieve_cut_and_paste(const CliqueMemory& mem, const ActivationState& probe,
                                        ScoringRule paste_scoring) {
    auto t0 = Clock::now();
    RetrievalOutcome out;
    out.algorithm = Algorithm::CutAndPaste;
    const NetworkConfig& cfg = mem.config();
    const uint32_t L = cfg.neurons_per_cluster;

    CliqueList ranked =
        rank_cliques(enumerate_probe_cliques(mem, probe), cfg, mem.frequency());

    for (const Clique& fragment : ranked) {
        ++out.iterations;
        ActivationState state(cfg);
        std::vector<bool> covered(cfg.cluster_count, false);
        for (NeuronRef r : fragment.members) {
            state.set(global_index(cfg, r));
            covered[r.cluster] = true;
        }
        std::vector<uint32_t> missing;
        for (uint32_t c = 0; c < cfg.cluster_count; ++c)
            if (!covered[c]) missing.push_back(c);

        if (paste_scoring == ScoringRule::Individual && !fragment.members.empty()) {
            // Only the candidate is active, so a neuron reaches the exact
            // threshold C - |missing| iff it is adjacent to every candidate
            // member: the seed set is the intersection of the candidate rows.
            BitVec adjacent(cfg.total_neurons());
            auto words = adjacent.words();
            bool first = true;
            for (NeuronRef r : fragment.members) {
                auto row = mem.row(global_index(cfg, r));
                if (first) {
                    std::copy(row.begin(), row.end(), words.begin());
                    first = false;
                } else {
                    for (size_t w = 0; w < words.size(); ++w) words[w] &= row[w];
                }
            }
            for (uint32_t p : missing) {
                uint32_t base = p * L;
                for (uint32_t l = 0; l < L; ++l)
                    if (adjacent.test(base + l)) state.set(base + l);
            }
        } else {
            ScoreVector scores = scores_by_rule(mem, state, paste_scoring);
            const int32_t want = static_cast<int32_t>(cfg.cluster_count - missing.size());
            for (uint32_t p : missing) {
                uint32_t base = p * L;
                for (uint32_t l = 0; l < L; ++l)
                    if (scores[base + l] == want) state.set(base + l);
            }
        }

        if (auto found = find_clique(mem, partition_from_state(state))) {
            if (auto msg = message_from(*found, cfg)) {
                out.clique = std::move(found);
                out.message = std::move(msg);
                break;
            }
        }
    }
    out.elapsed = Clock::now() - t0;
    return out;
}

RetrievalOutcome retrieve_erasure(const CliqueMemory& mem, const PartialMessage& partial) {
    auto t0 = Clock::now();
    RetrievalOutcome out;
    out.algorithm = Algorithm::Erasure;
    const NetworkConfig& cfg = mem.config();
    if (partial.symbols.size() != cfg.cluster_count)
        throw std::invalid_argument("partial message does not fit the network");

    ActivationState state(cfg);
    ErasurePattern pattern;
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        if (partial.symbols[c]) {
            if (*partial.symbols[c] >= cfg.neurons_per_cluster)
                throw std::invalid_argument("partial message symbol out of range");
            state.set(global_index(cfg, {c, *partial.symbols[c]}));
        } else {
            pattern.missing_clusters.push_back(c);
        }
    }

    JointResult completed = joint_with_stats(mem, state, pattern);
    out.iterations = completed.iterations;
    complete_after_joint(mem, std::move(completed.state), pattern, out);
    out.elapsed = Clock::now() - t0;
    return out;
}

RetrievalOutcome retrieve(const CliqueMemory& mem, const ActivationState& probe,
                          Algorithm algorithm, const RetrievalParams& params) {
    switch (algorithm) {
        case Algorithm::Direct: return retrieve_direct(mem, probe, params);
        case Algorithm::DirectPlus: return retrieve_direct_plus(mem, probe);
        case Algorithm::Construct: return retrieve_construct(mem, probe);
        case Algorithm::Delegate: return retrieve_delegate(mem, probe);
        case Algorithm::CutAndPaste: return retrieve_cut_and_paste(mem, probe);
        case Algorithm::Erasure: break;
    }
    throw std::invalid_argument("algorithm is not probe-dispatchable");
}

} // namespace csam
