#include "csam/clique_search.hpp"

#include <algorithm>
#include <set>

namespace csam {

ClusterPartition partition_from_state(const ActivationState& state) {
    const NetworkConfig& cfg = state.config();
    ClusterPartition part;
    part.sets.resize(cfg.cluster_count);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c)
        part.sets[c].cluster = c;
    state.bits().for_each_set([&](uint32_t k) {
        part.sets[k / cfg.neurons_per_cluster].neurons.push_back(k);
    });
    return part;
}

namespace {

struct Searcher {
    const BitMatrix& adj;
    std::span<const uint32_t> freq;
    std::vector<uint32_t> chosen;

    bool expand(std::vector<ClusterPartition::Set> remaining) {
        if (remaining.empty()) return true;
        for (size_t i = 1; i < remaining.size(); ++i)
            if (remaining[i].neurons.empty()) return false;
        auto& cur = remaining.front().neurons;
        std::sort(cur.begin(), cur.end(), [&](uint32_t a, uint32_t b) {
            if (freq[a] != freq[b]) return freq[a] < freq[b];
            return a < b;
        });
        for (uint32_t v : cur) {
            chosen.push_back(v);
            std::vector<ClusterPartition::Set> deeper;
            deeper.reserve(remaining.size() - 1);
            for (size_t i = 1; i < remaining.size(); ++i) {
                ClusterPartition::Set s;
                s.cluster = remaining[i].cluster;
                for (uint32_t u : remaining[i].neurons)
                    if (adj.test(v, u)) s.neurons.push_back(u);
                deeper.push_back(std::move(s));
            }
            std::sort(deeper.begin(), deeper.end(), [](const auto& a, const auto& b) {
                if (a.neurons.size() != b.neurons.size())
                    return a.neurons.size() < b.neurons.size();
                return a.cluster < b.cluster;
            });
            if (expand(std::move(deeper))) return true;
            chosen.pop_back();
        }
        return false;
    }
};

} // namespace

std::optional<Clique> find_clique(const BitMatrix& adjacency,
                                  std::span<const uint32_t> frequency,
                                  const NetworkConfig& cfg,
                                  const ClusterPartition& partition) {
    Searcher searcher{adjacency, frequency, {}};
    if (!searcher.expand(partition.sets)) return std::nullopt;
    Clique clique;
    clique.members.reserve(searcher.chosen.size());
    for (uint32_t k : searcher.chosen)
        clique.members.push_back(neuron_at(cfg, k));
    std::sort(clique.members.begin(), clique.members.end());
    return clique;
}

CliqueList enumerate_probe_cliques(const CliqueMemory& mem, const ActivationState& probe) {
    const NetworkConfig& cfg = mem.config();
    std::vector<uint32_t> active;
    probe.bits().for_each_set([&](uint32_t k) { active.push_back(k); });

    std::vector<std::vector<uint32_t>> grown; // member sets, ascending globals
    std::set<std::vector<uint32_t>> seen;
    for (uint32_t k : active) {
        grown.push_back({k});
        seen.insert(grown.back());
    }
    for (size_t i = 0; i < grown.size(); ++i) {
        for (uint32_t k : active) {
            bool joins = true;
            for (uint32_t member : grown[i]) {
                if (member == k ||
                    member / cfg.neurons_per_cluster == k / cfg.neurons_per_cluster ||
                    !mem.edge(member, k)) {
                    joins = false;
                    break;
                }
            }
            if (!joins) continue;
            std::vector<uint32_t> bigger = grown[i];
            bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), k), k);
            if (seen.insert(bigger).second)
                grown.push_back(std::move(bigger));
        }
    }

    CliqueList out;
    out.reserve(grown.size());
    for (const auto& members : grown) {
        Clique clique;
        clique.members.reserve(members.size());
        for (uint32_t k : members)
            clique.members.push_back(neuron_at(cfg, k));
        out.push_back(std::move(clique));
    }
    return out;
}

CliqueList rank_cliques(CliqueList cliques, const NetworkConfig& cfg,
                        std::span<const uint32_t> frequency) {
    auto freq_sum = [&](const Clique& q) {
        uint64_t sum = 0;
        for (NeuronRef r : q.members)
            sum += frequency[global_index(cfg, r)];
        return sum;
    };
    std::sort(cliques.begin(), cliques.end(), [&](const Clique& a, const Clique& b) {
        if (a.members.size() != b.members.size())
            return a.members.size() > b.members.size();
        uint64_t fa = freq_sum(a), fb = freq_sum(b);
        if (fa != fb) return fa > fb;
        return a.members < b.members;
    });
    return cliques;
}

} // namespace csam
