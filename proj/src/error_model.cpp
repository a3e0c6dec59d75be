#include "csam/error_model.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "csam/rng.hpp"

namespace csam {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        if (comma > start) parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

uint64_t parse_u64(const std::string& text, const char* key) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        require(pos == text.size(), key);
        return v;
    } catch (const std::logic_error&) {
        throw std::invalid_argument(std::string("bad value for ") + key);
    }
}

double parse_double(const std::string& text, const char* key) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        require(pos == text.size(), key);
        return v;
    } catch (const std::logic_error&) {
        throw std::invalid_argument(std::string("bad value for ") + key);
    }
}

std::vector<uint32_t> parse_cluster_list(const std::string& text, const char* key) {
    std::vector<uint32_t> out;
    for (const std::string& part : split_list(text))
        out.push_back(static_cast<uint32_t>(parse_u64(part, key)));
    return out;
}

std::string join_clusters(const std::vector<uint32_t>& clusters) {
    std::string out;
    for (size_t i = 0; i < clusters.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(clusters[i]);
    }
    return out;
}

} // namespace

void ErrorSpec::validate(const NetworkConfig& cfg) const {
    std::vector<bool> seen(cfg.cluster_count, false);
    for (const InsertionSpec& ins : insertions) {
        require(ins.cluster < cfg.cluster_count, "insertion cluster out of range");
        require(!seen[ins.cluster], "duplicate insertion cluster");
        seen[ins.cluster] = true;
        if (!ins.heavy) {
            require(ins.count >= 1, "light insertion count must be positive");
            require(ins.count <= cfg.neurons_per_cluster, "light insertion count exceeds cluster size");
        }
    }
    for (size_t i = 0; i < omissions.size(); ++i) {
        require(omissions[i] < cfg.cluster_count, "omission cluster out of range");
        require(i == 0 || omissions[i] > omissions[i - 1], "omissions must be ascending and unique");
    }
    require(shift.probability >= 0.0 && shift.probability <= 1.0,
            "shift probability outside [0, 1]");
    require(shift.random_count <= cfg.cluster_count, "shift random count exceeds cluster count");
    for (size_t i = 0; i < shift.clusters.size(); ++i) {
        require(shift.clusters[i] < cfg.cluster_count, "shift cluster out of range");
        require(i == 0 || shift.clusters[i] > shift.clusters[i - 1],
                "shift clusters must be ascending and unique");
    }
}

ActivationState inject(const NetworkConfig& cfg, const Message& msg, const ErrorSpec& spec) {
    if (!msg.valid_for(cfg))
        throw std::invalid_argument("message does not fit the network");
    spec.validate(cfg);

    const uint32_t C = cfg.cluster_count;
    const uint32_t L = cfg.neurons_per_cluster;
    SplitMix64 rng(spec.seed);
    std::vector<uint32_t> symbols = msg.symbols;

    std::vector<uint32_t> shifted;
    if (spec.shift.random_count > 0) {
        while (shifted.size() < spec.shift.random_count) {
            uint32_t c = static_cast<uint32_t>(rng.next_below(C));
            if (std::find(shifted.begin(), shifted.end(), c) == shifted.end())
                shifted.push_back(c);
        }
        std::sort(shifted.begin(), shifted.end());
    } else if (spec.shift.all_clusters) {
        shifted.resize(C);
        for (uint32_t c = 0; c < C; ++c) shifted[c] = c;
    } else {
        shifted = spec.shift.clusters;
    }
    for (uint32_t c : shifted) {
        if (rng.next_double() >= spec.shift.probability) continue;
        uint32_t r = static_cast<uint32_t>(rng.next_below(L - 1));
        symbols[c] = r + (r >= symbols[c] ? 1 : 0);
    }

    std::vector<bool> omitted(C, false);
    for (uint32_t c : spec.omissions) omitted[c] = true;

    ActivationState state(cfg);
    for (uint32_t c = 0; c < C; ++c)
        if (!omitted[c])
            state.set(global_index(cfg, {c, symbols[c]}));

    for (const InsertionSpec& ins : spec.insertions) {
        uint32_t base = ins.cluster * L;
        if (ins.heavy) {
            state.bits().set_range(base, L);
            continue;
        }
        bool skip_active = !omitted[ins.cluster];
        uint32_t skip_local = symbols[ins.cluster];
        uint32_t added = 0;
        for (uint32_t l = 0; l < L && added < ins.count; ++l) {
            if (skip_active && l == skip_local) continue;
            state.set(base + l);
            ++added;
        }
    }
    return state;
}

std::pair<PartialMessage, ErasurePattern> erase(const Message& msg,
                                                const ErasurePattern& pattern) {
    for (size_t i = 0; i < pattern.missing_clusters.size(); ++i) {
        require(pattern.missing_clusters[i] < msg.symbols.size(),
                "erasure cluster out of range");
        require(i == 0 || pattern.missing_clusters[i] > pattern.missing_clusters[i - 1],
                "erasure pattern must be ascending and unique");
    }
    PartialMessage partial;
    partial.symbols.assign(msg.symbols.begin(), msg.symbols.end());
    for (uint32_t c : pattern.missing_clusters)
        partial.symbols[c] = std::nullopt;
    return {std::move(partial), pattern};
}

std::vector<std::pair<std::string, std::string>> ErrorSpec::to_keys() const {
    std::vector<std::pair<std::string, std::string>> keys;
    std::string ins;
    for (size_t i = 0; i < insertions.size(); ++i) {
        if (i) ins.push_back(',');
        ins += std::to_string(insertions[i].cluster);
        ins += insertions[i].heavy ? ":heavy" : ":light:" + std::to_string(insertions[i].count);
    }
    keys.emplace_back("error.insertions", ins);
    keys.emplace_back("error.omissions", join_clusters(omissions));
    keys.emplace_back("error.shift.clusters",
                      shift.all_clusters ? "all" : join_clusters(shift.clusters));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", shift.probability);
    keys.emplace_back("error.shift.p", buf);
    keys.emplace_back("error.shift.random", std::to_string(shift.random_count));
    keys.emplace_back("error.seed", std::to_string(seed));
    return keys;
}

ErrorSpec ErrorSpec::from_keys(const std::map<std::string, std::string>& keys) {
    ErrorSpec spec;
    if (auto it = keys.find("error.insertions"); it != keys.end()) {
        for (const std::string& item : split_list(it->second)) {
            size_t c1 = item.find(':');
            require(c1 != std::string::npos, "error.insertions entry needs cluster:mode");
            InsertionSpec ins;
            ins.cluster = static_cast<uint32_t>(parse_u64(item.substr(0, c1), "error.insertions"));
            std::string rest = item.substr(c1 + 1);
            if (rest == "heavy") {
                ins.heavy = true;
            } else if (rest == "light") {
                ins.count = 1;
            } else if (rest.rfind("light:", 0) == 0) {
                ins.count = static_cast<uint32_t>(parse_u64(rest.substr(6), "error.insertions"));
            } else {
                throw std::invalid_argument("error.insertions mode must be light[:count] or heavy");
            }
            spec.insertions.push_back(ins);
        }
    }
    if (auto it = keys.find("error.omissions"); it != keys.end())
        spec.omissions = parse_cluster_list(it->second, "error.omissions");
    if (auto it = keys.find("error.shift.clusters"); it != keys.end()) {
        if (it->second == "all")
            spec.shift.all_clusters = true;
        else
            spec.shift.clusters = parse_cluster_list(it->second, "error.shift.clusters");
    }
    if (auto it = keys.find("error.shift.p"); it != keys.end())
        spec.shift.probability = parse_double(it->second, "error.shift.p");
    if (auto it = keys.find("error.shift.random"); it != keys.end())
        spec.shift.random_count = static_cast<uint32_t>(parse_u64(it->second, "error.shift.random"));
    if (auto it = keys.find("error.seed"); it != keys.end())
        spec.seed = parse_u64(it->second, "error.seed");
    return spec;
}

} // namespace csam
