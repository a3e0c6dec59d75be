#include "csam/memory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace csam {

CliqueMemory::CliqueMemory(const NetworkConfig& cfg)
    : cfg_(cfg),
      adjacency_(cfg.total_neurons(), cfg.total_neurons()),
      frequency_(cfg.total_neurons(), 0) {
    for (uint32_t k = 0; k < cfg.total_neurons(); ++k)
        adjacency_.set(k, k);
}

void CliqueMemory::store(const Message& msg) {
    if (!msg.valid_for(cfg_))
        throw std::invalid_argument("message does not fit the network");
    const uint32_t C = cfg_.cluster_count;
    std::vector<uint32_t> nodes(C);
    for (uint32_t c = 0; c < C; ++c)
        nodes[c] = global_index(cfg_, {c, msg.symbols[c]});
    for (uint32_t a = 0; a < C; ++a) {
        ++frequency_[nodes[a]];
        for (uint32_t b = a + 1; b < C; ++b)
            adjacency_.set_symmetric(nodes[a], nodes[b]);
    }
    ++stored_count_;
}

bool CliqueMemory::contains_clique(const Message& msg) const {
    if (!msg.valid_for(cfg_)) return false;
    const uint32_t C = cfg_.cluster_count;
    for (uint32_t a = 0; a < C; ++a) {
        uint32_t ga = global_index(cfg_, {a, msg.symbols[a]});
        for (uint32_t b = a + 1; b < C; ++b) {
            uint32_t gb = global_index(cfg_, {b, msg.symbols[b]});
            if (!adjacency_.test(ga, gb)) return false;
        }
    }
    return true;
}

FootprintBits footprint_bits(const CliqueMemory& mem) {
    uint64_t n = mem.config().total_neurons();
    FootprintBits fp;
    fp.core_bits = n * (n - 1) / 2;
    uint32_t m = mem.stored_count();
    if (m > 0) {
        long double per_neuron = std::log2(static_cast<long double>(m) + 1.0L);
        fp.frequency_overhead_bits =
            static_cast<uint64_t>(std::ceil(static_cast<long double>(n) * per_neuron));
    }
    return fp;
}

void save_snapshot(const CliqueMemory& mem, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open snapshot for writing: " + path);
    const NetworkConfig& cfg = mem.config();
    const uint32_t n = cfg.total_neurons();
    out << "CSAM v1 " << cfg.cluster_count << ' ' << cfg.neurons_per_cluster
        << ' ' << mem.stored_count() << '\n';
    static const char hexdig[] = "0123456789abcdef";
    std::string line;
    for (uint32_t i = 0; i + 1 < n; ++i) {
        line.clear();
        uint8_t byte = 0;
        uint32_t filled = 0;
        for (uint32_t j = i + 1; j < n; ++j) {
            byte = static_cast<uint8_t>(byte << 1 | (mem.edge(i, j) ? 1 : 0));
            if (++filled == 8) {
                line.push_back(hexdig[byte >> 4]);
                line.push_back(hexdig[byte & 0xF]);
                byte = 0;
                filled = 0;
            }
        }
        if (filled) {
            byte = static_cast<uint8_t>(byte << (8 - filled));
            line.push_back(hexdig[byte >> 4]);
            line.push_back(hexdig[byte & 0xF]);
        }
        out << line << '\n';
    }
    for (uint32_t k = 0; k < n; ++k)
        out << mem.frequency()[k] << '\n';
    if (!out)
        throw std::runtime_error("write failed for snapshot: " + path);
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

[[noreturn]] void snapshot_error(const std::string& path, const std::string& what) {
    throw std::runtime_error("snapshot " + path + ": " + what);
}

} // namespace

CliqueMemory load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open snapshot: " + path);
    std::string magic, version;
    uint32_t clusters = 0, neurons = 0;
    uint64_t stored = 0;
    if (!(in >> magic >> version >> clusters >> neurons >> stored) ||
        magic != "CSAM" || version != "v1")
        snapshot_error(path, "bad header");
    if (clusters < 2 || neurons < 2)
        snapshot_error(path, "bad geometry");
    NetworkConfig cfg(clusters, neurons);
    const uint32_t n = cfg.total_neurons();
    CliqueMemory mem(cfg);
    std::string line;
    std::getline(in, line); // header tail
    for (uint32_t i = 0; i + 1 < n; ++i) {
        if (!std::getline(in, line))
            snapshot_error(path, "truncated adjacency");
        uint32_t row_bits = n - 1 - i;
        uint32_t expect_chars = (row_bits + 7) / 8 * 2;
        if (line.size() != expect_chars)
            snapshot_error(path, "bad adjacency row length");
        for (uint32_t j = i + 1; j < n; ++j) {
            uint32_t bit = j - (i + 1);
            int hv = hex_value(line[bit / 4]);
            if (hv < 0)
                snapshot_error(path, "bad hex digit");
            bool on = (hv >> (3 - bit % 4)) & 1;
            if (on) {
                if (j / neurons == i / neurons)
                    snapshot_error(path, "intra-cluster edge");
                mem.adjacency_.set_symmetric(i, j);
            }
        }
        // padding bits past the row must be zero
        uint32_t total_bits = expect_chars * 4;
        for (uint32_t bit = row_bits; bit < total_bits; ++bit) {
            int hv = hex_value(line[bit / 4]);
            if (hv < 0 || ((hv >> (3 - bit % 4)) & 1))
                snapshot_error(path, "nonzero padding");
        }
    }
    for (uint32_t k = 0; k < n; ++k) {
        if (!std::getline(in, line))
            snapshot_error(path, "truncated frequencies");
        try {
            size_t pos = 0;
            unsigned long v = std::stoul(line, &pos);
            if (pos != line.size())
                snapshot_error(path, "bad frequency value");
            mem.frequency_[k] = static_cast<uint32_t>(v);
        } catch (const std::logic_error&) {
            snapshot_error(path, "bad frequency value");
        }
    }
    mem.stored_count_ = static_cast<uint32_t>(stored);
    for (uint32_t c = 0; c < clusters; ++c) {
        uint64_t sum = 0;
        for (uint32_t l = 0; l < neurons; ++l)
            sum += mem.frequency_[c * neurons + l];
        if (sum != stored)
            snapshot_error(path, "frequency sum does not match stored count");
    }
    return mem;
}

} // namespace csam
