#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "csam/memory.hpp"
#include "csam/rng.hpp"
#include "oracles.hpp"

using namespace csam;

namespace {

uint32_t off_diagonal_pairs(const CliqueMemory& mem) {
    uint32_t n = mem.config().total_neurons();
    uint32_t pairs = 0;
    for (uint32_t a = 0; a < n; ++a)
        for (uint32_t b = a + 1; b < n; ++b)
            pairs += mem.edge(a, b);
    return pairs;
}

std::vector<Message> random_messages(const NetworkConfig& cfg, size_t count, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Message> out(count);
    for (Message& msg : out) {
        msg.symbols.resize(cfg.cluster_count);
        for (uint32_t c = 0; c < cfg.cluster_count; ++c)
            msg.symbols[c] = static_cast<uint32_t>(rng.next_below(cfg.neurons_per_cluster));
    }
    return out;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("storing one message sets its clique and nothing else") {
    NetworkConfig cfg(5, 4);
    CliqueMemory mem(cfg);
    Message msg{{2, 3, 0, 0, 1}};
    mem.store(msg);

    CHECK(mem.stored_count() == 1);
    CHECK(off_diagonal_pairs(mem) == 10); // one pair per cluster pair
    CHECK(mem.edge(global_index(cfg, {0, 2}), global_index(cfg, {1, 3})));
    CHECK(mem.edge(global_index(cfg, {1, 3}), global_index(cfg, {0, 2})));
    CHECK_FALSE(mem.edge(global_index(cfg, {0, 2}), global_index(cfg, {1, 0})));

    uint32_t ones = 0;
    for (uint32_t k = 0; k < cfg.total_neurons(); ++k) {
        CHECK(mem.edge(k, k)); // diagonal stays set
        if (mem.frequency()[k] == 1) ++ones;
        else CHECK(mem.frequency()[k] == 0);
    }
    CHECK(ones == 5);
    for (uint32_t c = 0; c < 5; ++c)
        CHECK(mem.frequency()[global_index(cfg, {c, msg.symbols[c]})] == 1);

    CHECK(mem.contains_clique(msg));
}

TEST_CASE("duplicate store changes counters only") {
    NetworkConfig cfg(5, 4);
    CliqueMemory mem(cfg);
    Message msg{{2, 3, 0, 0, 1}};
    mem.store(msg);
    BitMatrix before = mem.adjacency();
    mem.store(msg);

    CHECK(mem.adjacency() == before);
    CHECK(mem.stored_count() == 2);
    oracle::DenseMemory dense = oracle::DenseMemory::build(5, 4, {msg, msg});
    for (uint32_t k = 0; k < cfg.total_neurons(); ++k)
        CHECK(mem.frequency()[k] == dense.freq[k]);
}

TEST_CASE("structural invariants hold over random stores") {
    for (auto [C, L, count] : {std::tuple{3u, 3u, 6u}, {5u, 4u, 12u}, {8u, 16u, 60u}}) {
        NetworkConfig cfg(C, L);
        CliqueMemory mem(cfg);
        auto messages = random_messages(cfg, count, C * 1000 + L);
        for (const Message& msg : messages) mem.store(msg);
        oracle::DenseMemory dense = oracle::DenseMemory::build(C, L, messages);

        uint32_t n = cfg.total_neurons();
        for (uint32_t a = 0; a < n; ++a) {
            CHECK(mem.edge(a, a));
            CHECK(mem.frequency()[a] == dense.freq[a]);
            for (uint32_t b = 0; b < n; ++b) {
                if (a == b) continue;
                CHECK(mem.edge(a, b) == dense.edge[a][b]);
                CHECK(mem.edge(a, b) == mem.edge(b, a));
                if (a / L == b / L) CHECK_FALSE(mem.edge(a, b)); // no intra-cluster edges
            }
        }
        for (uint32_t c = 0; c < C; ++c) {
            uint64_t sum = 0;
            for (uint32_t l = 0; l < L; ++l) sum += mem.frequency()[c * L + l];
            CHECK(sum == mem.stored_count());
        }
        for (const Message& msg : messages)
            CHECK(mem.contains_clique(msg));
    }
}

TEST_CASE("contains_clique rejects a message missing an edge") {
    NetworkConfig cfg(5, 4);
    CliqueMemory mem(cfg);
    Message msg{{2, 3, 0, 0, 1}};
    mem.store(msg);
    Message other = msg;
    other.symbols[0] = 1;
    other.symbols[1] = 2; // two fresh neurons, their connecting edge was never stored
    CHECK_FALSE(mem.contains_clique(other));
}

TEST_CASE("store rejects out-of-range symbols") {
    NetworkConfig cfg(3, 3);
    CliqueMemory mem(cfg);
    CHECK_THROWS_AS(mem.store(Message{{0, 3, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(mem.store(Message{{0, 0}}), std::invalid_argument);
    CHECK(mem.stored_count() == 0);
}

TEST_CASE("encode and decode") {
    NetworkConfig cfg(5, 4);
    Message msg{{2, 3, 0, 0, 1}};
    ActivationState state = encode(cfg, msg);
    CHECK(state.active_count() == 5);
    for (uint32_t g : {2u, 7u, 8u, 12u, 17u})
        CHECK(state.test(g));
    CHECK(decode(state) == msg);

    ActivationState empty(cfg);
    CHECK_FALSE(decode(empty).has_value());
    state.set(3); // second neuron in cluster 0
    CHECK_FALSE(decode(state).has_value());
    CHECK_THROWS_AS(encode(cfg, Message{{4, 0, 0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("footprint bits") {
    NetworkConfig small(5, 4);
    CliqueMemory empty(small);
    CHECK(footprint_bits(empty).core_bits == 190);
    CHECK(footprint_bits(empty).frequency_overhead_bits == 0);

    NetworkConfig big(8, 128);
    CliqueMemory one(big);
    one.store(random_messages(big, 1, 1)[0]);
    CHECK(footprint_bits(one).core_bits == 1024ull * 1023 / 2);
    CHECK(footprint_bits(one).frequency_overhead_bits == 1024); // log2(2) = 1 per neuron

    CliqueMemory many(big);
    for (const Message& msg : random_messages(big, 10000, 2))
        many.store(msg);
    long double expect = std::ceil(1024.0L * std::log2(10001.0L));
    CHECK(footprint_bits(many).frequency_overhead_bits == static_cast<uint64_t>(expect));
    CHECK(footprint_bits(many).frequency_overhead_bits == 13607);
}

TEST_CASE("snapshot round trip") {
    NetworkConfig cfg(5, 4);
    CliqueMemory mem(cfg);
    for (const Message& msg : random_messages(cfg, 7, 99))
        mem.store(msg);

    std::string path = temp_path("csam_snapshot_test.snap");
    save_snapshot(mem, path);
    CliqueMemory loaded = load_snapshot(path);

    CHECK(loaded.config() == cfg);
    CHECK(loaded.stored_count() == mem.stored_count());
    CHECK(loaded.adjacency() == mem.adjacency());
    CHECK(loaded.frequency() == mem.frequency());

    // stable writer: saving the loaded memory reproduces the file
    std::string path2 = temp_path("csam_snapshot_test2.snap");
    save_snapshot(loaded, path2);
    std::ifstream f1(path), f2(path2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());

    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("snapshot loader rejects malformed files") {
    std::string path = temp_path("csam_snapshot_bad.snap");
    auto write_file = [&](const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    };

    write_file("WRONG v1 2 2 0\n");
    CHECK_THROWS_AS(load_snapshot(path), std::runtime_error);

    write_file("CSAM v1 2 2 0\n00\n");
    CHECK_THROWS_AS(load_snapshot(path), std::runtime_error); // truncated

    write_file("CSAM v1 2 2 0\nzz\n00\n00\n0\n0\n0\n0\n");
    CHECK_THROWS_AS(load_snapshot(path), std::runtime_error); // bad hex

    // bit for edge (0,1): both in cluster 0
    write_file("CSAM v1 2 2 1\n80\n00\n00\n1\n1\n1\n1\n");
    CHECK_THROWS_AS(load_snapshot(path), std::runtime_error); // intra-cluster edge

    // frequency sum of cluster 0 is 1, cluster 1 is 2, stored_count says 1
    write_file("CSAM v1 2 2 1\n40\n00\n00\n1\n0\n1\n1\n");
    CHECK_THROWS_AS(load_snapshot(path), std::runtime_error);

    // valid minimal file loads: edge (0,2) stored, frequencies consistent
    write_file("CSAM v1 2 2 1\n40\n00\n00\n1\n0\n1\n0\n");
    CliqueMemory ok = load_snapshot(path);
    CHECK(ok.stored_count() == 1);
    CHECK(ok.edge(0, 2));
    CHECK(ok.contains_clique(Message{{0, 0}}));

    std::filesystem::remove(path);
}
