// Release gate: runs every acceptance criterion and prints one verdict line
// each. Exits nonzero when any criterion fails. `--criterion N` runs a
// single criterion; criteria that reuse another criterion's sweep rerun it
// on demand.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "csam/bench.hpp"
#include "csam/dynamics.hpp"
#include "csam/error_model.hpp"
#include "csam/retrieval.hpp"
#include "csam/rng.hpp"
#include "csam/usps.hpp"
#include "oracles.hpp"

using namespace csam;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    int id;
    std::string name;
    bool pass = false;
    bool skipped = false;
    double seconds = 0.0;
    std::string detail;

    Verdict(int criterion, std::string label) : id(criterion), name(std::move(label)) {}
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string rate(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

std::vector<uint8_t> to_dense(const ActivationState& state) {
    std::vector<uint8_t> out(state.config().total_neurons(), 0);
    for (uint32_t k = 0; k < out.size(); ++k) out[k] = state.test(k) ? 1 : 0;
    return out;
}

std::vector<Message> random_messages(const NetworkConfig& cfg, size_t count, uint64_t seed) {
    return generate_messages(cfg, count, seed);
}

// ---- criterion 1: small-instance oracle equivalence ----

Verdict criterion_oracle() {
    Verdict v{1, "small-instance oracle equivalence"};
    auto t0 = Clock::now();
    NetworkConfig cfg(3, 3);
    uint64_t mismatches = 0;

    for (uint32_t c = 0; c < 100; ++c) {
        uint64_t seed = derive_stream(101, c);
        auto messages = random_messages(cfg, c % 5, seed);
        CliqueMemory mem(cfg);
        for (const Message& msg : messages) mem.store(msg);
        oracle::DenseMemory dense = oracle::DenseMemory::build(3, 3, messages);

        for (uint32_t mask = 0; mask < 512; ++mask) {
            ActivationState state(cfg);
            std::vector<uint8_t> dense_state(9, 0);
            for (uint32_t k = 0; k < 9; ++k)
                if (mask >> k & 1) {
                    state.set(k);
                    dense_state[k] = 1;
                }

            StepResult sos = sum_of_sum_step(mem, state);
            auto want_scores = oracle::individual_scores(dense, dense_state);
            if (sos.scores != want_scores) ++mismatches;
            if (to_dense(sos.next) != oracle::winner_take_all(dense, want_scores)) ++mismatches;

            StepResult som = sum_of_max_step(mem, state);
            if (som.scores != oracle::clusterwise_scores(dense, dense_state)) ++mismatches;
            if (to_dense(som.next) != oracle::clusterwise_survivors(dense, dense_state))
                ++mismatches;

            std::vector<std::vector<uint32_t>> got;
            for (const Clique& q : enumerate_probe_cliques(mem, state)) {
                std::vector<uint32_t> members;
                for (NeuronRef r : q.members) members.push_back(global_index(cfg, r));
                got.push_back(std::move(members));
            }
            std::sort(got.begin(), got.end());
            if (got != oracle::power_set_cliques(dense, dense_state)) ++mismatches;
        }
    }

    v.seconds = seconds_since(t0);
    v.pass = mismatches == 0 && v.seconds < 60.0;
    v.detail = std::to_string(mismatches) + " mismatches over 100 cases x 512 states";
    return v;
}

// ---- criterion 2: monotonicity and termination ----

Verdict criterion_monotonic() {
    Verdict v{2, "sum-of-max monotonicity and termination"};
    auto t0 = Clock::now();
    NetworkConfig cfg(8, 32);
    const uint32_t n = cfg.total_neurons();
    uint64_t pairs = 0, violations = 0;

    for (uint32_t m = 0; m < 100; ++m) {
        SplitMix64 mem_rng(derive_stream(202, m));
        size_t count = 1 + mem_rng.next_below(120);
        CliqueMemory mem(cfg);
        for (const Message& msg : random_messages(cfg, count, mem_rng.next())) mem.store(msg);

        for (uint32_t p = 0; p < 100; ++p) {
            ++pairs;
            double density = mem_rng.next_double();
            ActivationState state(cfg);
            for (uint32_t k = 0; k < n; ++k)
                if (mem_rng.next_double() < density) state.set(k);

            uint32_t steps = 0;
            for (;;) {
                StepResult step = sum_of_max_step(mem, state);
                if (!step.next.bits().is_subset_of(state.bits())) {
                    ++violations;
                    break;
                }
                if (step.next == state) break;
                state = std::move(step.next);
                if (++steps > n) {
                    ++violations;
                    break;
                }
            }
        }
    }

    v.seconds = seconds_since(t0);
    v.pass = violations == 0;
    v.detail = std::to_string(violations) + " violations over " + std::to_string(pairs) +
               " fuzzed pairs";
    return v;
}

// ---- criterion 3: erasure regression ----

Verdict criterion_erasure() {
    Verdict v{3, "erasure completion beats winner-take-all"};
    auto t0 = Clock::now();
    NetworkConfig cfg(8, 128);
    auto messages = random_messages(cfg, 5000, derive_stream(301, 0));
    CliqueMemory mem(cfg);
    ErasurePattern pattern{{0, 1}};

    double joint_at_1000 = 0.0, joint_at_5000 = 0.0, sos_at_5000 = 0.0;
    uint32_t stored = 0;
    for (uint32_t point : {1000u, 5000u}) {
        while (stored < point) mem.store(messages[stored++]);
        SplitMix64 trial_rng(derive_stream(301, 1 + point));
        int joint_hits = 0, sos_hits = 0;
        for (int t = 0; t < 200; ++t) {
            const Message& truth = messages[trial_rng.next_below(stored)];
            auto [partial, pat] = erase(truth, pattern);
            if (retrieve_erasure(mem, partial).message == truth) ++joint_hits;
            ActivationState init = init_erasure(cfg, truth, pattern, Dynamics::SumOfSum);
            FixedPointResult fp = run_until_fixed(mem, init, RetrievalParams{}, Dynamics::SumOfSum);
            if (decode(fp.state) == truth) ++sos_hits;
        }
        if (point == 1000) joint_at_1000 = joint_hits / 200.0;
        else {
            joint_at_5000 = joint_hits / 200.0;
            sos_at_5000 = sos_hits / 200.0;
        }
    }

    v.seconds = seconds_since(t0);
    v.pass = joint_at_1000 >= 0.95 && sos_at_5000 < joint_at_5000;
    v.detail = "joint@1000=" + rate(joint_at_1000) + " (need >=0.95), @5000 joint=" +
               rate(joint_at_5000) + " vs sum-of-sum=" + rate(sos_at_5000);
    return v;
}

// ---- criteria 4/5/8 share the combined-error sweep ----

ExperimentConfig combined_error_config() {
    ExperimentConfig config;
    config.network = NetworkConfig(8, 128);
    config.stored_counts = {12000};
    config.test_count = 200;
    config.algorithms = {Algorithm::Direct, Algorithm::Delegate, Algorithm::CutAndPaste};
    config.error.insertions = {{0, false, 1}, {1, false, 1}, {2, false, 1}};
    config.error.omissions = {7};
    config.error.shift.clusters = {3, 4, 5, 6};
    config.error.shift.probability = 0.5;
    config.seed = 42;
    config.measure_time = false;
    return config;
}

std::vector<TrialRecord> g_cut_and_paste_records;

std::optional<std::vector<TrialRecord>> g_combined_records;

const std::vector<TrialRecord>& combined_records() {
    if (!g_combined_records) {
        g_combined_records = run_sweep(combined_error_config());
        for (const auto& rec : *g_combined_records)
            if (rec.algorithm == algorithm_tag(Algorithm::CutAndPaste))
                g_cut_and_paste_records.push_back(rec);
    }
    return *g_combined_records;
}

const TrialRecord* find_record(const std::vector<TrialRecord>& records, Algorithm a) {
    for (const auto& rec : records)
        if (rec.algorithm == algorithm_tag(a)) return &rec;
    return nullptr;
}

Verdict criterion_combined_errors() {
    Verdict v{4, "combined-error retrieval rates at 12000 stored"};
    auto t0 = Clock::now();
    const auto& records = combined_records();
    const TrialRecord* cp = find_record(records, Algorithm::CutAndPaste);
    const TrialRecord* direct = find_record(records, Algorithm::Direct);
    const TrialRecord* delegate = find_record(records, Algorithm::Delegate);

    v.seconds = seconds_since(t0);
    bool cp_ok = cp && cp->msg_rate > 0.15;
    bool others_ok = direct && delegate && direct->msg_rate < 0.05 && delegate->msg_rate < 0.05;
    v.pass = cp_ok && others_ok && v.seconds < 600.0;
    v.detail = "cut-and-paste=" + rate(cp ? cp->msg_rate : -1) + " (need >0.15), direct=" +
               rate(direct ? direct->msg_rate : -1) + ", delegate=" +
               rate(delegate ? delegate->msg_rate : -1) + " (need <0.05)";
    return v;
}

// ---- criterion 5: cut-and-paste structural soundness ----

Verdict criterion_soundness() {
    Verdict v{5, "cut-and-paste answers are always stored cliques"};
    auto t0 = Clock::now();

    uint64_t sweep_trials = 0, sweep_unsound = 0;
    for (const auto& rec : g_cut_and_paste_records) {
        sweep_trials += rec.trials;
        sweep_unsound += rec.unsound;
    }

    // fresh fuzz battery with every error primitive in play
    NetworkConfig cfg(6, 24);
    uint64_t fuzz_probes = 0, fuzz_unsound = 0;
    SplitMix64 rng(505);
    for (size_t count : {20u, 80u, 200u}) {
        auto messages = random_messages(cfg, count, rng.next());
        CliqueMemory mem(cfg);
        for (const Message& msg : messages) mem.store(msg);
        for (int t = 0; t < 700; ++t) {
            const Message& truth = messages[rng.next_below(messages.size())];
            ErrorSpec spec;
            spec.shift.all_clusters = true;
            spec.shift.probability = 0.3;
            if (rng.next_double() < 0.5)
                spec.omissions = {static_cast<uint32_t>(rng.next_below(cfg.cluster_count))};
            if (rng.next_double() < 0.5) {
                InsertionSpec ins;
                ins.cluster = static_cast<uint32_t>(rng.next_below(cfg.cluster_count));
                ins.heavy = rng.next_double() < 0.3;
                ins.count = 1 + static_cast<uint32_t>(rng.next_below(3));
                if (spec.omissions.empty() || spec.omissions[0] != ins.cluster)
                    spec.insertions = {ins};
            }
            spec.seed = rng.next();
            ActivationState probe = inject(cfg, truth, spec);
            ++fuzz_probes;
            RetrievalOutcome out = retrieve_cut_and_paste(mem, probe);
            if (out.message && !mem.contains_clique(*out.message)) ++fuzz_unsound;
        }
    }

    v.seconds = seconds_since(t0);
    v.pass = sweep_unsound == 0 && fuzz_unsound == 0;
    v.detail = std::to_string(sweep_unsound) + " unsound over " + std::to_string(sweep_trials) +
               " sweep trials, " + std::to_string(fuzz_unsound) + " over " +
               std::to_string(fuzz_probes) + " fuzz probes";
    return v;
}

// ---- criterion 6: timing ordering ----

Verdict criterion_timing() {
    Verdict v{6, "per-probe time ordering at 8000 stored"};
    auto t0 = Clock::now();
    ExperimentConfig config;
    config.network = NetworkConfig(8, 128);
    config.stored_counts = {8000};
    config.test_count = 200;
    config.algorithms = {Algorithm::Direct, Algorithm::DirectPlus, Algorithm::CutAndPaste};
    config.error.omissions = {0, 1};
    config.seed = 43;
    config.measure_time = true;
    auto records = run_sweep(config);
    for (const auto& rec : records)
        if (rec.algorithm == algorithm_tag(Algorithm::CutAndPaste))
            g_cut_and_paste_records.push_back(rec);

    const TrialRecord* direct = find_record(records, Algorithm::Direct);
    const TrialRecord* plus = find_record(records, Algorithm::DirectPlus);
    const TrialRecord* cp = find_record(records, Algorithm::CutAndPaste);

    v.seconds = seconds_since(t0);
    v.pass = cp && plus && direct && cp->mean_time_s < plus->mean_time_s &&
             plus->mean_time_s < direct->mean_time_s;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "cut-and-paste=%.1fus < direct-plus=%.1fus < direct=%.1fus required",
                  cp ? cp->mean_time_s * 1e6 : -1, plus ? plus->mean_time_s * 1e6 : -1,
                  direct ? direct->mean_time_s * 1e6 : -1);
    v.detail = buf;
    return v;
}

// ---- criterion 7: USPS digits ----

Verdict criterion_usps() {
    Verdict v{7, "digit benchmark against the flat baseline"};
    auto t0 = Clock::now();

    std::string path = "data/usps.txt";
    if (const char* env = std::getenv("CSAM_USPS_DATA")) path = env;
    if (!std::filesystem::exists(path)) {
        v.skipped = true;
        v.detail = "dataset not found at " + path + "; set CSAM_USPS_DATA to run";
        return v;
    }

    auto samples = usps_load(path);
    UspsBenchConfig config; // 5000 images, 1000 probes, 4 corrupt symbols, 3 reps
    config.measure_time = false;
    auto records = run_usps_bench(samples, config);
    const TrialRecord& cp = records[0];
    const TrialRecord& willshaw = records[1];

    v.seconds = seconds_since(t0);
    v.pass = cp.msg_rate >= 0.30 && cp.msg_rate <= 0.55 && willshaw.msg_rate < 0.05 &&
             v.seconds < 1800.0;
    v.detail = "cut-and-paste=" + rate(cp.msg_rate) + " (need 0.30..0.55), willshaw=" +
               rate(willshaw.msg_rate) + " (need <0.05)";
    return v;
}

// ---- criterion 8: determinism ----

Verdict criterion_determinism() {
    Verdict v{8, "identical seeds give byte-identical output"};
    auto t0 = Clock::now();
    ExperimentConfig config = combined_error_config();

    std::ostringstream first;
    emit_csv(combined_records(), config.to_keys(), first);

    auto rerun = run_sweep(config);
    for (const auto& rec : rerun)
        if (rec.algorithm == algorithm_tag(Algorithm::CutAndPaste))
            g_cut_and_paste_records.push_back(rec);
    std::ostringstream second;
    emit_csv(rerun, config.to_keys(), second);

    v.seconds = seconds_since(t0);
    v.pass = first.str() == second.str();
    v.detail = std::to_string(first.str().size()) + " CSV bytes " +
               (v.pass ? "identical across runs" : "DIFFER across runs");
    return v;
}

void print_verdict(const Verdict& v) {
    std::string label = "[" + std::to_string(v.id) + "] " + v.name + " ";
    while (label.size() < 56) label.push_back('.');
    const char* status = v.skipped ? "SKIP" : v.pass ? "PASS" : "FAIL";
    std::printf("%s %s (%.1fs) %s\n", label.c_str(), status, v.seconds, v.detail.c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }

    // criterion 5 runs last so it sees every cut-and-paste sweep record
    using Runner = Verdict (*)();
    std::pair<int, Runner> order[] = {
        {1, criterion_oracle},   {2, criterion_monotonic},   {3, criterion_erasure},
        {4, criterion_combined_errors}, {6, criterion_timing}, {7, criterion_usps},
        {8, criterion_determinism},     {5, criterion_soundness},
    };

    std::vector<Verdict> verdicts;
    for (auto [id, runner] : order) {
        if (only && id != only) continue;
        verdicts.push_back(runner());
        print_verdict(verdicts.back());
    }

    int failed = 0, skipped = 0;
    for (const Verdict& v : verdicts) {
        if (v.skipped) ++skipped;
        else if (!v.pass) ++failed;
    }
    std::printf("%zu criteria: %zu passed, %d failed, %d skipped\n", verdicts.size(),
                verdicts.size() - failed - skipped, failed, skipped);
    return failed ? 1 : 0;
}
