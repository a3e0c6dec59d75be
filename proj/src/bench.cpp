#include "csam/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "csam/rng.hpp"

namespace csam {

void ExperimentConfig::validate() const {
    if (network.cluster_count < 2 || network.neurons_per_cluster < 2)
        throw std::invalid_argument("config: network needs at least 2 clusters of 2 neurons");
    if (stored_counts.empty())
        throw std::invalid_argument("config: stored_counts must not be empty");
    for (size_t i = 0; i < stored_counts.size(); ++i) {
        if (stored_counts[i] == 0)
            throw std::invalid_argument("config: stored_counts must be positive");
        if (i > 0 && stored_counts[i] <= stored_counts[i - 1])
            throw std::invalid_argument("config: stored_counts must be strictly ascending");
    }
    if (test_count == 0)
        throw std::invalid_argument("config: test_count must be positive");
    if (algorithms.empty())
        throw std::invalid_argument("config: algorithms must not be empty");
    for (Algorithm a : algorithms)
        if (a == Algorithm::Erasure)
            throw std::invalid_argument("config: erasure is not a sweep algorithm");
    if (repetitions == 0)
        throw std::invalid_argument("config: repetitions must be positive");
    error.validate(network);
}

std::vector<Message> generate_messages(const NetworkConfig& cfg, size_t count, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Message> messages(count);
    for (Message& msg : messages) {
        msg.symbols.resize(cfg.cluster_count);
        for (uint32_t c = 0; c < cfg.cluster_count; ++c)
            msg.symbols[c] = static_cast<uint32_t>(rng.next_below(cfg.neurons_per_cluster));
    }
    return messages;
}

namespace {

struct Accumulator {
    uint64_t trials = 0;
    uint64_t msg_hits = 0;
    uint64_t sym_hits = 0;
    uint64_t conv_failures = 0;
    uint64_t unsound = 0;
    double time_sum = 0.0;
    std::vector<double> times;
};

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    size_t mid = values.size() / 2;
    if (values.size() % 2) return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

void tally(Accumulator& acc, const RetrievalOutcome& outcome, const Message& original,
           const CliqueMemory& mem, bool measure_time) {
    ++acc.trials;
    if (!outcome.converged) ++acc.conv_failures;
    if (outcome.message) {
        if (*outcome.message == original) ++acc.msg_hits;
        for (size_t c = 0; c < original.symbols.size(); ++c)
            if (outcome.message->symbols[c] == original.symbols[c]) ++acc.sym_hits;
        if (!mem.contains_clique(*outcome.message)) ++acc.unsound;
    }
    if (measure_time) {
        acc.time_sum += outcome.elapsed.count();
        acc.times.push_back(outcome.elapsed.count());
    }
}

TrialRecord finish(const Accumulator& acc, uint32_t stored, const std::string& tag,
                   uint32_t symbols_per_message, bool measure_time) {
    TrialRecord rec;
    rec.stored_count = stored;
    rec.algorithm = tag;
    rec.trials = acc.trials;
    rec.msg_rate = acc.trials ? static_cast<double>(acc.msg_hits) / acc.trials : 0.0;
    rec.sym_rate = acc.trials
                       ? static_cast<double>(acc.sym_hits) / (acc.trials * symbols_per_message)
                       : 0.0;
    if (measure_time && acc.trials) {
        rec.mean_time_s = acc.time_sum / acc.trials;
        rec.median_time_s = median_of(acc.times);
    }
    rec.conv_failures = acc.conv_failures;
    rec.unsound = acc.unsound;
    return rec;
}

} // namespace

std::vector<TrialRecord> run_sweep(const ExperimentConfig& config) {
    config.validate();
    const NetworkConfig& net = config.network;
    const uint32_t points = static_cast<uint32_t>(config.stored_counts.size());
    const uint32_t max_count = config.stored_counts.back();

    // accumulators per (point, algorithm), shared across repetitions
    std::vector<Accumulator> acc(points * config.algorithms.size());

    for (uint32_t rep = 0; rep < config.repetitions; ++rep) {
        uint64_t rep_seed = derive_stream(config.seed, rep);
        std::vector<Message> messages =
            generate_messages(net, max_count, derive_stream(rep_seed, 0));
        CliqueMemory mem(net);
        uint32_t stored = 0;
        for (uint32_t point = 0; point < points; ++point) {
            while (stored < config.stored_counts[point])
                mem.store(messages[stored++]);
            uint64_t point_seed = derive_stream(rep_seed, 1 + point);
            for (uint32_t trial = 0; trial < config.test_count; ++trial) {
                SplitMix64 trial_rng(derive_stream(point_seed, trial));
                const Message& original = messages[trial_rng.next_below(stored)];
                ErrorSpec spec = config.error;
                spec.seed = trial_rng.next();
                ActivationState probe = inject(net, original, spec);
                for (size_t ai = 0; ai < config.algorithms.size(); ++ai) {
                    RetrievalOutcome outcome = retrieve(mem, probe, config.algorithms[ai]);
                    tally(acc[point * config.algorithms.size() + ai], outcome, original, mem,
                          config.measure_time);
                }
            }
        }
    }

    std::vector<TrialRecord> records;
    records.reserve(acc.size());
    for (uint32_t point = 0; point < points; ++point)
        for (size_t ai = 0; ai < config.algorithms.size(); ++ai)
            records.push_back(finish(acc[point * config.algorithms.size() + ai],
                                     config.stored_counts[point],
                                     algorithm_tag(config.algorithms[ai]),
                                     net.cluster_count, config.measure_time));
    return records;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_keys() const {
    std::vector<std::pair<std::string, std::string>> keys;
    keys.emplace_back("clusters", std::to_string(network.cluster_count));
    keys.emplace_back("neurons", std::to_string(network.neurons_per_cluster));
    std::string counts;
    for (size_t i = 0; i < stored_counts.size(); ++i) {
        if (i) counts.push_back(',');
        counts += std::to_string(stored_counts[i]);
    }
    keys.emplace_back("stored_counts", counts);
    keys.emplace_back("test_count", std::to_string(test_count));
    std::string algs;
    for (size_t i = 0; i < algorithms.size(); ++i) {
        if (i) algs.push_back(',');
        algs += algorithm_tag(algorithms[i]);
    }
    keys.emplace_back("algorithms", algs);
    keys.emplace_back("seed", std::to_string(seed));
    keys.emplace_back("repetitions", std::to_string(repetitions));
    keys.emplace_back("measure_time", measure_time ? "1" : "0");
    for (auto& kv : error.to_keys())
        keys.push_back(std::move(kv));
    return keys;
}

namespace {

uint64_t to_u64(const std::string& text, const std::string& key) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("config: bad value for " + key);
    }
}

std::vector<std::string> split_commas(const std::string& text) {
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

const char* const known_keys[] = {
    "clusters", "neurons", "stored_counts", "test_count", "algorithms",
    "seed", "repetitions", "measure_time", "error.insertions", "error.omissions",
    "error.shift.clusters", "error.shift.p", "error.shift.random", "error.seed",
};

} // namespace

ExperimentConfig ExperimentConfig::from_keys(const std::map<std::string, std::string>& keys) {
    for (const auto& [key, value] : keys) {
        (void)value;
        bool known = false;
        for (const char* k : known_keys)
            if (key == k) { known = true; break; }
        if (!known)
            throw std::invalid_argument("config: unknown key " + key);
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = keys.find(key);
        if (it == keys.end())
            throw std::invalid_argument(std::string("config: missing key ") + key);
        return it->second;
    };
    ExperimentConfig config;
    config.network.cluster_count = static_cast<uint32_t>(to_u64(need("clusters"), "clusters"));
    config.network.neurons_per_cluster =
        static_cast<uint32_t>(to_u64(need("neurons"), "neurons"));
    for (const std::string& part : split_commas(need("stored_counts")))
        config.stored_counts.push_back(static_cast<uint32_t>(to_u64(part, "stored_counts")));
    config.test_count = static_cast<uint32_t>(to_u64(need("test_count"), "test_count"));
    for (const std::string& part : split_commas(need("algorithms"))) {
        auto alg = algorithm_from_tag(part);
        if (!alg)
            throw std::invalid_argument("config: unknown algorithm " + part);
        config.algorithms.push_back(*alg);
    }
    if (auto it = keys.find("seed"); it != keys.end())
        config.seed = to_u64(it->second, "seed");
    if (auto it = keys.find("repetitions"); it != keys.end())
        config.repetitions = static_cast<uint32_t>(to_u64(it->second, "repetitions"));
    if (auto it = keys.find("measure_time"); it != keys.end()) {
        if (it->second == "1" || it->second == "true")
            config.measure_time = true;
        else if (it->second == "0" || it->second == "false")
            config.measure_time = false;
        else
            throw std::invalid_argument("config: measure_time must be 0 or 1");
    }
    config.error = ErrorSpec::from_keys(keys);
    config.validate();
    return config;
}

void emit_csv(const std::vector<TrialRecord>& records,
              const std::vector<std::pair<std::string, std::string>>& metadata,
              std::ostream& out) {
    for (const auto& [key, value] : metadata)
        out << "# " << key << '=' << value << '\n';
    out << "stored_count,algorithm,msg_rate,sym_rate,mean_time_s,conv_failures\n";
    for (const TrialRecord& rec : records) {
        out << rec.stored_count << ',' << rec.algorithm << ',' << format_double(rec.msg_rate)
            << ',' << format_double(rec.sym_rate) << ',' << format_double(rec.mean_time_s)
            << ',' << rec.conv_failures << '\n';
    }
}

void emit_json(const std::vector<TrialRecord>& records,
               const std::vector<std::pair<std::string, std::string>>& metadata,
               std::ostream& out) {
    nlohmann::ordered_json doc;
    auto& config = doc["config"];
    for (const auto& [key, value] : metadata)
        config[key] = value;
    auto& rows = doc["records"];
    rows = nlohmann::ordered_json::array();
    for (const TrialRecord& rec : records) {
        nlohmann::ordered_json row;
        row["stored_count"] = rec.stored_count;
        row["algorithm"] = rec.algorithm;
        row["trials"] = rec.trials;
        row["msg_rate"] = rec.msg_rate;
        row["sym_rate"] = rec.sym_rate;
        row["mean_time_s"] = rec.mean_time_s;
        row["median_time_s"] = rec.median_time_s;
        row["conv_failures"] = rec.conv_failures;
        rows.push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

void emit(const std::vector<TrialRecord>& records, const ExperimentConfig& config,
          EmitFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    if (format == EmitFormat::Csv)
        emit_csv(records, config.to_keys(), out);
    else
        emit_json(records, config.to_keys(), out);
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

ParsedCsv parse_csv(std::istream& in) {
    ParsedCsv parsed;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            size_t start = line.find_first_not_of(" \t", 1);
            if (start == std::string::npos) continue;
            size_t eq = line.find('=', start);
            if (eq == std::string::npos)
                throw std::runtime_error("csv: metadata line without '='");
            parsed.metadata[line.substr(start, eq - start)] = line.substr(eq + 1);
            continue;
        }
        if (!header_seen) {
            if (line != "stored_count,algorithm,msg_rate,sym_rate,mean_time_s,conv_failures")
                throw std::runtime_error("csv: unexpected header: " + line);
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields = split_commas(line);
        if (fields.size() != 6)
            throw std::runtime_error("csv: expected 6 fields: " + line);
        TrialRecord rec;
        rec.stored_count = static_cast<uint32_t>(to_u64(fields[0], "stored_count"));
        rec.algorithm = fields[1];
        rec.msg_rate = std::stod(fields[2]);
        rec.sym_rate = std::stod(fields[3]);
        rec.mean_time_s = std::stod(fields[4]);
        rec.conv_failures = to_u64(fields[5], "conv_failures");
        parsed.records.push_back(std::move(rec));
    }
    if (!header_seen)
        throw std::runtime_error("csv: missing header");
    return parsed;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    std::map<std::string, std::string> keys;
    std::string line;
    size_t lineno = 0;
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return std::string();
        size_t e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
        if (!keys.emplace(key, value).second)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": duplicate key " + key);
    }
    return keys;
}

ExperimentConfig load_config_file(const std::string& path) {
    return ExperimentConfig::from_keys(parse_key_value_file(path));
}

} // namespace csam
