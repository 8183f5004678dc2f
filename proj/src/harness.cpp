#include "amc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amc/baselines.hpp"
#include "amc/channel.hpp"
#include "amc/constellation.hpp"
#include "amc/isokernel.hpp"

namespace amc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double draw(const ValueRange& range, Rng& rng) { return rng.uniform(range.lo, range.hi); }

ChannelCondition draw_condition(const ConditionRange& range, Rng& rng) {
    ChannelCondition cond;
    cond.snr_db = draw(range.snr_db, rng);
    cond.phase_noise_dbc_hz = draw(range.phase_noise_dbc_hz, rng);
    cond.iq_imbalance_db = draw(range.iq_imbalance_db, rng);
    return cond;
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_acc(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

double batch_accuracy(const std::vector<int>& predictions, const std::vector<int>& truth) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predictions[i] == truth[i]) correct++;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

void accumulate_confusion(std::vector<std::uint64_t>& counts, std::size_t m,
                          const std::vector<int>& slot_of_id,
                          const std::vector<int>& predictions,
                          const std::vector<int>& truth) {
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto true_slot = static_cast<std::size_t>(slot_of_id[static_cast<std::size_t>(truth[i])]);
        const auto pred_slot = static_cast<std::size_t>(slot_of_id[static_cast<std::size_t>(predictions[i])]);
        counts[true_slot * m + pred_slot]++;
    }
}

}  // namespace

void validate(const ExperimentConfig& config) {
    std::vector<std::string> issues;
    auto add = [&](const std::string& s) { issues.push_back(s); };

    if (config.formats.empty()) add("formats: must list at least one format");
    for (const auto& name : config.formats) {
        try {
            (void)format_by_name(name);
        } catch (const config_error&) {
            add("formats: unknown format '" + name + "'");
        }
    }
    for (std::size_t i = 0; i < config.formats.size(); ++i) {
        for (std::size_t j = i + 1; j < config.formats.size(); ++j) {
            if (config.formats[i] == config.formats[j]) {
                add("formats: duplicate '" + config.formats[i] + "'");
            }
        }
    }

    const int m = static_cast<int>(config.formats.size());
    if (config.batch_size < 1) add("batch_size: must be >= 1");
    if (m > 0 && config.batch_size % m != 0) {
        add("batch_size: " + std::to_string(config.batch_size) +
            " is not divisible by the number of formats (" + std::to_string(m) +
            "), stratified batches need equal per-format counts");
    }
    if (config.signal_length < 1) add("signal_length: must be >= 1");
    if (config.trials < 1) add("trials: must be >= 1");
    if (config.psi < 2) add("psi: must be >= 2");
    if (config.t < 1) add("t: must be >= 1");
    if (config.eta < 0.0) add("eta: must be >= 0");
    if (config.knn_k < 1) add("knn_k: must be >= 1");
    if (config.warm_epochs < 0) add("warm_epochs: must be >= 0");
    if (config.summary_window < 1) add("summary_window: must be >= 1");
    if (config.train.num_samples < 1) add("train.num_samples: must be >= 1");

    auto check_range = [&](const char* field, const ValueRange& r) {
        if (r.lo > r.hi) {
            add(std::string(field) + ": lo " + fmt_g(r.lo) + " exceeds hi " + fmt_g(r.hi));
        }
    };
    check_range("train.snr_db", config.train.condition.snr_db);
    check_range("train.phase_noise_dbc_hz", config.train.condition.phase_noise_dbc_hz);
    check_range("train.iq_imbalance_db", config.train.condition.iq_imbalance_db);

    if (config.stream.empty()) add("stream: must list at least one lot");
    for (std::size_t i = 0; i < config.stream.size(); ++i) {
        const auto& lot = config.stream[i];
        const std::string tag = "stream[" + std::to_string(i) + "]";
        if (lot.num_batches < 1) add(tag + ".num_batches: must be >= 1");
        check_range((tag + ".snr_db").c_str(), lot.condition.snr_db);
        check_range((tag + ".phase_noise_dbc_hz").c_str(), lot.condition.phase_noise_dbc_hz);
        check_range((tag + ".iq_imbalance_db").c_str(), lot.condition.iq_imbalance_db);
    }

    if (!issues.empty()) {
        std::string msg = "invalid experiment config:";
        for (const auto& s : issues) msg += "\n  - " + s;
        throw config_error(msg);
    }
}

LabeledBatch make_stratified_batch(const std::vector<ModulationFormat>& formats,
                                   int batch_size, int signal_length,
                                   const ChannelCondition& cond, Rng& rng) {
    const int m = static_cast<int>(formats.size());
    const int per_format = batch_size / m;

    LabeledBatch batch;
    batch.signals.reserve(static_cast<std::size_t>(batch_size));
    batch.labels.reserve(static_cast<std::size_t>(batch_size));
    for (const auto& fmt : formats) {
        for (int i = 0; i < per_format; ++i) {
            IqSignal clean = generate_signal(fmt, static_cast<std::size_t>(signal_length),
                                             rng.next_u64());
            batch.signals.push_back(apply_condition(clean, cond, rng.next_u64()));
            batch.labels.push_back(fmt.id);
        }
    }
    // Fisher-Yates so arrival order is not format-sorted
    for (std::size_t i = batch.signals.size() - 1; i > 0; --i) {
        const std::size_t j = rng.uniform_index(i + 1);
        std::swap(batch.signals[i], batch.signals[j]);
        std::swap(batch.labels[i], batch.labels[j]);
    }
    return batch;
}

MetricsLog run_experiment(const ExperimentConfig& config) {
    validate(config);

    MetricsLog log;
    for (const auto& name : config.formats) log.formats.push_back(format_by_name(name));
    const std::size_t m = log.formats.size();

    log.classifiers.push_back("idk_ogd");
    if (config.track_frozen) log.classifiers.push_back("idk_ogd_frozen");
    if (config.run_fknn) log.classifiers.push_back("fknn");
    for (const auto& name : log.classifiers) {
        log.confusion[name].assign(m * m, 0);
    }

    // dense map from global format id to slot in this experiment
    std::vector<int> slot_of_id(candidate_formats().size(), -1);
    for (std::size_t j = 0; j < m; ++j) slot_of_id[static_cast<std::size_t>(log.formats[j].id)] = static_cast<int>(j);

    log.trial_weights.resize(static_cast<std::size_t>(config.trials));

    for (int trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t trial_seed = mix_seed(config.seed, 1000 + static_cast<std::uint64_t>(trial));

        // training set: uniform random format assignment, per-sample condition
        Rng train_rng(mix_seed(trial_seed, 1));
        std::vector<IqSignal> train_signals;
        std::vector<int> train_labels;
        train_signals.reserve(static_cast<std::size_t>(config.train.num_samples));
        train_labels.reserve(static_cast<std::size_t>(config.train.num_samples));
        for (int i = 0; i < config.train.num_samples; ++i) {
            const std::size_t slot = train_rng.uniform_index(m);
            const ChannelCondition cond = draw_condition(config.train.condition, train_rng);
            IqSignal clean = generate_signal(log.formats[slot],
                                             static_cast<std::size_t>(config.signal_length),
                                             train_rng.next_u64());
            train_signals.push_back(apply_condition(clean, cond, train_rng.next_u64()));
            train_labels.push_back(log.formats[slot].id);
        }

        // per-format partitionings on the pooled I/Q points of that format
        auto t0 = Clock::now();
        std::vector<IsolationPartitioning> parts(m);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<ComplexSample> pooled;
            for (std::size_t i = 0; i < train_signals.size(); ++i) {
                if (train_labels[i] != log.formats[j].id) continue;
                pooled.insert(pooled.end(), train_signals[i].begin(), train_signals[i].end());
            }
            parts[j] = fit(pooled, config.psi, config.t, mix_seed(trial_seed, 100 + j));
            parts[j].source_format = log.formats[j].id;
        }
        log.timings.push_back({trial, "fit", -1, seconds_since(t0)});

        OgdModel model = init_model(log.formats, std::move(parts), config.eta, config.loss);
        t0 = Clock::now();
        warm_start(model, train_signals, train_labels, config.batch_size, config.warm_epochs);
        log.timings.push_back({trial, "warm_start", -1, seconds_since(t0)});

        log.trial_weights[static_cast<std::size_t>(trial)].after_warm_start = model.weights;

        OgdModel frozen;
        if (config.track_frozen) frozen = model;

        KnnStore store;
        store.k = config.knn_k;
        if (config.run_fknn) {
            t0 = Clock::now();
            LabeledBatch train_batch;
            train_batch.signals = train_signals;
            train_batch.labels = train_labels;
            knn_retrain(store, train_batch);
            log.timings.push_back({trial, "fknn_train", -1, seconds_since(t0)});
        }

        // stream
        Rng stream_rng(mix_seed(trial_seed, 2));
        int batch_index = 0;
        for (std::size_t lot_index = 0; lot_index < config.stream.size(); ++lot_index) {
            const LotSpec& lot = config.stream[lot_index];
            const ChannelCondition cond = draw_condition(lot.condition, stream_rng);

            for (int b = 0; b < lot.num_batches; ++b) {
                LabeledBatch truth = make_stratified_batch(log.formats, config.batch_size,
                                                           config.signal_length, cond,
                                                           stream_rng);
                LabeledBatch for_classifier = truth;
                if (!lot.labels_available) for_classifier.labels.clear();

                BatchRow row;
                row.trial = trial;
                row.batch = batch_index;
                row.lot = static_cast<int>(lot_index);
                row.condition = cond;
                row.labels_available = lot.labels_available;

                // IDK-OGD: classification stage, then update stage
                t0 = Clock::now();
                BatchScores scored = score_batch(model, for_classifier.signals);
                log.timings.push_back({trial, "predict", batch_index, seconds_since(t0)});
                t0 = Clock::now();
                update_batch_scored(model, for_classifier, scored);
                log.timings.push_back({trial, "update", batch_index, seconds_since(t0)});

                row.zero_embeddings = scored.zero_embedding_count;
                row.accuracy.push_back(batch_accuracy(scored.predictions, truth.labels));
                accumulate_confusion(log.confusion["idk_ogd"], m, slot_of_id,
                                     scored.predictions, truth.labels);

                if (config.track_frozen) {
                    const std::vector<int> fp = predict_batch(frozen, for_classifier);
                    row.accuracy.push_back(batch_accuracy(fp, truth.labels));
                    accumulate_confusion(log.confusion["idk_ogd_frozen"], m, slot_of_id,
                                         fp, truth.labels);
                }

                if (config.run_fknn) {
                    t0 = Clock::now();
                    std::vector<int> kp(truth.signals.size());
                    for (std::size_t i = 0; i < truth.signals.size(); ++i) {
                        kp[i] = knn_predict(store, extract_moments(truth.signals[i]));
                    }
                    log.timings.push_back({trial, "fknn_predict", batch_index, seconds_since(t0)});
                    t0 = Clock::now();
                    knn_retrain(store, for_classifier);
                    log.timings.push_back({trial, "fknn_retrain", batch_index, seconds_since(t0)});

                    row.accuracy.push_back(batch_accuracy(kp, truth.labels));
                    accumulate_confusion(log.confusion["fknn"], m, slot_of_id, kp,
                                         truth.labels);
                }

                log.rows.push_back(std::move(row));
                batch_index++;
            }
        }

        log.trial_weights[static_cast<std::size_t>(trial)].after_stream = model.weights;
    }
    return log;
}

SimilarityMatrix similarity_matrix(const std::vector<std::string>& formats,
                                   const std::vector<ChannelCondition>& conditions,
                                   int psi, int t, int signal_length,
                                   std::uint64_t seed) {
    if (formats.size() * conditions.size() < 2) {
        throw config_error("similarity_matrix: need at least 2 (format, condition) cells");
    }

    SimilarityMatrix out;
    Rng rng(seed);
    std::vector<IqSignal> cell_signals;
    std::vector<ComplexSample> pooled;
    for (const auto& name : formats) {
        const ModulationFormat& fmt = format_by_name(name);
        for (const auto& cond : conditions) {
            IqSignal clean = generate_signal(fmt, static_cast<std::size_t>(signal_length),
                                             rng.next_u64());
            IqSignal sig = apply_condition(clean, cond, rng.next_u64());
            pooled.insert(pooled.end(), sig.begin(), sig.end());
            cell_signals.push_back(std::move(sig));
            out.cells.push_back({name, cond});
        }
    }

    const IsolationPartitioning shared = fit(pooled, psi, t, mix_seed(seed, 0xF17));
    std::vector<DistributionEmbedding> embeddings;
    embeddings.reserve(cell_signals.size());
    for (const auto& sig : cell_signals) embeddings.push_back(embed(shared, sig));

    const std::size_t n = out.cells.size();
    out.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.values[i * n + j] = similarity(embeddings[i], embeddings[j]);
        }
    }
    return out;
}

std::vector<BenchRow> runtime_benchmark(const BenchConfig& config,
                                        const std::vector<std::size_t>& sizes) {
    if (sizes.size() < 2) throw config_error("runtime_benchmark: need at least 2 sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i > 0 && sizes[i] <= sizes[i - 1]) {
            throw config_error("runtime_benchmark: sizes must be strictly increasing");
        }
        if (sizes[i] % static_cast<std::size_t>(config.batch_size) != 0) {
            throw config_error("runtime_benchmark: size " + std::to_string(sizes[i]) +
                               " is not a multiple of batch_size " +
                               std::to_string(config.batch_size));
        }
    }

    std::vector<ModulationFormat> formats;
    for (const auto& name : config.formats) formats.push_back(format_by_name(name));
    const std::size_t m = formats.size();
    if (m == 0) throw config_error("runtime_benchmark: no formats");
    if (config.batch_size % static_cast<int>(m) != 0) {
        throw config_error("runtime_benchmark: batch_size not divisible by format count");
    }

    // shared training set, reused across sizes
    Rng train_rng(mix_seed(config.seed, 1));
    std::vector<IqSignal> train_signals;
    std::vector<int> train_labels;
    for (int i = 0; i < config.train.num_samples; ++i) {
        const std::size_t slot = train_rng.uniform_index(m);
        const ChannelCondition cond = draw_condition(config.train.condition, train_rng);
        IqSignal clean = generate_signal(formats[slot],
                                         static_cast<std::size_t>(config.signal_length),
                                         train_rng.next_u64());
        train_signals.push_back(apply_condition(clean, cond, train_rng.next_u64()));
        train_labels.push_back(formats[slot].id);
    }

    std::vector<BenchRow> rows;
    for (const std::size_t size : sizes) {
        const int num_batches = static_cast<int>(size) / config.batch_size;

        // IDK-OGD
        auto t0 = Clock::now();
        std::vector<IsolationPartitioning> parts(m);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<ComplexSample> pooled;
            for (std::size_t i = 0; i < train_signals.size(); ++i) {
                if (train_labels[i] != formats[j].id) continue;
                pooled.insert(pooled.end(), train_signals[i].begin(), train_signals[i].end());
            }
            parts[j] = fit(pooled, config.psi, config.t, mix_seed(config.seed, 100 + j));
            parts[j].source_format = formats[j].id;
        }
        OgdModel model = init_model(formats, std::move(parts), config.eta);
        warm_start(model, train_signals, train_labels, config.batch_size, config.warm_epochs);
        const double idk_train = seconds_since(t0);

        Rng stream_rng(mix_seed(config.seed, 2));
        const ChannelCondition cond = draw_condition(config.test_condition, stream_rng);
        std::vector<LabeledBatch> batches;
        batches.reserve(static_cast<std::size_t>(num_batches));
        for (int b = 0; b < num_batches; ++b) {
            batches.push_back(make_stratified_batch(formats, config.batch_size,
                                                    config.signal_length, cond, stream_rng));
        }

        t0 = Clock::now();
        for (const auto& batch : batches) process_stream_step(model, batch);
        const double idk_stream = seconds_since(t0);
        rows.push_back({size, "idk_ogd", idk_train, idk_stream, idk_train + idk_stream,
                        (idk_train + idk_stream) / idk_train});

        // fKNN over the same data
        t0 = Clock::now();
        KnnStore store;
        store.k = config.knn_k;
        LabeledBatch train_batch;
        train_batch.signals = train_signals;
        train_batch.labels = train_labels;
        knn_retrain(store, train_batch);
        const double knn_train = seconds_since(t0);

        t0 = Clock::now();
        for (const auto& batch : batches) {
            for (const auto& sig : batch.signals) {
                (void)knn_predict(store, extract_moments(sig));
            }
            knn_retrain(store, batch);
        }
        const double knn_stream = seconds_since(t0);
        rows.push_back({size, "fknn", knn_train, knn_stream, knn_train + knn_stream,
                        (knn_train + knn_stream) / knn_train});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// config JSON

namespace {

using nlohmann::json;

ValueRange parse_range(const json& v, const std::string& field) {
    if (v.is_number()) {
        const double x = v.get<double>();
        return {x, x};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw config_error(field + ": expected a number or [lo, hi]");
}

ConditionRange parse_condition(const json& obj, const std::string& prefix,
                               std::vector<std::string>& consumed) {
    ConditionRange cond;
    if (obj.contains("snr_db")) {
        cond.snr_db = parse_range(obj["snr_db"], prefix + ".snr_db");
        consumed.push_back("snr_db");
    }
    if (obj.contains("phase_noise_dbc_hz")) {
        cond.phase_noise_dbc_hz =
            parse_range(obj["phase_noise_dbc_hz"], prefix + ".phase_noise_dbc_hz");
        consumed.push_back("phase_noise_dbc_hz");
    }
    if (obj.contains("iq_imbalance_db")) {
        cond.iq_imbalance_db =
            parse_range(obj["iq_imbalance_db"], prefix + ".iq_imbalance_db");
        consumed.push_back("iq_imbalance_db");
    }
    return cond;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw config_error(prefix + ": unknown field '" + key + "'");
        }
    }
}

json range_to_json(const ValueRange& r) {
    if (r.lo == r.hi) return json(r.lo);
    return json::array({r.lo, r.hi});
}

}  // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw config_error("config: top level must be an object");

    ExperimentConfig config;
    reject_unknown_keys(root,
                        {"formats", "train", "stream", "batch_size", "signal_length",
                         "trials", "psi", "t", "eta", "knn_k", "warm_epochs",
                         "summary_window", "seed", "run_fknn", "track_frozen", "loss"},
                        "config");

    if (!root.contains("formats") || !root["formats"].is_array()) {
        throw config_error("formats: required array of format names");
    }
    for (const auto& f : root["formats"]) config.formats.push_back(f.get<std::string>());

    if (root.contains("train")) {
        const json& tr = root["train"];
        std::vector<std::string> consumed{"num_samples"};
        if (tr.contains("num_samples")) config.train.num_samples = tr["num_samples"].get<int>();
        config.train.condition = parse_condition(tr, "train", consumed);
        reject_unknown_keys(tr, consumed, "train");
    }

    if (!root.contains("stream") || !root["stream"].is_array()) {
        throw config_error("stream: required array of lot specs");
    }
    for (std::size_t i = 0; i < root["stream"].size(); ++i) {
        const json& lj = root["stream"][i];
        const std::string tag = "stream[" + std::to_string(i) + "]";
        LotSpec lot;
        std::vector<std::string> consumed{"num_batches", "labels_available", "repeat"};
        if (lj.contains("num_batches")) lot.num_batches = lj["num_batches"].get<int>();
        if (lj.contains("labels_available")) lot.labels_available = lj["labels_available"].get<bool>();
        lot.condition = parse_condition(lj, tag, consumed);
        reject_unknown_keys(lj, consumed, tag);

        int repeat = 1;
        if (lj.contains("repeat")) repeat = lj["repeat"].get<int>();
        if (repeat < 1) throw config_error(tag + ".repeat: must be >= 1");
        for (int rep = 0; rep < repeat; ++rep) config.stream.push_back(lot);
    }

    if (root.contains("batch_size")) config.batch_size = root["batch_size"].get<int>();
    if (root.contains("signal_length")) config.signal_length = root["signal_length"].get<int>();
    if (root.contains("trials")) config.trials = root["trials"].get<int>();
    if (root.contains("psi")) config.psi = root["psi"].get<int>();
    if (root.contains("t")) config.t = root["t"].get<int>();
    if (root.contains("eta")) config.eta = root["eta"].get<double>();
    if (root.contains("knn_k")) config.knn_k = root["knn_k"].get<int>();
    if (root.contains("warm_epochs")) config.warm_epochs = root["warm_epochs"].get<int>();
    if (root.contains("summary_window")) config.summary_window = root["summary_window"].get<int>();
    if (root.contains("seed")) config.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("run_fknn")) config.run_fknn = root["run_fknn"].get<bool>();
    if (root.contains("track_frozen")) config.track_frozen = root["track_frozen"].get<bool>();
    if (root.contains("loss")) {
        const std::string loss = root["loss"].get<std::string>();
        if (loss == "one_vs_rest") {
            config.loss = LossVariant::one_vs_rest_hinge;
        } else if (loss == "literal_ki") {
            config.loss = LossVariant::literal_ki_hinge;
        } else {
            throw config_error("loss: expected 'one_vs_rest' or 'literal_ki', got '" + loss + "'");
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& config) {
    json root;
    root["formats"] = config.formats;
    root["train"] = {
        {"num_samples", config.train.num_samples},
        {"snr_db", range_to_json(config.train.condition.snr_db)},
        {"phase_noise_dbc_hz", range_to_json(config.train.condition.phase_noise_dbc_hz)},
        {"iq_imbalance_db", range_to_json(config.train.condition.iq_imbalance_db)},
    };
    root["stream"] = json::array();
    for (const auto& lot : config.stream) {
        root["stream"].push_back({
            {"num_batches", lot.num_batches},
            {"labels_available", lot.labels_available},
            {"snr_db", range_to_json(lot.condition.snr_db)},
            {"phase_noise_dbc_hz", range_to_json(lot.condition.phase_noise_dbc_hz)},
            {"iq_imbalance_db", range_to_json(lot.condition.iq_imbalance_db)},
        });
    }
    root["batch_size"] = config.batch_size;
    root["signal_length"] = config.signal_length;
    root["trials"] = config.trials;
    root["psi"] = config.psi;
    root["t"] = config.t;
    root["eta"] = config.eta;
    root["knn_k"] = config.knn_k;
    root["warm_epochs"] = config.warm_epochs;
    root["summary_window"] = config.summary_window;
    root["seed"] = config.seed;
    root["run_fknn"] = config.run_fknn;
    root["track_frozen"] = config.track_frozen;
    root["loss"] = config.loss == LossVariant::one_vs_rest_hinge ? "one_vs_rest" : "literal_ki";
    return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV renderers

std::string metrics_csv(const MetricsLog& log) {
    std::string out = "trial,batch,lot,snr_db,phase_noise_dbc_hz,iq_imbalance_db,labels_available";
    for (const auto& name : log.classifiers) out += ",acc_" + name;
    out += ",zero_embeddings\n";
    for (const auto& row : log.rows) {
        out += std::to_string(row.trial) + "," + std::to_string(row.batch) + "," +
               std::to_string(row.lot) + "," + fmt_g(row.condition.snr_db) + "," +
               fmt_g(row.condition.phase_noise_dbc_hz) + "," +
               fmt_g(row.condition.iq_imbalance_db) + "," +
               (row.labels_available ? "1" : "0");
        for (double acc : row.accuracy) out += "," + fmt_acc(acc);
        out += "," + std::to_string(row.zero_embeddings) + "\n";
    }
    return out;
}

std::string confusion_csv(const MetricsLog& log) {
    const std::size_t m = log.formats.size();
    std::string out = "classifier,true_format";
    for (const auto& f : log.formats) out += ",pred_" + f.name;
    out += "\n";
    for (const auto& name : log.classifiers) {
        const auto& counts = log.confusion.at(name);
        for (std::size_t i = 0; i < m; ++i) {
            out += name + "," + log.formats[i].name;
            for (std::size_t j = 0; j < m; ++j) {
                out += "," + std::to_string(counts[i * m + j]);
            }
            out += "\n";
        }
    }
    return out;
}

std::string timings_csv(const MetricsLog& log) {
    std::string out = "trial,stage,batch,seconds\n";
    for (const auto& t : log.timings) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9f", t.seconds);
        out += std::to_string(t.trial) + "," + t.stage + "," + std::to_string(t.batch) +
               "," + buf + "\n";
    }
    return out;
}

std::string summary_csv(const MetricsLog& log, int window) {
    if (window < 1) throw config_error("summary_csv: window must be >= 1");
    // accuracy samples per (window, classifier) across trials and batches
    int max_batch = -1;
    for (const auto& row : log.rows) max_batch = std::max(max_batch, row.batch);
    const int num_windows = (max_batch + window) / window;

    std::string out = "window,first_batch,last_batch,classifier,mean_accuracy,standard_error,samples\n";
    for (int w = 0; w < num_windows; ++w) {
        for (std::size_t c = 0; c < log.classifiers.size(); ++c) {
            double sum = 0.0, sum2 = 0.0;
            std::size_t n = 0;
            for (const auto& row : log.rows) {
                if (row.batch / window != w) continue;
                const double a = row.accuracy[c];
                sum += a;
                sum2 += a * a;
                n++;
            }
            if (n == 0) continue;
            const double mean = sum / static_cast<double>(n);
            double se = 0.0;
            if (n > 1) {
                const double var =
                    (sum2 - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
                se = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
            }
            out += std::to_string(w) + "," + std::to_string(w * window) + "," +
                   std::to_string(w * window + window - 1) + "," + log.classifiers[c] + "," +
                   fmt_acc(mean) + "," + fmt_acc(se) + "," + std::to_string(n) + "\n";
        }
    }
    return out;
}

std::string similarity_csv(const SimilarityMatrix& matrix) {
    auto cell_name = [](const MatrixCell& c) {
        return c.format + "|snr=" + fmt_g(c.condition.snr_db) +
               "|pn=" + fmt_g(c.condition.phase_noise_dbc_hz) +
               "|iq=" + fmt_g(c.condition.iq_imbalance_db);
    };
    const std::size_t n = matrix.cells.size();
    std::string out = "cell";
    for (const auto& c : matrix.cells) out += "," + cell_name(c);
    out += "\n";
    for (std::size_t i = 0; i < n; ++i) {
        out += cell_name(matrix.cells[i]);
        for (std::size_t j = 0; j < n; ++j) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.12f", matrix.values[i * n + j]);
            out += ",";
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "stream_samples,classifier,train_seconds,stream_seconds,total_seconds,ratio\n";
    for (const auto& r : rows) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.6f,%.6f,%.6f,%.6f\n", r.stream_samples,
                      r.classifier.c_str(), r.train_seconds, r.stream_seconds,
                      r.total_seconds, r.ratio);
        out += buf;
    }
    return out;
}

}  // namespace amc
