#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "amc/classifier.hpp"
#include "amc/rng.hpp"
#include "amc/types.hpp"

namespace amc {

// Closed interval; lo == hi pins the value exactly.
struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
};

struct ConditionRange {
    ValueRange snr_db{100.0, 100.0};
    ValueRange phase_noise_dbc_hz{-9999.0, -9999.0};
    ValueRange iq_imbalance_db{0.0, 0.0};
};

// A lot: consecutive batches sharing one channel condition drawn from the
// configured range when the lot starts.
struct LotSpec {
    int num_batches = 1;
    ConditionRange condition;
    bool labels_available = true;
};

struct TrainSpec {
    int num_samples = 5000;
    ConditionRange condition;  // drawn per training sample
};

struct ExperimentConfig {
    std::vector<std::string> formats;
    TrainSpec train;
    std::vector<LotSpec> stream;
    int batch_size = 100;
    int signal_length = 1024;
    int trials = 10;
    int psi = 128;
    int t = 75;
    double eta = 0.01;
    int knn_k = 15;
    int warm_epochs = 1;
    int summary_window = 10;  // batch-group width for the summary CSV
    std::uint64_t seed = 1;
    bool run_fknn = true;
    bool track_frozen = false;  // adds a no-update copy of the warm-started model
    LossVariant loss = LossVariant::one_vs_rest_hinge;
};

// Throws config_error listing every offending field.
void validate(const ExperimentConfig& config);

ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);  // resolved, manifest-ready

struct BatchRow {
    int trial = 0;
    int batch = 0;  // 0-based arrival index within the trial
    int lot = 0;
    ChannelCondition condition;
    bool labels_available = true;
    std::vector<double> accuracy;  // aligned with MetricsLog::classifiers
    std::uint64_t zero_embeddings = 0;
};

struct TimingRow {
    int trial = 0;
    std::string stage;  // fit, warm_start, predict, update, fknn_predict, fknn_retrain
    int batch = -1;     // -1 for per-trial stages
    double seconds = 0.0;
};

// Weight snapshots kept per trial so label-free streams can be checked for
// bit-exact model stasis.
struct TrialWeights {
    std::vector<std::vector<double>> after_warm_start;
    std::vector<std::vector<double>> after_stream;
};

struct MetricsLog {
    std::vector<ModulationFormat> formats;
    std::vector<std::string> classifiers;  // accuracy column order
    std::vector<BatchRow> rows;
    // classifier -> m*m counts (true-major), summed over the whole run
    std::map<std::string, std::vector<std::uint64_t>> confusion;
    std::vector<TimingRow> timings;
    std::vector<TrialWeights> trial_weights;
};

// Full protocol: per trial, generate training data, fit per-format
// partitionings, warm-start IDK-OGD, build the fKNN store, then stream the
// configured lots batch by batch. Deterministic given config.seed except for
// the timing rows.
MetricsLog run_experiment(const ExperimentConfig& config);

// One stratified batch: batch_size/m signals per format under `cond`,
// deterministically shuffled. labels carry the ground truth.
LabeledBatch make_stratified_batch(const std::vector<ModulationFormat>& formats,
                                   int batch_size, int signal_length,
                                   const ChannelCondition& cond, Rng& rng);

// Pairwise IDK similarities of one signal per (format, condition) cell,
// embedded under a single partitioning fitted on the pooled points.
// Cells are format-major.
struct MatrixCell {
    std::string format;
    ChannelCondition condition;
};

struct SimilarityMatrix {
    std::vector<MatrixCell> cells;
    std::vector<double> values;  // row-major, cells.size() x cells.size()
};

SimilarityMatrix similarity_matrix(const std::vector<std::string>& formats,
                                   const std::vector<ChannelCondition>& conditions,
                                   int psi, int t, int signal_length,
                                   std::uint64_t seed);

// Streaming-cost comparison over growing test streams.
struct BenchConfig {
    std::vector<std::string> formats;
    TrainSpec train;
    ConditionRange test_condition;
    int batch_size = 100;
    int signal_length = 1024;
    int psi = 128;
    int t = 75;
    double eta = 0.01;
    int knn_k = 15;
    int warm_epochs = 1;
    std::uint64_t seed = 1;
};

struct BenchRow {
    std::size_t stream_samples = 0;
    std::string classifier;
    double train_seconds = 0.0;
    double stream_seconds = 0.0;
    double total_seconds = 0.0;
    double ratio = 0.0;  // total / train
};

// Sizes must be strictly increasing multiples of the batch size, two or more.
std::vector<BenchRow> runtime_benchmark(const BenchConfig& config,
                                        const std::vector<std::size_t>& sizes);

// CSV renderers. metrics/confusion/summary are pure functions of the
// deterministic part of the log; timings are the only nondeterministic rows.
std::string metrics_csv(const MetricsLog& log);
std::string confusion_csv(const MetricsLog& log);
std::string timings_csv(const MetricsLog& log);
std::string summary_csv(const MetricsLog& log, int window);
std::string similarity_csv(const SimilarityMatrix& m);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace amc
