#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "amc/isokernel.hpp"
#include "amc/types.hpp"

namespace amc {

// Loss used in the online update. one_vs_rest_hinge gives each of the m
// binary scorers its own +/-1 target; literal_ki applies one shared sign per
// sample (+1 when the multiclass prediction was correct) to all m updates.
enum class LossVariant : std::uint8_t {
    one_vs_rest_hinge = 0,
    literal_ki_hinge = 1,
};

// Online multiclass classifier state: one linear scorer per format over that
// format's own embedding space. Weights start at zero.
struct OgdModel {
    std::vector<ModulationFormat> formats;
    std::vector<IsolationPartitioning> partitionings;  // one per format
    std::vector<std::vector<double>> weights;          // w_j, length t*psi of format j
    double learning_rate = 0.01;
    LossVariant loss = LossVariant::one_vs_rest_hinge;
};

struct LabeledBatch {
    std::vector<IqSignal> signals;
    std::vector<int> labels;  // format ids; empty when ground truth withheld
    std::string condition_tag;

    bool has_labels() const { return !labels.empty(); }
};

// Zero-weight model over already-fitted per-format partitionings. Throws
// config_error when formats and partitionings disagree.
OgdModel init_model(std::vector<ModulationFormat> formats,
                    std::vector<IsolationPartitioning> partitionings,
                    double learning_rate,
                    LossVariant loss = LossVariant::one_vs_rest_hinge);

// Per-signal scores and embeddings for one batch, computed with the current
// weights. scores is signal-major (m per signal); embeddings likewise.
// score_batch parallelizes over (signal, format) pairs; score_batch_serial is
// the reference path. Identical output either way.
struct BatchScores {
    std::vector<DistributionEmbedding> embeddings;  // size |signals| * m
    std::vector<double> scores;                     // size |signals| * m
    std::vector<int> predictions;                   // argmax ids, ties to lowest
    std::uint64_t zero_embedding_count = 0;         // signals outside every sphere
};

BatchScores score_batch(const OgdModel& model, const std::vector<IqSignal>& signals);
BatchScores score_batch_serial(const OgdModel& model, const std::vector<IqSignal>& signals);

// Classification stage: argmax_j <w_j, embed_j(signal)>. Never mutates.
std::vector<int> predict_batch(const OgdModel& model, const LabeledBatch& batch);

struct UpdateStatus {
    bool applied = false;  // false = labels absent, update skipped
};

// Model-update stage. Samples are processed in batch order; per sample the m
// per-format updates are independent. Scores are recomputed against the
// weights as they evolve within the batch. `predictions` feeds the
// literal_ki variant; the one-vs-rest path ignores it.
UpdateStatus update_batch(OgdModel& model, const LabeledBatch& batch,
                          const std::vector<int>& predictions);

// Same update stage, reusing a score_batch result for this batch so the
// embeddings are not computed twice.
UpdateStatus update_batch_scored(OgdModel& model, const LabeledBatch& batch,
                                 const BatchScores& scored);

// One stream step: classify the whole batch, then update only if labels are
// available. Embeddings are computed once and shared by both stages.
std::pair<std::vector<int>, UpdateStatus> process_stream_step(OgdModel& model,
                                                              const LabeledBatch& batch);

// Runs the update stage over the training set chunked into batches, so the
// initial classifier is nontrivial before streaming begins.
void warm_start(OgdModel& model, const std::vector<IqSignal>& signals,
                const std::vector<int>& labels, int batch_size, int epochs);

}  // namespace amc
