#include "amc/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace amc {

namespace {

double dot(const std::vector<double>& w, const std::vector<double>& e) {
    double g = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) g += w[i] * e[i];
    return g;
}

void axpy(std::vector<double>& w, double a, const std::vector<double>& e) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += a * e[i];
}

bool is_zero(const DistributionEmbedding& e) {
    for (double v : e.values) {
        if (v != 0.0) return false;
    }
    return true;
}

int slot_of_format_id(const OgdModel& model, int format_id) {
    for (std::size_t j = 0; j < model.formats.size(); ++j) {
        if (model.formats[j].id == format_id) return static_cast<int>(j);
    }
    throw config_error("label format id " + std::to_string(format_id) +
                       " is not part of the model");
}

BatchScores score_impl(const OgdModel& model, const std::vector<IqSignal>& signals,
                       bool parallel) {
    const std::size_t n = signals.size();
    const std::size_t m = model.formats.size();

    BatchScores out;
    out.embeddings.resize(n * m);
    out.scores.resize(n * m);
    out.predictions.resize(n);

    // one (signal, format) cell per task; every write is to a distinct slot
    const std::int64_t cells = static_cast<std::int64_t>(n * m);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < cells; ++c) {
            const std::size_t i = static_cast<std::size_t>(c) / m;
            const std::size_t j = static_cast<std::size_t>(c) % m;
            out.embeddings[c] = embed_serial(model.partitionings[j], signals[i]);
            out.scores[c] = dot(model.weights[j], out.embeddings[c].values);
        }
    } else {
        for (std::int64_t c = 0; c < cells; ++c) {
            const std::size_t i = static_cast<std::size_t>(c) / m;
            const std::size_t j = static_cast<std::size_t>(c) % m;
            out.embeddings[c] = embed_serial(model.partitionings[j], signals[i]);
            out.scores[c] = dot(model.weights[j], out.embeddings[c].values);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < m; ++j) {
            if (out.scores[i * m + j] > out.scores[i * m + best]) best = j;
        }
        out.predictions[i] = model.formats[best].id;

        bool all_zero = true;
        for (std::size_t j = 0; j < m && all_zero; ++j) {
            all_zero = is_zero(out.embeddings[i * m + j]);
        }
        if (all_zero) out.zero_embedding_count++;
    }
    return out;
}

// Update stage over precomputed embeddings. Samples run in batch order; the
// m per-format updates within one sample touch disjoint weight vectors.
// Margins are checked against the weights as they evolve within the batch.
void apply_updates(OgdModel& model, const LabeledBatch& batch,
                   const std::vector<int>& predictions,
                   const std::vector<DistributionEmbedding>& embeddings) {
    const std::size_t n = batch.signals.size();
    const std::size_t m = model.formats.size();
    const double eta = model.learning_rate;

    std::vector<int> slots(n);
    for (std::size_t i = 0; i < n; ++i) slots[i] = slot_of_format_id(model, batch.labels[i]);

    for (std::size_t i = 0; i < n; ++i) {
        if (model.loss == LossVariant::one_vs_rest_hinge) {
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j) {
                const auto& e = embeddings[i * m + static_cast<std::size_t>(j)];
                const double y = (slots[i] == j) ? 1.0 : -1.0;
                const double g = dot(model.weights[static_cast<std::size_t>(j)], e.values);
                if (y * g < 1.0) {
                    axpy(model.weights[static_cast<std::size_t>(j)], eta * y, e.values);
                }
            }
        } else {
            // Algorithm-literal variant: one shared sign per sample
            const double k = (predictions[i] == batch.labels[i]) ? 1.0 : -1.0;
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < static_cast<std::int64_t>(m); ++j) {
                const auto& e = embeddings[i * m + static_cast<std::size_t>(j)];
                const double g = dot(model.weights[static_cast<std::size_t>(j)], e.values);
                if (k * g < 1.0) {
                    // -eta * dL/dg * k = eta * k^2 = eta
                    axpy(model.weights[static_cast<std::size_t>(j)], eta, e.values);
                }
            }
        }
    }
}

void check_batch_labels(const OgdModel& model, const LabeledBatch& batch,
                        const std::vector<int>& predictions) {
    if (batch.labels.size() != batch.signals.size()) {
        throw config_error("update_batch: labels and signals sizes differ");
    }
    if (model.loss == LossVariant::literal_ki_hinge &&
        predictions.size() != batch.signals.size()) {
        throw config_error("update_batch: literal_ki loss needs one prediction per signal");
    }
}

}  // namespace

OgdModel init_model(std::vector<ModulationFormat> formats,
                    std::vector<IsolationPartitioning> partitionings,
                    double learning_rate, LossVariant loss) {
    if (formats.empty()) throw config_error("init_model: no formats");
    if (formats.size() != partitionings.size()) {
        throw config_error("init_model: " + std::to_string(formats.size()) +
                           " formats vs " + std::to_string(partitionings.size()) +
                           " partitionings");
    }
    OgdModel model;
    model.formats = std::move(formats);
    model.partitionings = std::move(partitionings);
    model.learning_rate = learning_rate;
    model.loss = loss;
    model.weights.resize(model.formats.size());
    for (std::size_t j = 0; j < model.formats.size(); ++j) {
        model.weights[j].assign(model.partitionings[j].dimension(), 0.0);
    }
    return model;
}

BatchScores score_batch(const OgdModel& model, const std::vector<IqSignal>& signals) {
    return score_impl(model, signals, true);
}

BatchScores score_batch_serial(const OgdModel& model, const std::vector<IqSignal>& signals) {
    return score_impl(model, signals, false);
}

std::vector<int> predict_batch(const OgdModel& model, const LabeledBatch& batch) {
    if (batch.signals.empty()) return {};
    return score_batch(model, batch.signals).predictions;
}

UpdateStatus update_batch(OgdModel& model, const LabeledBatch& batch,
                          const std::vector<int>& predictions) {
    if (!batch.has_labels()) return {false};
    check_batch_labels(model, batch, predictions);

    const std::size_t n = batch.signals.size();
    const std::size_t m = model.formats.size();
    std::vector<DistributionEmbedding> embeddings(n * m);
    const std::int64_t cells = static_cast<std::int64_t>(n * m);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cells; ++c) {
        const std::size_t i = static_cast<std::size_t>(c) / m;
        const std::size_t j = static_cast<std::size_t>(c) % m;
        embeddings[c] = embed_serial(model.partitionings[j], batch.signals[i]);
    }

    apply_updates(model, batch, predictions, embeddings);
    return {true};
}

UpdateStatus update_batch_scored(OgdModel& model, const LabeledBatch& batch,
                                 const BatchScores& scored) {
    if (!batch.has_labels()) return {false};
    check_batch_labels(model, batch, scored.predictions);
    apply_updates(model, batch, scored.predictions, scored.embeddings);
    return {true};
}

std::pair<std::vector<int>, UpdateStatus> process_stream_step(OgdModel& model,
                                                              const LabeledBatch& batch) {
    if (batch.signals.empty()) return {{}, {false}};

    BatchScores scored = score_batch(model, batch.signals);
    const UpdateStatus status = update_batch_scored(model, batch, scored);
    return {std::move(scored.predictions), status};
}

void warm_start(OgdModel& model, const std::vector<IqSignal>& signals,
                const std::vector<int>& labels, int batch_size, int epochs) {
    if (signals.size() != labels.size()) {
        throw config_error("warm_start: labels and signals sizes differ");
    }
    if (batch_size < 1) throw config_error("warm_start: batch_size must be >= 1");

    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t start = 0; start < signals.size();
             start += static_cast<std::size_t>(batch_size)) {
            const std::size_t stop =
                std::min(signals.size(), start + static_cast<std::size_t>(batch_size));
            LabeledBatch chunk;
            chunk.signals.assign(signals.begin() + start, signals.begin() + stop);
            chunk.labels.assign(labels.begin() + start, labels.begin() + stop);
            process_stream_step(model, chunk);
        }
    }
}

}  // namespace amc
