#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "amc/classifier.hpp"
#include "amc/types.hpp"

namespace amc {

// Normalized magnitudes of the mixed sample moments
// M_pq = (1/L) sum s^(p-q) conj(s)^q over
// (p,q) in {(2,0),(2,1),(4,0),(4,1),(4,2),(6,0),(6,3),(8,0)},
// each divided by M_21^(p/2). Invariant to positive amplitude scaling.
inline constexpr std::size_t kMomentFeatureCount = 8;

struct MomentFeatures {
    std::array<double, kMomentFeatureCount> values{};
};

// Throws std::domain_error on a zero-power signal.
MomentFeatures extract_moments(const IqSignal& signal);

// Full-history kNN store: online retraining appends every labeled batch.
struct KnnStore {
    int k = 15;
    std::vector<MomentFeatures> features;
    std::vector<int> labels;  // format ids, parallel to features

    std::size_t size() const { return features.size(); }
};

// Majority vote among the k nearest stored examples (Euclidean distance,
// neighbor ties to the earliest insertion, vote ties to the lowest format
// id). Uses all examples while the store is smaller than k. Throws
// config_error on an empty store.
int knn_predict(const KnnStore& store, const MomentFeatures& query);

// Appends the batch's features and labels; no-op (applied=false) when the
// batch carries no labels.
UpdateStatus knn_retrain(KnnStore& store, const LabeledBatch& batch);

}  // namespace amc
