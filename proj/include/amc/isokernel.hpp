#pragma once

#include <cstdint>
#include <vector>

#include "amc/types.hpp"

namespace amc {

struct Hypersphere {
    ComplexSample center;
    double radius = 0.0;  // distance to the nearest other sampled point
};

// t random partitionings of psi hyperspheres each, fitted on the I/Q points
// of one modulation format. Immutable after fit; all queries are read-only.
struct IsolationPartitioning {
    int psi = 0;
    int t = 0;
    int source_format = -1;
    std::uint64_t seed = 0;

    // struct-of-arrays, partitioning-major: sphere (j, k) lives at j*psi + k
    std::vector<double> center_x;
    std::vector<double> center_y;
    std::vector<double> radius;
    std::vector<double> max_radius;  // per partitioning, max_k radius(j, k)

    Hypersphere sphere(int j, int k) const {
        const std::size_t i = static_cast<std::size_t>(j) * psi + k;
        return {{center_x[i], center_y[i]}, radius[i]};
    }
    std::size_t dimension() const {
        return static_cast<std::size_t>(psi) * static_cast<std::size_t>(t);
    }
};

// Sparse feature map of one point: per partitioning, the index of the owning
// sphere or kNoSphere when the point lies outside every sphere's reach.
inline constexpr std::int32_t kNoSphere = -1;

struct PointFeature {
    std::vector<std::int32_t> active;  // length t
};

// Dense mean-embedded vector of one signal; entries in [0, 1], each
// per-partitioning block sums to at most 1.
struct DistributionEmbedding {
    std::vector<double> values;  // length t*psi, partitioning-major
    int psi = 0;
    int t = 0;
    std::uint64_t sample_count = 0;
};

// Fits t partitionings, each from psi points sampled without replacement;
// a sphere's radius is the distance to its nearest sampled neighbor.
// Deterministic given seed (per-partitioning child seeds are derived, so the
// parallel and serial paths agree exactly). Throws config_error when
// points.size() < psi.
IsolationPartitioning fit(const std::vector<ComplexSample>& points, int psi,
                          int t, std::uint64_t seed);
IsolationPartitioning fit_serial(const std::vector<ComplexSample>& points,
                                 int psi, int t, std::uint64_t seed);

// Per partitioning: nearest center wins (ties to the lowest sphere index);
// outside the partitioning's max radius the point maps to kNoSphere.
PointFeature map_point(const IsolationPartitioning& p, ComplexSample x);

// Mean of map_point over the signal, expanded to the dense t*psi vector.
// `embed` parallelizes over partitionings; `embed_serial` is the reference
// path. Both accumulate integer counts, so they agree bit-exactly.
DistributionEmbedding embed(const IsolationPartitioning& p, const IqSignal& signal);
DistributionEmbedding embed_serial(const IsolationPartitioning& p, const IqSignal& signal);

// <a, b> / t. Bounded in [0, 1]; throws config_error on dimension mismatch.
double similarity(const DistributionEmbedding& a, const DistributionEmbedding& b);

// Reference embedding of one format: the partitioning fitted on that format's
// training points plus the embedding of a training signal under it.
struct FormatReference {
    ModulationFormat format;
    const IsolationPartitioning* partitioning = nullptr;
    DistributionEmbedding embedding;
};

// The argmax-over-formats diagnostic: embeds the signal under every
// reference's own partitioning and returns the most similar format.
// Ties break to the lowest format id.
ModulationFormat classify_by_similarity(const IqSignal& signal,
                                        const std::vector<FormatReference>& references);

}  // namespace amc
