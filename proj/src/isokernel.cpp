#include "amc/isokernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "amc/rng.hpp"

namespace amc {

namespace {

// Samples psi distinct indices from [0, n) in insertion order (Floyd).
std::vector<std::size_t> sample_without_replacement(std::size_t n, int psi, Rng& rng) {
    std::vector<std::size_t> picked;
    picked.reserve(static_cast<std::size_t>(psi));
    std::unordered_set<std::size_t> seen;
    for (std::size_t i = n - static_cast<std::size_t>(psi); i < n; ++i) {
        const std::size_t j = rng.uniform_index(i + 1);
        if (seen.insert(j).second) {
            picked.push_back(j);
        } else {
            seen.insert(i);
            picked.push_back(i);
        }
    }
    return picked;
}

// Builds partitioning j of `out` from its own child seed, so construction
// order never depends on the thread schedule.
void fit_one(const std::vector<ComplexSample>& points, int psi, std::uint64_t part_seed,
             int j, IsolationPartitioning& out) {
    Rng rng(part_seed);
    const std::vector<std::size_t> idx = sample_without_replacement(points.size(), psi, rng);

    const std::size_t base = static_cast<std::size_t>(j) * psi;
    for (int k = 0; k < psi; ++k) {
        out.center_x[base + k] = points[idx[k]].real();
        out.center_y[base + k] = points[idx[k]].imag();
    }

    double max_r = 0.0;
    for (int a = 0; a < psi; ++a) {
        double best = std::numeric_limits<double>::infinity();
        for (int b = 0; b < psi; ++b) {
            if (b == a) continue;
            const double dx = out.center_x[base + a] - out.center_x[base + b];
            const double dy = out.center_y[base + a] - out.center_y[base + b];
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) best = d2;
        }
        const double r = std::sqrt(best);
        out.radius[base + a] = r;
        if (r > max_r) max_r = r;
    }
    out.max_radius[static_cast<std::size_t>(j)] = max_r;
}

IsolationPartitioning fit_impl(const std::vector<ComplexSample>& points, int psi,
                               int t, std::uint64_t seed, bool parallel) {
    if (psi < 2) throw config_error("fit: psi must be >= 2, got " + std::to_string(psi));
    if (t < 1) throw config_error("fit: t must be >= 1, got " + std::to_string(t));
    if (points.size() < static_cast<std::size_t>(psi)) {
        throw config_error("fit: need at least " + std::to_string(psi) +
                           " points (psi), got " + std::to_string(points.size()));
    }

    IsolationPartitioning p;
    p.psi = psi;
    p.t = t;
    p.seed = seed;
    p.center_x.resize(p.dimension());
    p.center_y.resize(p.dimension());
    p.radius.resize(p.dimension());
    p.max_radius.resize(static_cast<std::size_t>(t));

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < t; ++j) {
            fit_one(points, psi, mix_seed(seed, static_cast<std::uint64_t>(j)), j, p);
        }
    } else {
        for (int j = 0; j < t; ++j) {
            fit_one(points, psi, mix_seed(seed, static_cast<std::uint64_t>(j)), j, p);
        }
    }
    return p;
}

// Owning sphere of x in partitioning j, or kNoSphere. Nearest center wins;
// equal distances keep the lowest index.
std::int32_t owner_in_partitioning(const IsolationPartitioning& p, int j,
                                   double x, double y) {
    const std::size_t base = static_cast<std::size_t>(j) * p.psi;
    double best = std::numeric_limits<double>::infinity();
    std::int32_t best_k = 0;
    for (int k = 0; k < p.psi; ++k) {
        const double dx = x - p.center_x[base + k];
        const double dy = y - p.center_y[base + k];
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) {
            best = d2;
            best_k = k;
        }
    }
    if (std::sqrt(best) > p.max_radius[static_cast<std::size_t>(j)]) return kNoSphere;
    return best_k;
}

void embed_block(const IsolationPartitioning& p, int j, const IqSignal& signal,
                 std::uint32_t* counts) {
    for (const auto& s : signal) {
        const std::int32_t k = owner_in_partitioning(p, j, s.real(), s.imag());
        if (k != kNoSphere) counts[k]++;
    }
}

DistributionEmbedding embed_impl(const IsolationPartitioning& p, const IqSignal& signal,
                                 bool parallel) {
    DistributionEmbedding e;
    e.psi = p.psi;
    e.t = p.t;
    e.sample_count = signal.size();
    e.values.assign(p.dimension(), 0.0);

    std::vector<std::uint32_t> counts(p.dimension(), 0);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < p.t; ++j) {
            embed_block(p, j, signal, counts.data() + static_cast<std::size_t>(j) * p.psi);
        }
    } else {
        for (int j = 0; j < p.t; ++j) {
            embed_block(p, j, signal, counts.data() + static_cast<std::size_t>(j) * p.psi);
        }
    }

    const double inv = 1.0 / static_cast<double>(signal.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        e.values[i] = static_cast<double>(counts[i]) * inv;
    }
    return e;
}

}  // namespace

IsolationPartitioning fit(const std::vector<ComplexSample>& points, int psi, int t,
                          std::uint64_t seed) {
    return fit_impl(points, psi, t, seed, true);
}

IsolationPartitioning fit_serial(const std::vector<ComplexSample>& points, int psi,
                                 int t, std::uint64_t seed) {
    return fit_impl(points, psi, t, seed, false);
}

PointFeature map_point(const IsolationPartitioning& p, ComplexSample x) {
    PointFeature f;
    f.active.resize(static_cast<std::size_t>(p.t));
    for (int j = 0; j < p.t; ++j) {
        f.active[static_cast<std::size_t>(j)] = owner_in_partitioning(p, j, x.real(), x.imag());
    }
    return f;
}

DistributionEmbedding embed(const IsolationPartitioning& p, const IqSignal& signal) {
    if (signal.empty()) throw config_error("embed: empty signal");
    return embed_impl(p, signal, true);
}

DistributionEmbedding embed_serial(const IsolationPartitioning& p, const IqSignal& signal) {
    if (signal.empty()) throw config_error("embed: empty signal");
    return embed_impl(p, signal, false);
}

double similarity(const DistributionEmbedding& a, const DistributionEmbedding& b) {
    if (a.values.size() != b.values.size() || a.psi != b.psi || a.t != b.t) {
        throw config_error("similarity: embedding dimensions differ");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    return dot / static_cast<double>(a.t);
}

ModulationFormat classify_by_similarity(const IqSignal& signal,
                                        const std::vector<FormatReference>& references) {
    if (references.empty()) throw config_error("classify_by_similarity: no references");

    double best_sim = -1.0;
    const ModulationFormat* best_format = nullptr;
    for (const auto& ref : references) {
        const DistributionEmbedding e = embed(*ref.partitioning, signal);
        const double sim = similarity(e, ref.embedding);
        if (best_format == nullptr || sim > best_sim ||
            (sim == best_sim && ref.format.id < best_format->id)) {
            best_sim = sim;
            best_format = &ref.format;
        }
    }
    return *best_format;
}

}  // namespace amc
