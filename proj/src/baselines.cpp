#include "amc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace amc {

MomentFeatures extract_moments(const IqSignal& signal) {
    if (signal.empty()) throw std::domain_error("extract_moments: empty signal");

    // accumulate the mixed moments M_pq = mean(s^(p-q) * conj(s)^q)
    ComplexSample m20{}, m40{}, m41{}, m60{}, m80{};
    double m21 = 0.0, m42 = 0.0, m63 = 0.0;
    for (const auto& s : signal) {
        const ComplexSample s2 = s * s;
        const ComplexSample s4 = s2 * s2;
        const double power = std::norm(s);  // s * conj(s)

        m20 += s2;
        m21 += power;
        m40 += s4;
        m41 += s2 * power;            // s^3 conj(s)
        m42 += power * power;         // s^2 conj(s)^2 = |s|^4
        m60 += s4 * s2;
        m63 += power * power * power;  // |s|^6
        m80 += s4 * s4;
    }
    const double inv = 1.0 / static_cast<double>(signal.size());
    m20 *= inv;
    m21 *= inv;
    m40 *= inv;
    m41 *= inv;
    m42 *= inv;
    m60 *= inv;
    m63 *= inv;
    m80 *= inv;

    if (!(m21 > 0.0)) throw std::domain_error("extract_moments: zero-power signal");

    const double p1 = m21;             // M_21^(2/2)
    const double p2 = m21 * m21;       // M_21^(4/2)
    const double p3 = p2 * m21;        // M_21^(6/2)
    const double p4 = p2 * p2;         // M_21^(8/2)

    MomentFeatures f;
    f.values = {
        std::abs(m20) / p1,  // (2,0)
        m21 / p1,            // (2,1), identically 1 by construction
        std::abs(m40) / p2,  // (4,0)
        std::abs(m41) / p2,  // (4,1)
        m42 / p2,            // (4,2), real and nonnegative
        std::abs(m60) / p3,  // (6,0)
        m63 / p3,            // (6,3), real and nonnegative
        std::abs(m80) / p4,  // (8,0)
    };
    return f;
}

int knn_predict(const KnnStore& store, const MomentFeatures& query) {
    if (store.size() == 0) throw config_error("knn_predict: empty store");
    if (store.k < 1) throw config_error("knn_predict: k must be >= 1");

    const std::size_t n = store.size();
    const std::size_t k = std::min(static_cast<std::size_t>(store.k), n);

    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < kMomentFeatureCount; ++c) {
            const double d = store.features[i].values[c] - query.values[c];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    // neighbor ties resolve to the earliest insertion via the index component
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     dist.end());
    std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));

    std::map<int, int> votes;
    for (std::size_t i = 0; i < k; ++i) votes[store.labels[dist[i].second]]++;

    int best_label = votes.begin()->first;
    int best_count = votes.begin()->second;
    for (const auto& [label, count] : votes) {
        if (count > best_count) {  // map iterates labels ascending, ties keep lowest
            best_label = label;
            best_count = count;
        }
    }
    return best_label;
}

UpdateStatus knn_retrain(KnnStore& store, const LabeledBatch& batch) {
    if (!batch.has_labels()) return {false};
    if (batch.labels.size() != batch.signals.size()) {
        throw config_error("knn_retrain: labels and signals sizes differ");
    }
    for (std::size_t i = 0; i < batch.signals.size(); ++i) {
        store.features.push_back(extract_moments(batch.signals[i]));
        store.labels.push_back(batch.labels[i]);
    }
    return {true};
}

}  // namespace amc
