#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "amc/baselines.hpp"
#include "amc/channel.hpp"
#include "amc/constellation.hpp"
#include "amc/rng.hpp"

using namespace amc;

namespace {

// signal consisting of every table point once = the exact uniform distribution
IqSignal table_signal(const std::string& name) {
    return build_table(format_by_name(name)).points;
}

}  // namespace

TEST_CASE("fourth and eighth order moments of clean PSK match hand values") {
    // oracle: direct evaluation on the constellation tables
    const MomentFeatures bpsk = extract_moments(table_signal("BPSK"));
    CHECK(bpsk.values[2] == doctest::Approx(1.0).epsilon(1e-12));  // |M40|/M21^2
    CHECK(bpsk.values[7] == doctest::Approx(1.0).epsilon(1e-12));  // |M80|/M21^4

    const MomentFeatures qpsk = extract_moments(table_signal("QPSK"));
    CHECK(qpsk.values[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qpsk.values[7] == doctest::Approx(1.0).epsilon(1e-12));

    // 8PSK: s^4 walks the half-circle uniformly, so M40 vanishes; M80 stays 1
    const MomentFeatures psk8 = extract_moments(table_signal("8PSK"));
    CHECK(psk8.values[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psk8.values[7] == doctest::Approx(1.0).epsilon(1e-12));

    // the (2,1) feature is identically 1 by its own normalization
    CHECK(bpsk.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psk8.values[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("moment features are invariant to positive amplitude scaling") {
    const IqSignal s = apply_awgn(generate_signal(format_by_name("32QAM"), 2048, 5), 12.0, 6);
    IqSignal scaled(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) scaled[i] = 3.7 * s[i];

    const MomentFeatures a = extract_moments(s);
    const MomentFeatures b = extract_moments(scaled);
    for (std::size_t c = 0; c < kMomentFeatureCount; ++c) {
        CHECK(a.values[c] == doctest::Approx(b.values[c]).epsilon(1e-10));
    }
    for (double v : a.values) CHECK(std::isfinite(v));
}

TEST_CASE("zero-power and empty signals raise feature errors") {
    CHECK_THROWS_AS(extract_moments(IqSignal(16, ComplexSample{0.0, 0.0})), std::domain_error);
    CHECK_THROWS_AS(extract_moments(IqSignal{}), std::domain_error);
}

TEST_CASE("knn: single stored example always wins; exact match with k=1") {
    KnnStore store;
    store.k = 15;
    const MomentFeatures f = extract_moments(table_signal("16QAM"));
    store.features.push_back(f);
    store.labels.push_back(format_by_name("16QAM").id);

    const MomentFeatures probe = extract_moments(
        apply_awgn(generate_signal(format_by_name("BPSK"), 512, 7), 10.0, 8));
    CHECK(knn_predict(store, probe) == format_by_name("16QAM").id);

    KnnStore k1;
    k1.k = 1;
    LabeledBatch batch;
    for (const auto& name : {"BPSK", "QPSK", "8ASK"}) {
        batch.signals.push_back(apply_awgn(generate_signal(format_by_name(name), 512, 9), 20.0, 10));
        batch.labels.push_back(format_by_name(name).id);
    }
    CHECK(knn_retrain(k1, batch).applied);
    CHECK(k1.size() == 3);
    for (std::size_t i = 0; i < batch.signals.size(); ++i) {
        CHECK(knn_predict(k1, extract_moments(batch.signals[i])) == batch.labels[i]);
    }

    CHECK_THROWS_AS(knn_predict(KnnStore{}, probe), config_error);
}

TEST_CASE("knn separates clean BPSK from 8ASK with 100 examples per class") {
    KnnStore store;
    store.k = 15;
    Rng rng(77);
    LabeledBatch train;
    for (int i = 0; i < 100; ++i) {
        for (const auto& name : {"BPSK", "8ASK"}) {
            train.signals.push_back(apply_awgn(
                generate_signal(format_by_name(name), 1024, rng.next_u64()), 30.0,
                rng.next_u64()));
            train.labels.push_back(format_by_name(name).id);
        }
    }
    knn_retrain(store, train);

    int correct = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        const std::string name = (i % 2 == 0) ? "BPSK" : "8ASK";
        const IqSignal sig = apply_awgn(
            generate_signal(format_by_name(name), 1024, rng.next_u64()), 30.0, rng.next_u64());
        if (knn_predict(store, extract_moments(sig)) == format_by_name(name).id) correct++;
    }
    CHECK(correct >= static_cast<int>(0.99 * trials));
}

TEST_CASE("knn prediction is invariant to store permutation") {
    Rng rng(88);
    KnnStore store;
    store.k = 5;
    LabeledBatch train;
    for (int i = 0; i < 40; ++i) {
        const std::string name = (i % 2 == 0) ? "QPSK" : "16QAM";
        train.signals.push_back(apply_awgn(
            generate_signal(format_by_name(name), 512, rng.next_u64()), 15.0, rng.next_u64()));
        train.labels.push_back(format_by_name(name).id);
    }
    knn_retrain(store, train);

    KnnStore shuffled = store;
    Rng shuffle_rng(99);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
        const std::size_t j = shuffle_rng.uniform_index(i + 1);
        std::swap(shuffled.features[i], shuffled.features[j]);
        std::swap(shuffled.labels[i], shuffled.labels[j]);
    }

    for (int i = 0; i < 20; ++i) {
        const std::string name = (i % 2 == 0) ? "QPSK" : "16QAM";
        const MomentFeatures probe = extract_moments(apply_awgn(
            generate_signal(format_by_name(name), 512, rng.next_u64()), 15.0, rng.next_u64()));
        CHECK(knn_predict(store, probe) == knn_predict(shuffled, probe));
    }
}

TEST_CASE("retrain appends exactly the batch and skips unlabeled batches") {
    KnnStore store;
    store.k = 3;
    LabeledBatch batch;
    Rng rng(111);
    for (int i = 0; i < 12; ++i) {
        batch.signals.push_back(generate_signal(format_by_name("QPSK"), 128, rng.next_u64()));
        batch.labels.push_back(format_by_name("QPSK").id);
    }
    CHECK(knn_retrain(store, batch).applied);
    CHECK(store.size() == 12);

    LabeledBatch unlabeled;
    unlabeled.signals = batch.signals;
    CHECK_FALSE(knn_retrain(store, unlabeled).applied);
    CHECK(store.size() == 12);
}
