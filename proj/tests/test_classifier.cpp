#include <doctest.h>

#include <cmath>

#include "amc/channel.hpp"
#include "amc/classifier.hpp"
#include "amc/constellation.hpp"
#include "amc/rng.hpp"

using namespace amc;

namespace {

struct Fixture {
    std::vector<ModulationFormat> formats;
    std::vector<IqSignal> train_signals;  // one per format
    OgdModel model;
};

Fixture make_fixture(const std::vector<std::string>& names, double snr_db,
                     std::uint64_t seed, int length = 256, int psi = 16, int t = 8,
                     double eta = 0.01,
                     LossVariant loss = LossVariant::one_vs_rest_hinge) {
    Fixture fx;
    std::vector<IsolationPartitioning> parts;
    for (std::size_t f = 0; f < names.size(); ++f) {
        const ModulationFormat& fmt = format_by_name(names[f]);
        fx.formats.push_back(fmt);
        IqSignal sig = apply_awgn(
            generate_signal(fmt, static_cast<std::size_t>(length), mix_seed(seed, 2 * f)),
            snr_db, mix_seed(seed, 2 * f + 1));
        parts.push_back(fit(sig, psi, t, mix_seed(seed, 100 + f)));
        parts.back().source_format = fmt.id;
        fx.train_signals.push_back(std::move(sig));
    }
    fx.model = init_model(fx.formats, std::move(parts), eta, loss);
    return fx;
}

LabeledBatch one_signal_batch(const IqSignal& sig, int label) {
    LabeledBatch b;
    b.signals.push_back(sig);
    b.labels.push_back(label);
    return b;
}

}  // namespace

TEST_CASE("init_model: zero weights, fresh model predicts the lowest format id") {
    Fixture fx = make_fixture({"QPSK", "16QAM"}, 20.0, 7);
    for (const auto& w : fx.model.weights) {
        for (double v : w) CHECK(v == 0.0);
    }
    LabeledBatch batch;
    batch.signals.push_back(fx.train_signals[1]);
    const auto preds = predict_batch(fx.model, batch);
    REQUIRE(preds.size() == 1);
    CHECK(preds[0] == fx.formats[0].id);  // all scores 0, tie-break

    CHECK_THROWS_AS(init_model({fx.formats[0]}, {}, 0.01), config_error);
}

TEST_CASE("single-sample update from the zero model moves each weight by eta") {
    Fixture fx = make_fixture({"BPSK", "8PSK", "16QAM"}, 20.0, 11);
    const int true_id = fx.formats[1].id;
    LabeledBatch batch = one_signal_batch(fx.train_signals[1], true_id);

    // oracle: at g = 0 every hinge is active, so w_j = eta * y_j * e_j exactly
    std::vector<DistributionEmbedding> expected;
    for (std::size_t j = 0; j < 3; ++j) {
        expected.push_back(embed_serial(fx.model.partitionings[j], batch.signals[0]));
    }

    auto [preds, status] = process_stream_step(fx.model, batch);
    CHECK(status.applied);
    for (std::size_t j = 0; j < 3; ++j) {
        const double y = (fx.formats[j].id == true_id) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < fx.model.weights[j].size(); ++i) {
            CHECK(fx.model.weights[j][i] ==
                  fx.model.learning_rate * y * expected[j].values[i]);
        }
    }
}

TEST_CASE("update is a no-op when every margin is already satisfied") {
    Fixture fx = make_fixture({"BPSK", "QPSK"}, 25.0, 13);
    // pooled fit keeps both embeddings of the probe signal nonzero, so both
    // margins can be constructed
    IqSignal pooled = fx.train_signals[0];
    pooled.insert(pooled.end(), fx.train_signals[1].begin(), fx.train_signals[1].end());
    fx.model.partitionings[0] = fit(pooled, 16, 8, 130);
    fx.model.partitionings[1] = fit(pooled, 16, 8, 131);
    const LabeledBatch batch = one_signal_batch(fx.train_signals[0], fx.formats[0].id);
    const DistributionEmbedding e0 = embed_serial(fx.model.partitionings[0], batch.signals[0]);
    const DistributionEmbedding e1 = embed_serial(fx.model.partitionings[1], batch.signals[0]);

    // construct weights with y*g comfortably > 1 for both scorers
    double n0 = 0, n1 = 0;
    for (double v : e0.values) n0 += v * v;
    for (double v : e1.values) n1 += v * v;
    REQUIRE(n0 > 0);
    REQUIRE(n1 > 0);
    for (std::size_t i = 0; i < e0.values.size(); ++i) {
        fx.model.weights[0][i] = 2.0 * e0.values[i] / n0;  // g0 = 2, y = +1
    }
    for (std::size_t i = 0; i < e1.values.size(); ++i) {
        fx.model.weights[1][i] = -2.0 * e1.values[i] / n1;  // g1 = -2, y = -1
    }

    const auto before = fx.model.weights;
    update_batch(fx.model, batch, {fx.formats[0].id});
    CHECK(fx.model.weights == before);
}

TEST_CASE("constructed argmax: weights aligned with a format's embedding win") {
    Fixture fx = make_fixture({"QPSK", "32QAM"}, 20.0, 17);
    const DistributionEmbedding e =
        embed_serial(fx.model.partitionings[1], fx.train_signals[1]);
    fx.model.weights[1] = e.values;

    LabeledBatch batch;
    batch.signals.push_back(fx.train_signals[1]);
    CHECK(predict_batch(fx.model, batch)[0] == fx.formats[1].id);

    SUBCASE("prediction is invariant to positive weight rescaling") {
        OgdModel scaled = fx.model;
        for (auto& w : scaled.weights) {
            for (double& v : w) v *= 13.7;
        }
        LabeledBatch probe;
        for (int i = 0; i < 8; ++i) {
            probe.signals.push_back(apply_awgn(fx.train_signals[static_cast<std::size_t>(i % 2)],
                                               15.0, 500 + static_cast<std::uint64_t>(i)));
        }
        CHECK(predict_batch(fx.model, probe) == predict_batch(scaled, probe));
    }
}

TEST_CASE("prediction stage never mutates the model") {
    Fixture fx = make_fixture({"BPSK", "QPSK", "8PSK"}, 15.0, 19);
    warm_start(fx.model, fx.train_signals,
               {fx.formats[0].id, fx.formats[1].id, fx.formats[2].id}, 2, 1);
    const auto snapshot = fx.model.weights;

    LabeledBatch batch;
    for (int i = 0; i < 5; ++i) {
        batch.signals.push_back(
            apply_awgn(fx.train_signals[static_cast<std::size_t>(i % 3)], 15.0,
                       600 + static_cast<std::uint64_t>(i)));
    }
    (void)predict_batch(fx.model, batch);
    CHECK(fx.model.weights == snapshot);
}

TEST_CASE("empty batch predicts nothing and mismatched labels are rejected") {
    Fixture fx = make_fixture({"BPSK", "QPSK"}, 20.0, 53);
    CHECK(predict_batch(fx.model, LabeledBatch{}).empty());

    LabeledBatch bad;
    bad.signals.push_back(fx.train_signals[0]);
    bad.labels = {fx.formats[0].id, fx.formats[1].id};  // 2 labels, 1 signal
    CHECK_THROWS_AS(update_batch(fx.model, bad, {}), config_error);

    LabeledBatch foreign;
    foreign.signals.push_back(fx.train_signals[0]);
    foreign.labels = {format_by_name("64QAM").id};  // not in this model
    CHECK_THROWS_AS(update_batch(fx.model, foreign, {}), config_error);
}

TEST_CASE("labels withheld: process_stream_step leaves the model bit-identical") {
    Fixture fx = make_fixture({"QPSK", "16APSK"}, 18.0, 23);
    warm_start(fx.model, fx.train_signals, {fx.formats[0].id, fx.formats[1].id}, 2, 1);
    const auto snapshot = fx.model.weights;

    LabeledBatch unlabeled;
    unlabeled.signals.push_back(fx.train_signals[0]);
    unlabeled.signals.push_back(fx.train_signals[1]);
    auto [preds, status] = process_stream_step(fx.model, unlabeled);
    CHECK_FALSE(status.applied);
    CHECK(preds.size() == 2);
    CHECK(fx.model.weights == snapshot);

    CHECK_FALSE(update_batch(fx.model, unlabeled, preds).applied);
    CHECK(fx.model.weights == snapshot);
}

TEST_CASE("eta = 0 updates are a no-op; eta doubling doubles the first step") {
    Fixture zero = make_fixture({"BPSK", "QPSK"}, 20.0, 29, 256, 16, 8, 0.0);
    const LabeledBatch batch = one_signal_batch(zero.train_signals[0], zero.formats[0].id);
    update_batch(zero.model, batch, {zero.formats[0].id});
    for (const auto& w : zero.model.weights) {
        for (double v : w) CHECK(v == 0.0);
    }

    Fixture small = make_fixture({"BPSK", "QPSK"}, 20.0, 29, 256, 16, 8, 0.01);
    Fixture big = make_fixture({"BPSK", "QPSK"}, 20.0, 29, 256, 16, 8, 0.02);
    update_batch(small.model, batch, {small.formats[0].id});
    update_batch(big.model, batch, {big.formats[0].id});
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < small.model.weights[j].size(); ++i) {
            CHECK(big.model.weights[j][i] == 2.0 * small.model.weights[j][i]);
        }
    }
}

TEST_CASE("repeated updates on a separable two-format batch reach 100% accuracy") {
    Fixture fx = make_fixture({"BPSK", "8ASK"}, 30.0, 31, 256, 24, 10, 0.05);
    LabeledBatch batch;
    Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        const std::size_t f = i % 2;
        batch.signals.push_back(apply_awgn(
            generate_signal(fx.formats[f], 256, rng.next_u64()), 30.0, rng.next_u64()));
        batch.labels.push_back(fx.formats[f].id);
    }

    bool perfect = false;
    for (int pass = 0; pass < 50 && !perfect; ++pass) {
        auto [preds, status] = process_stream_step(fx.model, batch);
        REQUIRE(status.applied);
        perfect = (preds == batch.labels);
    }
    // one final prediction-only check after the last update
    if (!perfect) perfect = (predict_batch(fx.model, batch) == batch.labels);
    CHECK(perfect);
}

TEST_CASE("a second identical labeled batch is classified at least as well") {
    int improved_or_equal = 0;
    const int trials = 60;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = mix_seed(0xAB5, static_cast<std::uint64_t>(trial));
        Fixture fx = make_fixture({"QPSK", "8PSK", "16QAM"}, 15.0, seed, 192, 16, 8, 0.02);
        LabeledBatch batch;
        Rng rng(mix_seed(seed, 999));
        for (int i = 0; i < 30; ++i) {
            const std::size_t f = static_cast<std::size_t>(i) % 3;
            batch.signals.push_back(apply_awgn(
                generate_signal(fx.formats[f], 192, rng.next_u64()), 15.0, rng.next_u64()));
            batch.labels.push_back(fx.formats[f].id);
        }
        auto acc = [&](const std::vector<int>& preds) {
            int c = 0;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                if (preds[i] == batch.labels[i]) c++;
            }
            return c;
        };
        auto [p1, s1] = process_stream_step(fx.model, batch);
        auto [p2, s2] = process_stream_step(fx.model, batch);
        if (acc(p2) >= acc(p1)) improved_or_equal++;
    }
    CHECK(improved_or_equal >= 57);  // 95% of trials
}

TEST_CASE("process_stream_step is deterministic given model state and batch") {
    Fixture a = make_fixture({"QPSK", "64QAM"}, 14.0, 37);
    Fixture b = make_fixture({"QPSK", "64QAM"}, 14.0, 37);
    LabeledBatch batch;
    Rng rng(81);
    for (int i = 0; i < 6; ++i) {
        const std::size_t f = static_cast<std::size_t>(i) % 2;
        batch.signals.push_back(apply_awgn(
            generate_signal(a.formats[f], 256, rng.next_u64()), 14.0, rng.next_u64()));
        batch.labels.push_back(a.formats[f].id);
    }
    auto [pa, sa] = process_stream_step(a.model, batch);
    auto [pb, sb] = process_stream_step(b.model, batch);
    CHECK(pa == pb);
    CHECK(a.model.weights == b.model.weights);
}

TEST_CASE("score_batch parallel and serial paths agree bit-exactly") {
    Fixture fx = make_fixture({"BPSK", "QPSK", "8PSK", "16QAM"}, 15.0, 41);
    warm_start(fx.model, fx.train_signals,
               {fx.formats[0].id, fx.formats[1].id, fx.formats[2].id, fx.formats[3].id}, 2, 1);
    std::vector<IqSignal> signals;
    Rng rng(91);
    for (int i = 0; i < 10; ++i) {
        signals.push_back(apply_awgn(
            generate_signal(fx.formats[static_cast<std::size_t>(i) % 4], 256, rng.next_u64()),
            15.0, rng.next_u64()));
    }
    const BatchScores par = score_batch(fx.model, signals);
    const BatchScores ser = score_batch_serial(fx.model, signals);
    CHECK(par.scores == ser.scores);
    CHECK(par.predictions == ser.predictions);
    CHECK(par.zero_embedding_count == ser.zero_embedding_count);
    for (std::size_t i = 0; i < par.embeddings.size(); ++i) {
        CHECK(par.embeddings[i].values == ser.embeddings[i].values);
    }
}

TEST_CASE("literal k_i variant: one shared sign drives all per-format updates") {
    Fixture fx = make_fixture({"BPSK", "QPSK"}, 20.0, 43, 256, 16, 8, 0.01,
                              LossVariant::literal_ki_hinge);
    const LabeledBatch batch = one_signal_batch(fx.train_signals[0], fx.formats[0].id);
    std::vector<DistributionEmbedding> expected;
    for (std::size_t j = 0; j < 2; ++j) {
        expected.push_back(embed_serial(fx.model.partitionings[j], batch.signals[0]));
    }

    // zero model predicts format 0 which is correct, so k = +1 and the
    // condition k*g = 0 < 1 holds: every w_j moves by +eta * e_j
    auto [preds, status] = process_stream_step(fx.model, batch);
    REQUIRE(status.applied);
    REQUIRE(preds[0] == fx.formats[0].id);
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < expected[j].values.size(); ++i) {
            CHECK(fx.model.weights[j][i] == 0.01 * expected[j].values[i]);
        }
    }
}

TEST_CASE("warm start equals one manual pass of the update stage") {
    Fixture fx = make_fixture({"QPSK", "16QAM"}, 15.0, 47);
    Fixture manual = make_fixture({"QPSK", "16QAM"}, 15.0, 47);

    std::vector<IqSignal> train;
    std::vector<int> labels;
    Rng rng(101);
    for (int i = 0; i < 7; ++i) {  // odd size: exercises the partial final chunk
        const std::size_t f = static_cast<std::size_t>(i) % 2;
        train.push_back(apply_awgn(generate_signal(fx.formats[f], 256, rng.next_u64()),
                                   15.0, rng.next_u64()));
        labels.push_back(fx.formats[f].id);
    }

    warm_start(fx.model, train, labels, 3, 1);

    for (std::size_t start = 0; start < train.size(); start += 3) {
        const std::size_t stop = std::min(train.size(), start + 3);
        LabeledBatch chunk;
        chunk.signals.assign(train.begin() + static_cast<std::ptrdiff_t>(start),
                             train.begin() + static_cast<std::ptrdiff_t>(stop));
        chunk.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(start),
                            labels.begin() + static_cast<std::ptrdiff_t>(stop));
        process_stream_step(manual.model, chunk);
    }
    CHECK(fx.model.weights == manual.model.weights);
}
