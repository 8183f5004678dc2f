// amc: dataset generation, model fitting, stream experiments, and
// diagnostics for online modulation classification.
//
// Exit codes: 0 success, 2 usage/config error, 1 internal error.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amc/baselines.hpp"
#include "amc/channel.hpp"
#include "amc/classifier.hpp"
#include "amc/constellation.hpp"
#include "amc/dataset_io.hpp"
#include "amc/harness.hpp"
#include "amc/isokernel.hpp"
#include "amc/model_io.hpp"
#include "amc/rng.hpp"

namespace fs = std::filesystem;
using namespace amc;

namespace {

ValueRange to_range(const std::vector<double>& v, const std::string& flag) {
    if (v.size() == 1) return {v[0], v[0]};
    if (v.size() == 2) {
        if (v[0] > v[1]) throw config_error(flag + ": lo exceeds hi");
        return {v[0], v[1]};
    }
    throw config_error(flag + ": expected one value or lo,hi");
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw config_error("write failed: " + path.string());
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    std::vector<std::string> formats;
    int n = 0;
    int length = 1024;
    std::vector<double> snr{100.0};
    std::vector<double> phase_noise{-9999.0};
    std::vector<double> iq_imbalance{0.0};
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen(const GenArgs& args) {
    if (args.n < 1) throw config_error("--n: must be >= 1");
    const ValueRange snr = to_range(args.snr, "--snr");
    const ValueRange pn = to_range(args.phase_noise, "--phase-noise");
    const ValueRange iq = to_range(args.iq_imbalance, "--iq-imbalance");

    Dataset dataset;
    for (const auto& name : args.formats) dataset.formats.push_back(format_by_name(name));
    dataset.signal_length = static_cast<std::uint32_t>(args.length);

    Rng rng(args.seed);
    std::map<int, int> per_format;
    for (int i = 0; i < args.n; ++i) {
        const auto& fmt = dataset.formats[rng.uniform_index(dataset.formats.size())];
        ChannelCondition cond;
        cond.snr_db = rng.uniform(snr.lo, snr.hi);
        cond.phase_noise_dbc_hz = rng.uniform(pn.lo, pn.hi);
        cond.iq_imbalance_db = rng.uniform(iq.lo, iq.hi);
        IqSignal clean = generate_signal(fmt, static_cast<std::size_t>(args.length),
                                         rng.next_u64());
        dataset.records.push_back(make_dataset_record(
            static_cast<std::uint8_t>(fmt.id), cond,
            apply_condition(clean, cond, rng.next_u64())));
        per_format[fmt.id]++;
    }
    write_dataset(args.out, dataset);

    std::printf("wrote %s: %d records, L=%d, m=%zu\n", args.out.c_str(), args.n,
                args.length, dataset.formats.size());
    for (const auto& fmt : dataset.formats) {
        std::printf("  %-7s %d\n", fmt.name.c_str(), per_format[fmt.id]);
    }
    std::printf("  snr_db [%g, %g]  phase_noise_dbc_hz [%g, %g]  iq_imbalance_db [%g, %g]\n",
                snr.lo, snr.hi, pn.lo, pn.hi, iq.lo, iq.hi);
    return 0;
}

// --- fit -------------------------------------------------------------------

struct FitArgs {
    std::string data;
    std::string out_dir;
    int psi = 128;
    int t = 75;
    double eta = 0.01;
    int warm_epochs = 1;
    int batch_size = 100;
    std::string loss = "one_vs_rest";
    std::uint64_t seed = 1;
};

int cmd_fit(const FitArgs& args) {
    const Dataset dataset = read_dataset(args.data);
    if (dataset.records.empty()) throw config_error("dataset has no records: " + args.data);

    LossVariant loss = LossVariant::one_vs_rest_hinge;
    if (args.loss == "literal_ki") {
        loss = LossVariant::literal_ki_hinge;
    } else if (args.loss != "one_vs_rest") {
        throw config_error("--loss: expected one_vs_rest or literal_ki");
    }

    std::vector<IqSignal> signals;
    std::vector<int> labels;
    for (const auto& rec : dataset.records) {
        signals.push_back(rec.samples);
        labels.push_back(rec.format_id);
    }

    std::vector<IsolationPartitioning> parts(dataset.formats.size());
    for (std::size_t j = 0; j < dataset.formats.size(); ++j) {
        std::vector<ComplexSample> pooled;
        for (std::size_t i = 0; i < signals.size(); ++i) {
            if (labels[i] != dataset.formats[j].id) continue;
            pooled.insert(pooled.end(), signals[i].begin(), signals[i].end());
        }
        parts[j] = fit(pooled, args.psi, args.t, mix_seed(args.seed, 100 + j));
        parts[j].source_format = dataset.formats[j].id;
    }

    OgdModel model = init_model(dataset.formats, std::move(parts), args.eta, loss);
    warm_start(model, signals, labels, args.batch_size, args.warm_epochs);

    fs::create_directories(args.out_dir);
    std::vector<std::string> part_paths;
    for (std::size_t j = 0; j < model.formats.size(); ++j) {
        const std::string rel = "partitioning_" + model.formats[j].name + ".amcp";
        write_partitioning((fs::path(args.out_dir) / rel).string(), model.partitionings[j]);
        part_paths.push_back(rel);
    }
    const fs::path model_path = fs::path(args.out_dir) / "model.amcm";
    write_model(model_path.string(), model, part_paths);

    std::printf("fitted %zu formats from %zu signals (psi=%d, t=%d, eta=%g, %d warm epoch%s)\n",
                model.formats.size(), signals.size(), args.psi, args.t, args.eta,
                args.warm_epochs, args.warm_epochs == 1 ? "" : "s");
    std::printf("wrote %s and %zu partitioning files\n", model_path.string().c_str(),
                part_paths.size());
    return 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
    std::string config_path;
    std::string out_dir = ".";
    int trials_override = -1;
    long long seed_override = -1;
};

int cmd_run(const RunArgs& args) {
    ExperimentConfig config = load_config(args.config_path);
    if (args.trials_override > 0) config.trials = args.trials_override;
    if (args.seed_override >= 0) config.seed = static_cast<std::uint64_t>(args.seed_override);
    validate(config);

    const MetricsLog log = run_experiment(config);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_file(dir / "metrics.csv", metrics_csv(log));
    write_file(dir / "confusion.csv", confusion_csv(log));
    write_file(dir / "timings.csv", timings_csv(log));
    write_file(dir / "summary.csv", summary_csv(log, config.summary_window));

    nlohmann::json manifest;
    manifest["command"] = "run";
    manifest["config_file"] = args.config_path;
    manifest["resolved_config"] = nlohmann::json::parse(config_to_json(config));
    manifest["trial_seeds"] = nlohmann::json::array();
    for (int trial = 0; trial < config.trials; ++trial) {
        manifest["trial_seeds"].push_back(mix_seed(config.seed, 1000 + static_cast<std::uint64_t>(trial)));
    }
    manifest["outputs"] = {"metrics.csv", "confusion.csv", "timings.csv", "summary.csv"};
    manifest["threads"] = omp_get_max_threads();
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    double mean_acc = 0.0;
    for (const auto& row : log.rows) mean_acc += row.accuracy[0];
    mean_acc /= static_cast<double>(log.rows.size());
    std::printf("ran %zu batches x %d trial%s; mean idk_ogd accuracy %.4f\n",
                log.rows.size() / static_cast<std::size_t>(config.trials), config.trials,
                config.trials == 1 ? "" : "s", mean_acc);
    std::printf("wrote metrics.csv confusion.csv timings.csv summary.csv manifest.json in %s\n",
                args.out_dir.c_str());
    return 0;
}

// --- simmatrix ---------------------------------------------------------------

struct SimArgs {
    std::vector<std::string> formats;
    std::vector<double> snr{100.0};
    std::vector<double> phase_noise{-9999.0};
    std::vector<double> iq_imbalance{0.0};
    int psi = 128;
    int t = 75;
    int length = 1024;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_simmatrix(const SimArgs& args) {
    std::size_t n = std::max({args.snr.size(), args.phase_noise.size(),
                              args.iq_imbalance.size()});
    auto at = [&](const std::vector<double>& v, std::size_t i, const char* flag) {
        if (v.size() == 1) return v[0];
        if (v.size() != n) {
            throw config_error(std::string(flag) +
                               ": condition lists must share a length (or be scalar)");
        }
        return v[i];
    };
    std::vector<ChannelCondition> conditions;
    for (std::size_t i = 0; i < n; ++i) {
        conditions.push_back({at(args.snr, i, "--snr"), at(args.phase_noise, i, "--phase-noise"),
                              at(args.iq_imbalance, i, "--iq-imbalance")});
    }

    const SimilarityMatrix m = similarity_matrix(args.formats, conditions, args.psi, args.t,
                                                 args.length, args.seed);
    write_file(args.out, similarity_csv(m));
    std::printf("wrote %zux%zu similarity matrix to %s\n", m.cells.size(), m.cells.size(),
                args.out.c_str());
    return 0;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
    std::vector<std::size_t> sizes;
    std::vector<std::string> formats{"BPSK", "QPSK"};
    int length = 256;
    int batch_size = 100;
    int psi = 32;
    int t = 16;
    double eta = 0.01;
    int knn_k = 15;
    int train_n = 200;
    std::vector<double> train_snr{15.0};
    std::vector<double> test_snr{15.0};
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_bench(const BenchArgs& args) {
    BenchConfig config;
    config.formats = args.formats;
    config.train.num_samples = args.train_n;
    config.train.condition.snr_db = to_range(args.train_snr, "--train-snr");
    config.test_condition.snr_db = to_range(args.test_snr, "--test-snr");
    config.batch_size = args.batch_size;
    config.signal_length = args.length;
    config.psi = args.psi;
    config.t = args.t;
    config.eta = args.eta;
    config.knn_k = args.knn_k;
    config.seed = args.seed;

    const auto rows = runtime_benchmark(config, args.sizes);
    const std::string csv = bench_csv(rows);
    if (!args.out.empty()) {
        write_file(args.out, csv);
        std::printf("wrote %s\n", args.out.c_str());
    }
    std::fputs(csv.c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online modulation classification toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (default: all cores)");

    GenArgs gen;
    CLI::App* ga = app.add_subcommand("gen", "generate a dataset file");
    ga->add_option("--formats", gen.formats, "format names")->delimiter(',')->required();
    ga->add_option("--n", gen.n, "number of records")->required();
    ga->add_option("--length,-L", gen.length, "samples per signal");
    ga->add_option("--snr", gen.snr, "SNR dB (value or lo,hi)")->delimiter(',')->expected(1, 2);
    ga->add_option("--phase-noise", gen.phase_noise, "phase noise dBc/Hz (value or lo,hi)")
        ->delimiter(',')->expected(1, 2);
    ga->add_option("--iq-imbalance", gen.iq_imbalance, "I/Q imbalance dB (value or lo,hi)")
        ->delimiter(',')->expected(1, 2);
    ga->add_option("--seed", gen.seed, "rng seed");
    ga->add_option("--out", gen.out, "output dataset path")->required();

    FitArgs fit_args;
    CLI::App* fa = app.add_subcommand("fit", "fit partitionings + warm-started model from a dataset");
    fa->add_option("--data", fit_args.data, "input dataset (.amcd)")->required();
    fa->add_option("--out", fit_args.out_dir, "output directory")->required();
    fa->add_option("--psi", fit_args.psi, "spheres per partitioning");
    fa->add_option("--t", fit_args.t, "partitionings");
    fa->add_option("--eta", fit_args.eta, "learning rate");
    fa->add_option("--warm-epochs", fit_args.warm_epochs, "warm-start epochs");
    fa->add_option("--batch-size", fit_args.batch_size, "warm-start batch size");
    fa->add_option("--loss", fit_args.loss, "one_vs_rest | literal_ki");
    fa->add_option("--seed", fit_args.seed, "rng seed");

    RunArgs run_args;
    CLI::App* ra = app.add_subcommand("run", "run a streaming experiment from a JSON config");
    ra->add_option("config", run_args.config_path, "experiment config (JSON)")->required();
    ra->add_option("--out", run_args.out_dir, "output directory (default .)");
    ra->add_option("--trials", run_args.trials_override, "override config trials");
    ra->add_option("--seed", run_args.seed_override, "override config seed");

    SimArgs sim;
    CLI::App* sa = app.add_subcommand("simmatrix", "pairwise IDK similarity of (format, condition) cells");
    sa->add_option("--formats", sim.formats, "format names")->delimiter(',')->required();
    sa->add_option("--snr", sim.snr, "SNR dB per condition")->delimiter(',');
    sa->add_option("--phase-noise", sim.phase_noise, "phase noise dBc/Hz per condition")->delimiter(',');
    sa->add_option("--iq-imbalance", sim.iq_imbalance, "I/Q imbalance dB per condition")->delimiter(',');
    sa->add_option("--psi", sim.psi, "spheres per partitioning");
    sa->add_option("--t", sim.t, "partitionings");
    sa->add_option("--length,-L", sim.length, "samples per signal");
    sa->add_option("--seed", sim.seed, "rng seed");
    sa->add_option("--out", sim.out, "output CSV path")->required();

    BenchArgs bench;
    CLI::App* ba = app.add_subcommand("bench", "runtime scaling of IDK-OGD vs fKNN");
    ba->add_option("--sizes", bench.sizes, "test stream sizes")->delimiter(',')->required();
    ba->add_option("--formats", bench.formats, "format names")->delimiter(',');
    ba->add_option("--length,-L", bench.length, "samples per signal");
    ba->add_option("--batch-size", bench.batch_size, "batch size");
    ba->add_option("--psi", bench.psi, "spheres per partitioning");
    ba->add_option("--t", bench.t, "partitionings");
    ba->add_option("--eta", bench.eta, "learning rate");
    ba->add_option("--k", bench.knn_k, "fKNN neighbor count");
    ba->add_option("--train-n", bench.train_n, "training set size");
    ba->add_option("--train-snr", bench.train_snr, "training SNR dB")->delimiter(',')->expected(1, 2);
    ba->add_option("--test-snr", bench.test_snr, "test SNR dB")->delimiter(',')->expected(1, 2);
    ba->add_option("--seed", bench.seed, "rng seed");
    ba->add_option("--out", bench.out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (ga->parsed()) return cmd_gen(gen);
        if (fa->parsed()) return cmd_fit(fit_args);
        if (ra->parsed()) return cmd_run(run_args);
        if (sa->parsed()) return cmd_simmatrix(sim);
        if (ba->parsed()) return cmd_bench(bench);
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
