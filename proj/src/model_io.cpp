#include "amc/model_io.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include "amc/constellation.hpp"
#include "binary_io.hpp"

namespace amc {

void write_partitioning(const std::string& path, const IsolationPartitioning& p) {
    detail::BinWriter w(path);
    w.bytes("AMCP", 4);
    w.pod<std::uint16_t>(kPartitioningVersion);
    w.pod<std::int32_t>(p.source_format);
    w.pod<std::int32_t>(p.psi);
    w.pod<std::int32_t>(p.t);
    w.pod<std::uint64_t>(p.seed);
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        w.pod<double>(p.center_x[i]);
        w.pod<double>(p.center_y[i]);
        w.pod<double>(p.radius[i]);
    }
    w.close(path);
}

IsolationPartitioning read_partitioning(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("AMCP");
    const auto version = r.pod<std::uint16_t>();
    if (version != kPartitioningVersion) {
        throw config_error("unsupported partitioning version " + std::to_string(version) +
                           " in " + path);
    }
    IsolationPartitioning p;
    p.source_format = r.pod<std::int32_t>();
    p.psi = r.pod<std::int32_t>();
    p.t = r.pod<std::int32_t>();
    p.seed = r.pod<std::uint64_t>();
    if (p.psi < 2 || p.t < 1) throw config_error("invalid psi/t in " + path);

    p.center_x.resize(p.dimension());
    p.center_y.resize(p.dimension());
    p.radius.resize(p.dimension());
    p.max_radius.assign(static_cast<std::size_t>(p.t), 0.0);
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        p.center_x[i] = r.pod<double>();
        p.center_y[i] = r.pod<double>();
        p.radius[i] = r.pod<double>();
    }

    // re-derive radii from the centers and reject files that violate the
    // nearest-neighbor construction invariant
    for (int j = 0; j < p.t; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * p.psi;
        double max_r = 0.0;
        for (int a = 0; a < p.psi; ++a) {
            double best = std::numeric_limits<double>::infinity();
            for (int b = 0; b < p.psi; ++b) {
                if (b == a) continue;
                const double dx = p.center_x[base + a] - p.center_x[base + b];
                const double dy = p.center_y[base + a] - p.center_y[base + b];
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) best = d2;
            }
            const double r_nn = std::sqrt(best);
            if (std::abs(r_nn - p.radius[base + a]) > 1e-9 * std::max(1.0, r_nn)) {
                throw config_error("corrupt partitioning file (radius invariant): " + path);
            }
            if (p.radius[base + a] > max_r) max_r = p.radius[base + a];
        }
        p.max_radius[static_cast<std::size_t>(j)] = max_r;
    }
    return p;
}

void write_model(const std::string& path, const OgdModel& model,
                 const std::vector<std::string>& partitioning_paths) {
    if (partitioning_paths.size() != model.formats.size()) {
        throw config_error("write_model: one partitioning path per format required");
    }
    detail::BinWriter w(path);
    w.bytes("AMCM", 4);
    w.pod<std::uint16_t>(kModelVersion);
    w.pod<double>(model.learning_rate);
    w.pod<std::uint8_t>(static_cast<std::uint8_t>(model.loss));
    w.pod<std::uint16_t>(static_cast<std::uint16_t>(model.formats.size()));
    for (std::size_t j = 0; j < model.formats.size(); ++j) {
        w.pod<std::uint8_t>(static_cast<std::uint8_t>(model.formats[j].id));
        w.str8(model.formats[j].name);
        w.str16(partitioning_paths[j]);
        w.pod<std::uint32_t>(static_cast<std::uint32_t>(model.weights[j].size()));
        for (double v : model.weights[j]) w.pod<double>(v);
    }
    w.close(path);
}

OgdModel read_model(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("AMCM");
    const auto version = r.pod<std::uint16_t>();
    if (version != kModelVersion) {
        throw config_error("unsupported model version " + std::to_string(version) +
                           " in " + path);
    }
    OgdModel model;
    model.learning_rate = r.pod<double>();
    model.loss = static_cast<LossVariant>(r.pod<std::uint8_t>());
    const auto m = r.pod<std::uint16_t>();

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    for (std::uint16_t j = 0; j < m; ++j) {
        const int id = r.pod<std::uint8_t>();
        const std::string name = r.str8();
        const ModulationFormat& fmt = format_by_name(name);
        if (fmt.id != id) throw config_error("format table mismatch in " + path);
        model.formats.push_back(fmt);

        std::filesystem::path ref = r.str16();
        if (ref.is_relative()) ref = base / ref;
        IsolationPartitioning p = read_partitioning(ref.string());
        if (p.source_format != id) {
            throw config_error("partitioning " + ref.string() + " belongs to format " +
                               std::to_string(p.source_format) + ", expected " +
                               std::to_string(id));
        }

        const auto dim = r.pod<std::uint32_t>();
        if (dim != p.dimension()) {
            throw config_error("weight dimension mismatch in " + path);
        }
        std::vector<double> weights(dim);
        for (auto& v : weights) v = r.pod<double>();

        model.partitionings.push_back(std::move(p));
        model.weights.push_back(std::move(weights));
    }
    return model;
}

}  // namespace amc
