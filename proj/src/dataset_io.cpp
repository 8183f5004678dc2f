#include "amc/dataset_io.hpp"

#include "amc/constellation.hpp"
#include "binary_io.hpp"

namespace amc {

DatasetRecord make_dataset_record(std::uint8_t format_id,
                                  const ChannelCondition& condition,
                                  const IqSignal& samples) {
    DatasetRecord rec;
    rec.format_id = format_id;
    // quantize through the on-disk float32 width up front
    rec.condition.snr_db = static_cast<float>(condition.snr_db);
    rec.condition.phase_noise_dbc_hz = static_cast<float>(condition.phase_noise_dbc_hz);
    rec.condition.iq_imbalance_db = static_cast<float>(condition.iq_imbalance_db);
    rec.samples.reserve(samples.size());
    for (const auto& s : samples) {
        rec.samples.emplace_back(static_cast<float>(s.real()), static_cast<float>(s.imag()));
    }
    return rec;
}

void write_dataset(const std::string& path, const Dataset& dataset) {
    detail::BinWriter w(path);
    w.bytes("AMCD", 4);
    w.pod<std::uint16_t>(kDatasetVersion);
    w.pod<std::uint16_t>(static_cast<std::uint16_t>(dataset.formats.size()));
    w.pod<std::uint32_t>(dataset.signal_length);
    w.pod<std::uint64_t>(dataset.records.size());
    for (const auto& f : dataset.formats) {
        w.pod<std::uint8_t>(static_cast<std::uint8_t>(f.id));
        w.str8(f.name);
    }
    for (const auto& rec : dataset.records) {
        if (rec.samples.size() != dataset.signal_length) {
            throw config_error("record length " + std::to_string(rec.samples.size()) +
                               " does not match header L " +
                               std::to_string(dataset.signal_length));
        }
        w.pod<std::uint8_t>(rec.format_id);
        w.pod<float>(static_cast<float>(rec.condition.snr_db));
        w.pod<float>(static_cast<float>(rec.condition.phase_noise_dbc_hz));
        w.pod<float>(static_cast<float>(rec.condition.iq_imbalance_db));
        for (const auto& s : rec.samples) {
            w.pod<float>(static_cast<float>(s.real()));
            w.pod<float>(static_cast<float>(s.imag()));
        }
    }
    w.close(path);
}

Dataset read_dataset(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("AMCD");
    const auto version = r.pod<std::uint16_t>();
    if (version != kDatasetVersion) {
        throw config_error("unsupported dataset version " + std::to_string(version) +
                           " in " + path);
    }
    const auto m = r.pod<std::uint16_t>();
    Dataset d;
    d.signal_length = r.pod<std::uint32_t>();
    const auto count = r.pod<std::uint64_t>();
    d.formats.reserve(m);
    for (std::uint16_t i = 0; i < m; ++i) {
        const int id = r.pod<std::uint8_t>();
        const std::string name = r.str8();
        // validate against the canonical table
        const ModulationFormat& canonical = format_by_name(name);
        if (canonical.id != id) {
            throw config_error("format table mismatch for " + name + " in " + path);
        }
        d.formats.push_back(canonical);
    }
    d.records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        DatasetRecord rec;
        rec.format_id = r.pod<std::uint8_t>();
        rec.condition.snr_db = r.pod<float>();
        rec.condition.phase_noise_dbc_hz = r.pod<float>();
        rec.condition.iq_imbalance_db = r.pod<float>();
        rec.samples.reserve(d.signal_length);
        for (std::uint32_t k = 0; k < d.signal_length; ++k) {
            const float re = r.pod<float>();
            const float im = r.pod<float>();
            rec.samples.emplace_back(re, im);
        }
        d.records.push_back(std::move(rec));
    }
    return d;
}

}  // namespace amc
