#pragma once

#include <cstdint>

#include "amc/types.hpp"

namespace amc {

// Canonical symbol table of one format, scaled to unit mean symbol energy:
// (1/order) * sum |p|^2 == 1.
struct ConstellationTable {
    ModulationFormat format;
    std::vector<ComplexSample> points;
};

// The ten candidate formats, ids 0..9 in fixed table order:
// 4ASK, 8ASK, BPSK, QPSK, 8PSK, 16APSK, 32APSK, 16QAM, 32QAM, 64QAM.
const std::vector<ModulationFormat>& candidate_formats();

// Lookup by name / id; unknown input throws config_error.
const ModulationFormat& format_by_name(const std::string& name);
const ModulationFormat& format_by_id(int id);

ConstellationTable build_table(const ModulationFormat& format);

// `length` symbols drawn i.i.d. uniform from the format's table.
// Pure function of (format, length, seed).
IqSignal generate_signal(const ModulationFormat& format, std::size_t length,
                         std::uint64_t seed);

}  // namespace amc
