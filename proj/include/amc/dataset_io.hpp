#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amc/types.hpp"

namespace amc {

// On-disk record. I/Q samples and condition fields are stored as 32-bit
// floats, so in-memory records are kept float-quantized: read(write(x)) == x
// holds bit-exactly for records built through make_dataset_record.
struct DatasetRecord {
    std::uint8_t format_id = 0;
    ChannelCondition condition;
    IqSignal samples;
};

DatasetRecord make_dataset_record(std::uint8_t format_id,
                                  const ChannelCondition& condition,
                                  const IqSignal& samples);

// Binary dataset file, little-endian throughout:
//   magic "AMCD", u16 version, u16 m, u32 L, u64 record count,
//   m x (u8 format id, u8 name length, name bytes),
//   then records of (u8 format id, 3 x f32 condition, 2L x f32 I/Q).
struct Dataset {
    std::vector<ModulationFormat> formats;
    std::uint32_t signal_length = 0;
    std::vector<DatasetRecord> records;
};

inline constexpr std::uint16_t kDatasetVersion = 1;

void write_dataset(const std::string& path, const Dataset& dataset);
Dataset read_dataset(const std::string& path);  // config_error on bad magic/version

}  // namespace amc
