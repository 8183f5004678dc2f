#pragma once

#include <string>
#include <vector>

#include "amc/classifier.hpp"
#include "amc/isokernel.hpp"

namespace amc {

inline constexpr std::uint16_t kPartitioningVersion = 1;
inline constexpr std::uint16_t kModelVersion = 1;

// Partitioning model file ("AMCP"): format id, psi, t, seed, centers, radii.
// Load re-derives each sphere's nearest-neighbor radius and rejects files
// that violate the construction invariant.
void write_partitioning(const std::string& path, const IsolationPartitioning& p);
IsolationPartitioning read_partitioning(const std::string& path);

// Model checkpoint file ("AMCM"): learning rate, loss variant, format table,
// per-format weights, and references to the partitioning files. Relative
// references resolve against the checkpoint's directory. Save/load
// round-trips bit-exactly.
void write_model(const std::string& path, const OgdModel& model,
                 const std::vector<std::string>& partitioning_paths);
OgdModel read_model(const std::string& path);

}  // namespace amc
