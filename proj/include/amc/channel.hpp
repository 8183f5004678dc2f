#pragma once

#include <cstdint>

#include "amc/types.hpp"

namespace amc {

// Circularly symmetric complex Gaussian noise at the target SNR. Noise power
// is measured against the empirical mean power of `signal` and split equally
// between I and Q.
IqSignal apply_awgn(const IqSignal& signal, double snr_db, std::uint64_t seed);

// Wiener (random-walk) phase process. Increments are zero-mean Gaussian with
// variance 2*pi*f_off*10^(level/10) per sample, calibrated so the single-sided
// PSD at normalized offset f_off = 1e-2 of the sample rate equals `level`.
// Magnitudes pass through unchanged.
IqSignal apply_phase_noise(const IqSignal& signal, double level_dbc_hz,
                           std::uint64_t seed);

// I scaled by 10^(+a/40), Q by 10^(-a/40); symmetric split keeps total power
// approximately constant. Noiseless and deterministic.
IqSignal apply_iq_imbalance(const IqSignal& signal, double imbalance_db);

// Fixed composition order: imbalance, then phase noise, then AWGN
// (transmitter impairment first, channel noise last). Stage seeds are
// mix_seed(seed, kPhaseNoiseStage) and mix_seed(seed, kAwgnStage).
inline constexpr std::uint64_t kPhaseNoiseStage = 1;
inline constexpr std::uint64_t kAwgnStage = 2;

IqSignal apply_condition(const IqSignal& signal, const ChannelCondition& cond,
                         std::uint64_t seed);

}  // namespace amc
