#include "amc/channel.hpp"

#include <cmath>
#include <numbers>

#include "amc/rng.hpp"

namespace amc {

namespace {

// normalized reference offset for the phase-noise PSD calibration
constexpr double kPhaseNoiseOffset = 1e-2;

double mean_power(const IqSignal& signal) {
    double p = 0.0;
    for (const auto& s : signal) p += std::norm(s);
    return p / static_cast<double>(signal.size());
}

}  // namespace

IqSignal apply_awgn(const IqSignal& signal, double snr_db, std::uint64_t seed) {
    const double noise_power = mean_power(signal) * std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(noise_power / 2.0);  // per rail

    Rng rng(seed);
    IqSignal out;
    out.reserve(signal.size());
    for (const auto& s : signal) {
        const auto [ni, nq] = rng.normal_pair();
        out.emplace_back(s.real() + sigma * ni, s.imag() + sigma * nq);
    }
    return out;
}

IqSignal apply_phase_noise(const IqSignal& signal, double level_dbc_hz,
                           std::uint64_t seed) {
    const double increment_var =
        2.0 * std::numbers::pi * kPhaseNoiseOffset * std::pow(10.0, level_dbc_hz / 10.0);
    const double sigma = std::sqrt(increment_var);

    Rng rng(seed);
    IqSignal out;
    out.reserve(signal.size());
    double theta = 0.0;
    for (const auto& s : signal) {
        theta += sigma * rng.normal();
        out.push_back(s * ComplexSample(std::cos(theta), std::sin(theta)));
    }
    return out;
}

IqSignal apply_iq_imbalance(const IqSignal& signal, double imbalance_db) {
    const double gain_i = std::pow(10.0, imbalance_db / 40.0);
    const double gain_q = std::pow(10.0, -imbalance_db / 40.0);

    IqSignal out;
    out.reserve(signal.size());
    for (const auto& s : signal) {
        out.emplace_back(gain_i * s.real(), gain_q * s.imag());
    }
    return out;
}

IqSignal apply_condition(const IqSignal& signal, const ChannelCondition& cond,
                         std::uint64_t seed) {
    IqSignal out = apply_iq_imbalance(signal, cond.iq_imbalance_db);
    out = apply_phase_noise(out, cond.phase_noise_dbc_hz, mix_seed(seed, kPhaseNoiseStage));
    out = apply_awgn(out, cond.snr_db, mix_seed(seed, kAwgnStage));
    return out;
}

}  // namespace amc
