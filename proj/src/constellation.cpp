#include "amc/constellation.hpp"

#include <cmath>
#include <numbers>

#include "amc/rng.hpp"

namespace amc {

namespace {

constexpr double kPi = std::numbers::pi;

// DVB-S2 ring-radius ratios (rate-9/10 class), fixed so tests reproduce.
constexpr double kApsk16RingRatio = 2.57;    // r2 / r1
constexpr double kApsk32RingRatio2 = 2.53;   // r2 / r1
constexpr double kApsk32RingRatio3 = 4.30;   // r3 / r1

std::vector<ComplexSample> ask_points(int m) {
    // equally spaced odd amplitudes symmetric about 0: +/-1, +/-3, ...
    std::vector<ComplexSample> pts;
    pts.reserve(m);
    for (int k = 0; k < m; ++k) {
        pts.emplace_back(static_cast<double>(2 * k - (m - 1)), 0.0);
    }
    return pts;
}

std::vector<ComplexSample> psk_points(int m, double phase_offset) {
    std::vector<ComplexSample> pts;
    pts.reserve(m);
    for (int k = 0; k < m; ++k) {
        const double th = phase_offset + 2.0 * kPi * k / m;
        pts.emplace_back(std::cos(th), std::sin(th));
    }
    return pts;
}

void append_ring(std::vector<ComplexSample>& pts, double r, int n, double phase_offset) {
    for (int k = 0; k < n; ++k) {
        const double th = phase_offset + 2.0 * kPi * k / n;
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
}

std::vector<ComplexSample> apsk16_points() {
    // 4 + 12 layout: inner ring at pi/4 + k*pi/2, outer at odd multiples of pi/12
    std::vector<ComplexSample> pts;
    pts.reserve(16);
    append_ring(pts, 1.0, 4, kPi / 4.0);
    append_ring(pts, kApsk16RingRatio, 12, kPi / 12.0);
    return pts;
}

std::vector<ComplexSample> apsk32_points() {
    // 4 + 12 + 16 layout; outer ring starts at angle 0
    std::vector<ComplexSample> pts;
    pts.reserve(32);
    append_ring(pts, 1.0, 4, kPi / 4.0);
    append_ring(pts, kApsk32RingRatio2, 12, kPi / 12.0);
    append_ring(pts, kApsk32RingRatio3, 16, 0.0);
    return pts;
}

std::vector<ComplexSample> qam_grid(int side) {
    std::vector<ComplexSample> pts;
    pts.reserve(static_cast<std::size_t>(side) * side);
    for (int qi = 0; qi < side; ++qi) {
        for (int ii = 0; ii < side; ++ii) {
            pts.emplace_back(static_cast<double>(2 * ii - (side - 1)),
                             static_cast<double>(2 * qi - (side - 1)));
        }
    }
    return pts;
}

std::vector<ComplexSample> qam32_cross() {
    // 6x6 grid minus the four corners
    std::vector<ComplexSample> pts;
    pts.reserve(32);
    for (const auto& p : qam_grid(6)) {
        if (std::abs(p.real()) == 5.0 && std::abs(p.imag()) == 5.0) continue;
        pts.push_back(p);
    }
    return pts;
}

void normalize_energy(std::vector<ComplexSample>& pts) {
    double energy = 0.0;
    for (const auto& p : pts) energy += std::norm(p);
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(pts.size()));
    for (auto& p : pts) p *= scale;
}

}  // namespace

const std::vector<ModulationFormat>& candidate_formats() {
    static const std::vector<ModulationFormat> formats = {
        {0, "4ASK", 4},    {1, "8ASK", 8},    {2, "BPSK", 2},   {3, "QPSK", 4},
        {4, "8PSK", 8},    {5, "16APSK", 16}, {6, "32APSK", 32},
        {7, "16QAM", 16},  {8, "32QAM", 32},  {9, "64QAM", 64},
    };
    return formats;
}

const ModulationFormat& format_by_name(const std::string& name) {
    for (const auto& f : candidate_formats()) {
        if (f.name == name) return f;
    }
    throw config_error("unknown modulation format: " + name);
}

const ModulationFormat& format_by_id(int id) {
    const auto& formats = candidate_formats();
    if (id < 0 || id >= static_cast<int>(formats.size())) {
        throw config_error("unknown modulation format id: " + std::to_string(id));
    }
    return formats[static_cast<std::size_t>(id)];
}

ConstellationTable build_table(const ModulationFormat& format) {
    std::vector<ComplexSample> pts;
    if (format.name == "4ASK") {
        pts = ask_points(4);
    } else if (format.name == "8ASK") {
        pts = ask_points(8);
    } else if (format.name == "BPSK") {
        pts = psk_points(2, 0.0);
    } else if (format.name == "QPSK") {
        pts = psk_points(4, kPi / 4.0);  // (+/-1 +/- j)/sqrt(2)
    } else if (format.name == "8PSK") {
        pts = psk_points(8, 0.0);
    } else if (format.name == "16APSK") {
        pts = apsk16_points();
    } else if (format.name == "32APSK") {
        pts = apsk32_points();
    } else if (format.name == "16QAM") {
        pts = qam_grid(4);
    } else if (format.name == "32QAM") {
        pts = qam32_cross();
    } else if (format.name == "64QAM") {
        pts = qam_grid(8);
    } else {
        throw config_error("unknown modulation format: " + format.name);
    }
    normalize_energy(pts);
    return {format, std::move(pts)};
}

IqSignal generate_signal(const ModulationFormat& format, std::size_t length,
                         std::uint64_t seed) {
    const ConstellationTable table = build_table(format);
    Rng rng(seed);
    IqSignal signal;
    signal.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        signal.push_back(table.points[rng.uniform_index(table.points.size())]);
    }
    return signal;
}

}  // namespace amc
