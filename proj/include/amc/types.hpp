#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace amc {

using ComplexSample = std::complex<double>;

// A baseband signal: L complex points, treated as an i.i.d. sample of an
// unknown distribution in the I/Q plane.
using IqSignal = std::vector<ComplexSample>;

struct ModulationFormat {
    int id = -1;          // stable index in [0, m)
    std::string name;     // e.g. "16QAM"
    int order = 0;        // number of constellation points
};

// One lot's channel state. Absent impairments are encoded by the extremes:
// snr_db >= 100 (effectively noiseless), phase_noise_dbc_hz = -9999
// (no-noise sentinel), iq_imbalance_db = 0.
struct ChannelCondition {
    double snr_db = 100.0;
    double phase_noise_dbc_hz = -9999.0;
    double iq_imbalance_db = 0.0;
};

// Configuration / usage problems. The CLI maps these to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace amc
