#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/pn_model.hpp"
#include "pnsim/rng.hpp"
#include "pnsim/waveform.hpp"

#include <cmath>
#include <limits>

namespace pnsim {

/// SNR operating point, defined over the full sampled bandwidth.
struct SnrPoint {
    double snr_db = std::numeric_limits<double>::infinity();

    bool noiseless() const { return std::isinf(snr_db) && snr_db > 0.0; }
    /// Per-sample complex noise variance for a unit-power transmit signal.
    double noise_variance() const { return noiseless() ? 0.0 : std::pow(10.0, -snr_db / 10.0); }
};

/// y[p] = x[p] * e^{j phi[p]}; unit-modulus multiplicative, energy preserving.
inline TimeSignal apply_phase_noise(const TimeSignal& x, const PnTrace& phi) {
    if (x.samples.size() != phi.samples.size())
        throw ShapeError("apply_phase_noise: signal and trace lengths differ");
    TimeSignal out;
    out.fs_hz = x.fs_hz;
    out.samples.resize(x.samples.size());
    for (Eigen::Index i = 0; i < x.samples.size(); ++i)
        out.samples[i] = x.samples[i] * std::polar(1.0, phi.samples[i]);
    return out;
}

/// Draw a unit-variance circular complex Gaussian vector. Engine code draws
/// noise once per frame and scales it per SNR point, so different SNR points
/// of a sweep share the same noise realization (common random numbers).
inline CVec unit_awgn(Eigen::Index n, std::uint64_t seed) {
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    CVec out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out[i] = cd(re, im);
    }
    return out;
}

/// Add white Gaussian noise of per-sample variance 10^(-snr_db/10). The
/// caller must hand in a unit-average-power signal for snr_db to be the
/// actual full-band SNR. An infinite snr_db bypasses the draw entirely.
inline TimeSignal add_awgn(const TimeSignal& x, SnrPoint snr, std::uint64_t seed) {
    TimeSignal out = x;
    if (snr.noiseless())
        return out;
    const double sigma = std::sqrt(snr.noise_variance());
    out.samples += sigma * unit_awgn(x.samples.size(), seed);
    return out;
}

} // namespace pnsim
