#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/psd.hpp"
#include "pnsim/rng.hpp"

#include <cmath>
#include <cstdint>

namespace pnsim {

/// A sampled oscillator phase trajectory in radians.
struct PnTrace {
    RVec samples; // radians
    double fs_hz = 0.0;
};

/// Generate a discrete-time phase-noise trace whose averaged one-sided
/// periodogram converges to psd_eval over (0, fs/2).
///
/// Method: Hermitian-symmetric frequency-domain shaping of complex white
/// Gaussian noise followed by an inverse transform; the imaginary residue
/// (below 1e-12 relative) is discarded. The DC bin is zeroed, so the
/// generator never contributes a deterministic phase offset.
inline PnTrace generate_trace(const PsdSpec& spec, Eigen::Index n_samples, double fs_hz,
                              std::uint64_t seed) {
    if (n_samples < 2)
        throw std::domain_error("generate_trace: need at least 2 samples");
    if (!(fs_hz > 0.0))
        throw std::domain_error("generate_trace: sampling rate must be positive");

    const Eigen::Index n = n_samples;
    const double df = fs_hz / static_cast<double>(n);
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // One-sided periodogram convention: P(f_k) = 2 |X_k|^2 / (fs N), so a bin
    // with E|X_k|^2 = S(f_k) fs N / 2 reproduces the target density.
    CVec spectrum = CVec::Zero(n);
    for (Eigen::Index k = 1; k < (n + 1) / 2; ++k) {
        const double s_lin = psd_eval_linear(spec, df * static_cast<double>(k));
        const double sigma = std::sqrt(s_lin * fs_hz * static_cast<double>(n) / 4.0);
        const double a = gauss(rng);
        const double b = gauss(rng);
        spectrum[k] = cd(sigma * a, sigma * b);
        spectrum[n - k] = std::conj(spectrum[k]);
    }
    if (n % 2 == 0) {
        const double s_lin = psd_eval_linear(spec, fs_hz / 2.0);
        spectrum[n / 2] = cd(std::sqrt(s_lin * fs_hz * static_cast<double>(n) / 2.0) * gauss(rng), 0.0);
    }

    Fft fft;
    PnTrace trace;
    trace.samples = fft.inverse_scaled(spectrum).real();
    trace.fs_hz = fs_hz;
    return trace;
}

/// Random-walk phase model with per-sample step deviation sigma_step (rad).
/// Its unit-modulus autocorrelation is exp(-sigma_step^2 |m-n| / 2), which
/// makes it a convenient analytic reference process for covariance work.
inline PnTrace wiener_trace(double sigma_step, Eigen::Index n_samples, double fs_hz,
                            std::uint64_t seed) {
    if (n_samples < 1)
        throw std::domain_error("wiener_trace: need at least 1 sample");
    if (!(fs_hz > 0.0))
        throw std::domain_error("wiener_trace: sampling rate must be positive");
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PnTrace trace;
    trace.samples = RVec::Zero(n_samples);
    double acc = 0.0;
    for (Eigen::Index i = 1; i < n_samples; ++i) {
        acc += sigma_step * gauss(rng);
        trace.samples[i] = acc;
    }
    trace.fs_hz = fs_hz;
    return trace;
}

/// Element-wise sum of transmitter and receiver phase trajectories.
inline PnTrace combine_tx_rx(const PnTrace& tx, const PnTrace& rx) {
    if (tx.samples.size() != rx.samples.size())
        throw ShapeError("combine_tx_rx: trace lengths differ");
    if (tx.fs_hz != rx.fs_hz)
        throw ShapeError("combine_tx_rx: sampling rates differ");
    PnTrace out;
    out.samples = tx.samples + rx.samples;
    out.fs_hz = tx.fs_hz;
    return out;
}

/// Phase-noise source used by the simulation engine and covariance training:
/// either off, a pair of pole-zero PSD models (transmitter + receiver), or a
/// random-walk test model.
struct PnModel {
    enum class Kind { off, psd, wiener };

    Kind kind = Kind::off;
    PsdSpec tx;
    PsdSpec rx;
    double wiener_sigma_step = 0.0;
    std::string id = "off";

    /// Combined Tx+Rx trace of n samples; deterministic per seed.
    PnTrace trace(Eigen::Index n, double fs_hz, std::uint64_t seed) const {
        switch (kind) {
        case Kind::off: {
            PnTrace t;
            t.samples = RVec::Zero(n);
            t.fs_hz = fs_hz;
            return t;
        }
        case Kind::psd:
            return combine_tx_rx(generate_trace(tx, n, fs_hz, derive_seed(seed, 0x7478)),
                                 generate_trace(rx, n, fs_hz, derive_seed(seed, 0x7278)));
        case Kind::wiener:
            return wiener_trace(wiener_sigma_step, n, fs_hz, seed);
        }
        throw UsageError("PnModel: invalid kind");
    }

    bool enabled() const { return kind != Kind::off; }
};

} // namespace pnsim
