#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"

#include <vector>

namespace pnsim {

/// All waveform dimensions of one link configuration.
struct FrameConfig {
    Eigen::Index n_fft = 2048;    // OFDM transform size (subcarrier count)
    Eigen::Index n_active = 1024; // DFT-spread size (active subcarriers)
    Eigen::Index cp_len = 0;      // cyclic prefix samples
    Eigen::Index n_symbols = 5;   // symbols sharing one continuous PN trace
    int mod_order = 4;            // bits per QAM symbol
    double fs_hz = 1966.08e6;
    Eigen::Index map_offset = 0;  // first occupied FFT bin of the localized block

    Eigen::Index symbol_len() const { return n_fft + cp_len; }
    Eigen::Index frame_len() const { return n_symbols * symbol_len(); }

    void validate() const {
        if (n_active < 1 || n_fft < 2)
            throw ConfigError("FrameConfig: n_active and n_fft must be positive");
        if (n_active >= n_fft)
            throw ConfigError("FrameConfig: n_active must be smaller than n_fft");
        if (cp_len < 0)
            throw ConfigError("FrameConfig: cp_len must be non-negative");
        if (n_symbols < 1)
            throw ConfigError("FrameConfig: n_symbols must be positive");
        if (mod_order != 2 && mod_order != 4 && mod_order != 6 && mod_order != 8)
            throw ConfigError("FrameConfig: mod_order must be one of {2, 4, 6, 8}");
        if (!(fs_hz > 0.0))
            throw ConfigError("FrameConfig: fs_hz must be positive");
        if (map_offset < 0 || map_offset >= n_fft)
            throw ConfigError("FrameConfig: map_offset out of range");
    }
};

/// Complex baseband signal.
struct TimeSignal {
    CVec samples;
    double fs_hz = 0.0;
};

/// DFT-s-OFDM modulator/demodulator. All transforms are unitary, so the two
/// directions are exact inverses and Parseval holds to machine precision.
/// With a unit-energy constellation the time-domain average power is
/// n_active/n_fft (the occupancy factor); the engine compensates for it when
/// it normalizes transmit power.
///
/// Holds cached FFT plans; use one instance per worker thread.
class Waveform {
public:
    explicit Waveform(FrameConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    const FrameConfig& config() const { return cfg_; }

    /// One symbol: spread (forward DFT of size n_active), map onto the
    /// localized block, inverse FFT of size n_fft, prepend the cyclic prefix.
    CVec modulate_symbol(const CVec& block) {
        if (block.size() != cfg_.n_active)
            throw ShapeError("modulate_symbol: block length must equal n_active");
        const CVec spread = fft_.forward(block);
        CVec bins = CVec::Zero(cfg_.n_fft);
        for (Eigen::Index m = 0; m < cfg_.n_active; ++m)
            bins[(cfg_.map_offset + m) % cfg_.n_fft] = spread[m];
        const CVec body = fft_.inverse(bins);
        if (cfg_.cp_len == 0)
            return body;
        CVec out(cfg_.symbol_len());
        out.head(cfg_.cp_len) = body.tail(cfg_.cp_len);
        out.tail(cfg_.n_fft) = body;
        return out;
    }

    /// Mirror of modulate_symbol: drop CP, FFT of size n_fft, extract the
    /// mapped bins, inverse DFT of size n_active.
    CVec demodulate_symbol(const CVec& symbol) {
        if (symbol.size() != cfg_.symbol_len())
            throw ShapeError("demodulate_symbol: symbol length mismatch");
        const CVec bins = fft_.forward(symbol.tail(cfg_.n_fft));
        CVec extracted(cfg_.n_active);
        for (Eigen::Index m = 0; m < cfg_.n_active; ++m)
            extracted[m] = bins[(cfg_.map_offset + m) % cfg_.n_fft];
        return fft_.inverse(extracted);
    }

    /// Modulate a full frame of blocks into one contiguous time signal.
    TimeSignal modulate(const std::vector<CVec>& blocks) {
        if (static_cast<Eigen::Index>(blocks.size()) != cfg_.n_symbols)
            throw ShapeError("modulate: expected n_symbols blocks");
        TimeSignal sig;
        sig.samples.resize(cfg_.frame_len());
        sig.fs_hz = cfg_.fs_hz;
        for (Eigen::Index s = 0; s < cfg_.n_symbols; ++s)
            sig.samples.segment(s * cfg_.symbol_len(), cfg_.symbol_len()) =
                modulate_symbol(blocks[static_cast<std::size_t>(s)]);
        return sig;
    }

    /// Demodulate a full frame into per-symbol received blocks.
    std::vector<CVec> demodulate(const TimeSignal& sig) {
        if (sig.samples.size() != cfg_.frame_len())
            throw ShapeError("demodulate: signal length mismatch");
        std::vector<CVec> out;
        out.reserve(static_cast<std::size_t>(cfg_.n_symbols));
        for (Eigen::Index s = 0; s < cfg_.n_symbols; ++s)
            out.push_back(demodulate_symbol(sig.samples.segment(s * cfg_.symbol_len(), cfg_.symbol_len())));
        return out;
    }

private:
    FrameConfig cfg_;
    Fft fft_;
};

} // namespace pnsim
