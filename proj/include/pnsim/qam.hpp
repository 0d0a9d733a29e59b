#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace pnsim {

using BitVec = std::vector<std::uint8_t>;

/// Gray-mapped square QAM with unit average constellation energy.
///
/// Convention (fixed by this project, pinned in golden-vector tests): a group
/// of m bits splits into m/2 in-phase bits followed by m/2 quadrature bits.
/// Each half is a reflected Gray code word g; the per-axis level index is the
/// Gray decode B of g (MSB first), and the amplitude is (sqrt(M)-1-2B)*d with
/// d = sqrt(3 / (2(M-1))). For QPSK this puts bits 00 at (1+j)/sqrt(2).
namespace qam {

inline int bits_per_axis(int mod_order) {
    if (mod_order != 2 && mod_order != 4 && mod_order != 6 && mod_order != 8)
        throw ConfigError("qam: mod_order must be one of {2, 4, 6, 8}");
    return mod_order / 2;
}

inline double level_step(int mod_order) {
    const double m = std::pow(2.0, mod_order);
    return std::sqrt(3.0 / (2.0 * (m - 1.0)));
}

inline int gray_encode(int b) { return b ^ (b >> 1); }

} // namespace qam

/// Map a bit sequence to Gray-coded square-QAM symbols (unit average energy).
inline CVec qam_map(const BitVec& bits, int mod_order) {
    const int half = qam::bits_per_axis(mod_order);
    if (bits.size() % static_cast<std::size_t>(mod_order) != 0)
        throw ShapeError("qam_map: bit count not divisible by mod_order");
    const int levels = 1 << half;
    const double d = qam::level_step(mod_order);

    const Eigen::Index n_sym = static_cast<Eigen::Index>(bits.size()) / mod_order;
    CVec out(n_sym);
    for (Eigen::Index s = 0; s < n_sym; ++s) {
        const std::uint8_t* b = bits.data() + s * mod_order;
        int bi = 0, bq = 0;
        // prefix-xor turns the reflected Gray word back into the level index
        int acc = 0;
        for (int i = 0; i < half; ++i) {
            acc ^= b[i];
            bi = (bi << 1) | acc;
        }
        acc = 0;
        for (int i = 0; i < half; ++i) {
            acc ^= b[half + i];
            bq = (bq << 1) | acc;
        }
        out[s] = cd((levels - 1 - 2 * bi) * d, (levels - 1 - 2 * bq) * d);
    }
    return out;
}

/// Minimum-distance decision followed by Gray de-mapping.
inline BitVec qam_demap_hard(const CVec& symbols, int mod_order) {
    const int half = qam::bits_per_axis(mod_order);
    const int levels = 1 << half;
    const double d = qam::level_step(mod_order);

    BitVec out(static_cast<std::size_t>(symbols.size()) * mod_order);
    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        auto axis_bits = [&](double v, std::uint8_t* dst) {
            int idx = static_cast<int>(std::lround((levels - 1 - v / d) / 2.0));
            idx = std::min(std::max(idx, 0), levels - 1);
            const int g = qam::gray_encode(idx);
            for (int i = 0; i < half; ++i)
                dst[i] = static_cast<std::uint8_t>((g >> (half - 1 - i)) & 1);
        };
        std::uint8_t* b = out.data() + s * mod_order;
        axis_bits(symbols[s].real(), b);
        axis_bits(symbols[s].imag(), b + half);
    }
    return out;
}

/// All constellation points in bit-pattern order (index = bit word, MSB first).
inline CVec qam_constellation(int mod_order) {
    const int m = 1 << mod_order;
    BitVec bits(static_cast<std::size_t>(m) * mod_order);
    for (int w = 0; w < m; ++w)
        for (int i = 0; i < mod_order; ++i)
            bits[static_cast<std::size_t>(w) * mod_order + i] =
                static_cast<std::uint8_t>((w >> (mod_order - 1 - i)) & 1);
    return qam_map(bits, mod_order);
}

} // namespace pnsim
