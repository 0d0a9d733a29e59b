#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/waveform.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace pnsim {

/// Analytic decomposition of one phase-noise-impaired symbol:
/// r = s .* alpha + beta, with alpha the per-subcarrier rotation terms and
/// beta the inter-carrier interference for a given data vector.
struct InterferenceDecomposition {
    CVec alpha;
    CVec beta;
    CMat h_eff;
};

/// Effective subcarrier-domain matrix of the noiseless chain
/// (spread -> map -> inverse FFT -> e^{j phi} -> FFT -> extract -> despread)
/// built column-by-column by driving unit vectors through the chain. The
/// phase segment covers one symbol body (CP excluded).
inline CMat effective_matrix(const RVec& phi_symbol, const FrameConfig& cfg) {
    if (phi_symbol.size() != cfg.n_fft)
        throw ShapeError("effective_matrix: phase segment must cover one symbol body");
    FrameConfig body = cfg;
    body.cp_len = 0;
    body.n_symbols = 1;
    Waveform wf(body);
    CVec rot(cfg.n_fft);
    for (Eigen::Index p = 0; p < cfg.n_fft; ++p)
        rot[p] = std::polar(1.0, phi_symbol[p]);
    CMat h(cfg.n_active, cfg.n_active);
    CVec e = CVec::Zero(cfg.n_active);
    for (Eigen::Index n = 0; n < cfg.n_active; ++n) {
        e[n] = 1.0;
        const CVec x = wf.modulate_symbol(e);
        h.col(n) = wf.demodulate_symbol(x.cwiseProduct(rot));
        e[n] = 0.0;
    }
    return h;
}

/// Diagonal of effective_matrix without forming the matrix: the localized
/// mapping makes the inner subcarrier coupling Toeplitz, so
///   alpha_k = (1/N_a) sum_d (N_a - |d|) c[d mod N_p] e^{-j 2 pi k d / N_a}
/// with c the length-N_p inverse transform of e^{j phi}. One FFT of size
/// n_fft plus one of size n_active per call.
inline CVec alpha_diagonal(const RVec& phi_symbol, const FrameConfig& cfg, Fft& fft) {
    if (phi_symbol.size() != cfg.n_fft)
        throw ShapeError("alpha_diagonal: phase segment must cover one symbol body");
    CVec rot(cfg.n_fft);
    for (Eigen::Index p = 0; p < cfg.n_fft; ++p)
        rot[p] = std::polar(1.0, phi_symbol[p]);
    const CVec c = fft.inverse_scaled(rot); // c[d] = (1/N_p) sum_p e^{j phi_p} e^{+j 2 pi p d / N_p}
    const Eigen::Index na = cfg.n_active;
    const Eigen::Index np = cfg.n_fft;
    CVec folded = CVec::Zero(na);
    for (Eigen::Index d = -(na - 1); d <= na - 1; ++d) {
        const Eigen::Index cidx = ((d % np) + np) % np;
        folded[((d % na) + na) % na] += static_cast<double>(na - std::abs(d)) * c[cidx];
    }
    return fft.forward_raw(folded) / static_cast<double>(na);
}

/// Upper cap for the brute-force triple-sum path; it costs O(n_active^3 n_fft).
inline constexpr Eigen::Index kTripleSumFftCap = 64;

/// Index convention for the transmit-side spread sum in the triple-sum path.
/// The physically consistent upper limit is n_active; the fft_range variant
/// extends the sum to n_fft and is kept to document that this reading does
/// not reproduce the chain (see oracle tests for the divergence report).
enum class SpreadSumRange { active_range, fft_range };

/// Brute-force evaluation of the rotation/ICI triple sums:
///   A_k     = sum_f sum_m sum_p e^{j 2 pi (m-f) p / N_p} e^{-j 2 pi (m-f) k / N_a} e^{j phi(p)}
///   B_{n,k} = sum_f sum_m sum_p e^{j 2 pi (m-f) p / N_p} e^{+j 2 pi (k f - n m) / N_a} e^{j phi(p)}
/// with alpha_k = A_k / (N_a N_p) and beta_k = sum_{n != k} s_n B_{n,k} / (N_a N_p).
/// f runs over [0, N_a); m runs over [0, N_a) or [0, N_p) per `range`.
/// Intended for test-time verification at small sizes only.
inline InterferenceDecomposition alpha_beta_sums(const RVec& phi_symbol, const CVec& data,
                                                 const FrameConfig& cfg,
                                                 SpreadSumRange range = SpreadSumRange::active_range) {
    if (cfg.n_fft > kTripleSumFftCap)
        throw ResourceError("alpha_beta_sums: n_fft exceeds the brute-force cap of " +
                            std::to_string(kTripleSumFftCap));
    if (phi_symbol.size() != cfg.n_fft)
        throw ShapeError("alpha_beta_sums: phase segment must cover one symbol body");
    if (data.size() != cfg.n_active)
        throw ShapeError("alpha_beta_sums: data vector must have n_active entries");

    const Eigen::Index na = cfg.n_active;
    const Eigen::Index np = cfg.n_fft;
    const Eigen::Index m_limit = (range == SpreadSumRange::active_range) ? na : np;
    const double two_pi = 2.0 * std::numbers::pi;

    // inner sum over p depends on (m - f) only
    std::vector<cd> inner(static_cast<std::size_t>(m_limit + na), 0.0);
    for (Eigen::Index d = -(na - 1); d <= m_limit - 1; ++d) {
        cd s = 0.0;
        for (Eigen::Index p = 0; p < np; ++p)
            s += std::polar(1.0, two_pi * static_cast<double>(d) * static_cast<double>(p) /
                                     static_cast<double>(np) +
                                 phi_symbol[p]);
        inner[static_cast<std::size_t>(d + na - 1)] = s;
    }
    auto inner_at = [&](Eigen::Index d) { return inner[static_cast<std::size_t>(d + na - 1)]; };

    const double scale = 1.0 / (static_cast<double>(na) * static_cast<double>(np));
    InterferenceDecomposition out;
    out.alpha = CVec::Zero(na);
    out.beta = CVec::Zero(na);
    out.h_eff = CMat::Zero(na, na);
    for (Eigen::Index k = 0; k < na; ++k) {
        cd a = 0.0;
        for (Eigen::Index f = 0; f < na; ++f)
            for (Eigen::Index m = 0; m < m_limit; ++m)
                a += inner_at(m - f) *
                     std::polar(1.0, -two_pi * static_cast<double>(m - f) * static_cast<double>(k) /
                                         static_cast<double>(na));
        out.alpha[k] = a * scale;
        out.h_eff(k, k) = out.alpha[k];
    }
    for (Eigen::Index n = 0; n < na; ++n) {
        for (Eigen::Index k = 0; k < na; ++k) {
            if (n == k)
                continue;
            cd b = 0.0;
            for (Eigen::Index f = 0; f < na; ++f)
                for (Eigen::Index m = 0; m < m_limit; ++m)
                    b += inner_at(m - f) *
                         std::polar(1.0, two_pi *
                                             (static_cast<double>(k * f) - static_cast<double>(n * m)) /
                                             static_cast<double>(na));
            out.h_eff(k, n) = b * scale;
            out.beta[k] += data[n] * b * scale;
        }
    }
    return out;
}

/// Ground-truth phase seen by the estimators plus the residual of the
/// unit-modulus rotation approximation.
struct TruePhase {
    RVec phi_prime;          // arg(alpha_k)
    double modulus_residual; // max_k | |alpha_k| - 1 |
};

inline TruePhase true_phi_prime(const CVec& alpha) {
    TruePhase out;
    out.phi_prime.resize(alpha.size());
    out.modulus_residual = 0.0;
    for (Eigen::Index k = 0; k < alpha.size(); ++k) {
        out.phi_prime[k] = std::arg(alpha[k]);
        out.modulus_residual = std::max(out.modulus_residual, std::abs(std::abs(alpha[k]) - 1.0));
    }
    return out;
}

inline TruePhase true_phi_prime(const InterferenceDecomposition& decomp) {
    return true_phi_prime(decomp.alpha);
}

/// Debug dump: per-subcarrier rotation and ICI terms as CSV.
inline void dump_decomposition_csv(const InterferenceDecomposition& decomp, std::ostream& os) {
    os << "index,alpha_re,alpha_im,beta_re,beta_im\n";
    for (Eigen::Index k = 0; k < decomp.alpha.size(); ++k)
        os << k << ',' << decomp.alpha[k].real() << ',' << decomp.alpha[k].imag() << ','
           << decomp.beta[k].real() << ',' << decomp.beta[k].imag() << '\n';
}

} // namespace pnsim
