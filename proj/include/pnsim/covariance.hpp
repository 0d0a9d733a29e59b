#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/estimators.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/oracle.hpp"
#include "pnsim/pn_model.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/rng.hpp"
#include "pnsim/waveform.hpp"

#include <Eigen/Eigenvalues>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

namespace pnsim {

/// Raw correlation matrices backing the interpolation filter:
///   r_phi  = E[Phi' Phi'^H]   (unit-modulus rotation vector)
///   r_beta = E[beta beta^H]   (ICI vector for random unit-power data)
///   r_w    = sigma2 I         (post-demodulation noise, set analytically)
/// These are raw moments (no mean removal), exactly as the filter derivation
/// consumes them.
struct CovarianceSet {
    CMat r_phi;
    CMat r_beta;
    CMat r_w;

    struct Meta {
        std::string model_id = "unknown";
        Eigen::Index n_frames = 0;
        Eigen::Index n_realizations = 0;
        double fs_hz = 0.0;
        double sigma2 = 0.0;
        double beta_mean_ratio = 0.0; // ||mean beta|| / (sqrt(N_a) rms beta)
    } meta;

    Eigen::Index n_active() const { return r_phi.rows(); }

    /// Structural checks every emitted or loaded set must satisfy.
    void validate() const {
        auto check = [&](const CMat& m, const char* name) {
            if (m.rows() != m.cols() || m.rows() != r_phi.rows())
                throw ValidationError(std::string("CovarianceSet: ") + name + " has wrong shape");
            const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
            if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
                throw ValidationError(std::string("CovarianceSet: ") + name + " is not Hermitian");
            Eigen::SelfAdjointEigenSolver<CMat> eig(m, Eigen::EigenvaluesOnly);
            const double floor = -1e-8 * std::abs(m.real().trace()) / static_cast<double>(m.rows());
            if (eig.eigenvalues().minCoeff() < floor)
                throw ValidationError(std::string("CovarianceSet: ") + name +
                                      " is not positive semidefinite");
        };
        check(r_phi, "r_phi");
        check(r_beta, "r_beta");
        check(r_w, "r_w");
        for (Eigen::Index i = 0; i < r_phi.rows(); ++i)
            if (std::abs(r_phi(i, i) - cd(1.0, 0.0)) > 1e-10)
                throw ValidationError("CovarianceSet: r_phi diagonal must be 1");
    }
};

/// sigma2 * I: the post-demodulation noise correlation under the white model.
inline CMat rw_model(double sigma2, Eigen::Index n_active) {
    if (sigma2 < 0.0)
        throw std::domain_error("rw_model: variance must be non-negative");
    return sigma2 * CMat::Identity(n_active, n_active);
}

/// Train r_phi and r_beta by Monte Carlo over independent PN realizations.
///
/// Per symbol: draw a fresh phase segment, compute the exact rotation terms
/// (fast diagonal path) and the ICI vector beta = chain(s) - alpha .* s for
/// random unit-power QPSK data. Thermal noise is excluded; r_w is analytic
/// (sigma2 parameter, usually set later per SNR point). Frames parallelize
/// over workers; realization vectors land in preassigned panel columns and
/// are reduced in a fixed order, so results do not depend on thread count.
inline CovarianceSet train_covariances(const FrameConfig& cfg, const PnModel& model,
                                       Eigen::Index n_frames, std::uint64_t seed,
                                       double sigma2 = 0.0, unsigned workers = 1) {
    if (n_frames < 1)
        throw ConfigError("train_covariances: n_frames must be positive");
    cfg.validate();

    const Eigen::Index na = cfg.n_active;
    const Eigen::Index n_real = n_frames * cfg.n_symbols;
    CMat phi_panel(na, n_real);
    CMat beta_panel(na, n_real);

    FrameConfig body_cfg = cfg;
    body_cfg.cp_len = 0;
    body_cfg.n_symbols = 1;

    auto worker = [&](unsigned wid, unsigned stride) {
        Waveform wf(body_cfg);
        Fft fft;
        std::uniform_int_distribution<int> quadrant(0, 3);
        for (Eigen::Index f = wid; f < n_frames; f += stride) {
            const std::uint64_t fseed = derive_seed(seed, 0xC0Bu, static_cast<std::uint64_t>(f));
            const PnTrace trace = model.trace(cfg.frame_len(), cfg.fs_hz, derive_seed(fseed, 1));
            auto rng = make_engine(derive_seed(fseed, 2));
            for (Eigen::Index s = 0; s < cfg.n_symbols; ++s) {
                const RVec phi =
                    trace.samples.segment(s * cfg.symbol_len() + cfg.cp_len, cfg.n_fft);
                const CVec alpha = alpha_diagonal(phi, cfg, fft);
                CVec data(na);
                for (Eigen::Index i = 0; i < na; ++i)
                    data[i] = std::polar(1.0, std::numbers::pi / 4.0 +
                                                  quadrant(rng) * std::numbers::pi / 2.0);
                CVec rot(cfg.n_fft);
                for (Eigen::Index p = 0; p < cfg.n_fft; ++p)
                    rot[p] = std::polar(1.0, phi[p]);
                const CVec chained = wf.demodulate_symbol(wf.modulate_symbol(data).cwiseProduct(rot));
                const Eigen::Index col = f * cfg.n_symbols + s;
                for (Eigen::Index i = 0; i < na; ++i)
                    phi_panel(i, col) = std::polar(1.0, std::arg(alpha[i]));
                beta_panel.col(col) = chained - alpha.cwiseProduct(data);
            }
        }
    };

    if (workers <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker, w, workers);
        for (auto& t : pool)
            t.join();
    }

    CovarianceSet out;
    const double inv_n = 1.0 / static_cast<double>(n_real);
    out.r_phi = (phi_panel * phi_panel.adjoint()) * inv_n;
    out.r_beta = (beta_panel * beta_panel.adjoint()) * inv_n;
    // enforce Hermitian symmetry lost to rounding
    out.r_phi = (0.5 * (out.r_phi + out.r_phi.adjoint())).eval();
    out.r_beta = (0.5 * (out.r_beta + out.r_beta.adjoint())).eval();
    out.r_w = rw_model(sigma2, na);

    const CVec beta_mean = beta_panel.rowwise().mean();
    const double rms_beta = std::sqrt(out.r_beta.real().trace() / static_cast<double>(na));
    out.meta.beta_mean_ratio =
        (rms_beta > 0.0) ? beta_mean.norm() / (std::sqrt(static_cast<double>(na)) * rms_beta) : 0.0;
    out.meta.model_id = model.id;
    out.meta.n_frames = n_frames;
    out.meta.n_realizations = n_real;
    out.meta.fs_hz = cfg.fs_hz;
    out.meta.sigma2 = sigma2;
    return out;
}

/// Spec-shaped convenience overload: build the filter straight from a set.
inline IfFilter build_if_filter(const CovarianceSet& cov, const SamplingMatrix& m_p,
                                const CVec& s_p) {
    return build_if_filter(cov.r_phi, cov.r_beta, cov.r_w, m_p, s_p);
}

namespace detail {

inline std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_matrix_csv(std::ostream& os, const CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c)
                os << ',';
            os << format_g17(m(r, c).real()) << ',' << format_g17(m(r, c).imag());
        }
        os << '\n';
    }
}

inline CMat read_matrix_csv(std::istream& is, Eigen::Index n) {
    CMat m(n, n);
    std::string line;
    for (Eigen::Index r = 0; r < n; ++r) {
        if (!std::getline(is, line))
            throw IoError("covariance cache: truncated matrix payload");
        std::size_t pos = 0;
        for (Eigen::Index c = 0; c < n; ++c) {
            auto next = [&]() {
                const std::size_t end = line.find(',', pos);
                const std::string tok = line.substr(pos, end - pos);
                pos = (end == std::string::npos) ? line.size() : end + 1;
                return std::stod(tok);
            };
            const double re = next();
            const double im = next();
            m(r, c) = cd(re, im);
        }
    }
    return m;
}

} // namespace detail

/// Portable text cache: small key/value header followed by the two trained
/// matrices as CSV of real/imag pairs. r_w is reconstructed from sigma2.
inline void save_covariances(const CovarianceSet& cov, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open covariance cache for writing: " + path);
    os << "pnsim_covariance_v1\n";
    os << "model_id," << cov.meta.model_id << '\n';
    os << "n_active," << cov.n_active() << '\n';
    os << "n_frames," << cov.meta.n_frames << '\n';
    os << "n_realizations," << cov.meta.n_realizations << '\n';
    os << "fs_hz," << detail::format_g17(cov.meta.fs_hz) << '\n';
    os << "sigma2," << detail::format_g17(cov.meta.sigma2) << '\n';
    os << "beta_mean_ratio," << detail::format_g17(cov.meta.beta_mean_ratio) << '\n';
    os << "matrix,r_phi\n";
    detail::write_matrix_csv(os, cov.r_phi);
    os << "matrix,r_beta\n";
    detail::write_matrix_csv(os, cov.r_beta);
    os << "end\n";
    if (!os)
        throw IoError("write failure on covariance cache: " + path);
}

inline CovarianceSet load_covariances(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open covariance cache: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "pnsim_covariance_v1")
        throw IoError("covariance cache: bad magic line in " + path);

    CovarianceSet cov;
    Eigen::Index n = -1;
    auto split = [](const std::string& l) {
        const auto c = l.find(',');
        if (c == std::string::npos)
            throw IoError("covariance cache: malformed header line");
        return std::pair<std::string, std::string>(l.substr(0, c), l.substr(c + 1));
    };
    while (std::getline(is, line)) {
        if (line == "end")
            break;
        auto [key, value] = split(line);
        if (key == "model_id")
            cov.meta.model_id = value;
        else if (key == "n_active")
            n = std::stol(value);
        else if (key == "n_frames")
            cov.meta.n_frames = std::stol(value);
        else if (key == "n_realizations")
            cov.meta.n_realizations = std::stol(value);
        else if (key == "fs_hz")
            cov.meta.fs_hz = std::stod(value);
        else if (key == "sigma2")
            cov.meta.sigma2 = std::stod(value);
        else if (key == "beta_mean_ratio")
            cov.meta.beta_mean_ratio = std::stod(value);
        else if (key == "matrix") {
            if (n <= 0)
                throw IoError("covariance cache: matrix before n_active header");
            if (value == "r_phi")
                cov.r_phi = detail::read_matrix_csv(is, n);
            else if (value == "r_beta")
                cov.r_beta = detail::read_matrix_csv(is, n);
            else
                throw IoError("covariance cache: unknown matrix " + value);
        } else {
            throw IoError("covariance cache: unknown header key " + key);
        }
    }
    if (cov.r_phi.size() == 0 || cov.r_beta.size() == 0)
        throw IoError("covariance cache: missing matrix payload in " + path);
    cov.r_w = rw_model(cov.meta.sigma2, n);
    cov.validate();
    return cov;
}

} // namespace pnsim
