#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/ptrs.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace pnsim {

/// De-rotated pilot observations of one received symbol:
///   a_i = r_i s_i^* / |s_i|^2   for every pilot index i.
/// s_p keeps the de-rotation factors s_i^* / |s_i|^2 used by the filter
/// builder. A group-averaged observation stores the representative indices
/// and unit factors instead.
struct PilotObservation {
    CVec a;                            // K de-rotated observations
    std::vector<Eigen::Index> chi_p;   // pilot (or representative) indices
    CVec s_p;                          // de-rotation factors at those indices

    Eigen::Index k() const { return a.size(); }
};

inline PilotObservation observe_pilots(const CVec& received, const PtrsPattern& pattern,
                                       const CVec& pilots) {
    if (received.size() != pattern.n_active)
        throw ShapeError("observe_pilots: received block length must equal n_active");
    if (pilots.size() != pattern.k())
        throw ShapeError("observe_pilots: pilot value count must equal pattern pilot count");
    PilotObservation obs;
    obs.chi_p = pattern.chi_p;
    obs.a.resize(pattern.k());
    obs.s_p.resize(pattern.k());
    for (Eigen::Index i = 0; i < pattern.k(); ++i) {
        const cd s = pilots[i];
        const double mag2 = std::norm(s);
        if (mag2 == 0.0)
            throw DegenerateInputError("observe_pilots: zero pilot value");
        obs.s_p[i] = std::conj(s) / mag2;
        obs.a[i] = received[pattern.chi_p[static_cast<std::size_t>(i)]] * obs.s_p[i];
    }
    return obs;
}

/// Collapse a contiguous-pattern observation to one averaged value per group.
inline PilotObservation group_averaged_observation(const PilotObservation& obs,
                                                   const PtrsPattern& pattern) {
    const GroupAverage ga = group_average(obs.a, pattern);
    PilotObservation out;
    out.a = ga.values;
    out.chi_p = ga.indices;
    out.s_p = CVec::Ones(ga.values.size());
    return out;
}

/// Common phase error estimate: the single angle arg(sum_i a_i).
inline double cpee_estimate(const PilotObservation& obs) {
    if (obs.k() < 1)
        throw DegenerateInputError("cpee_estimate: no pilots");
    const cd sum = obs.a.sum();
    if (sum == cd(0.0, 0.0))
        throw DegenerateInputError("cpee_estimate: pilot observations sum to zero");
    return std::arg(sum);
}

namespace detail {

/// Unwrap in place: add multiples of 2 pi so successive differences lie in
/// (-pi, pi].
inline void unwrap(RVec& phases) {
    const double pi = std::numbers::pi;
    for (Eigen::Index i = 1; i < phases.size(); ++i) {
        double delta = phases[i] - phases[i - 1];
        while (delta > pi)
            delta -= 2.0 * pi;
        while (delta <= -pi)
            delta += 2.0 * pi;
        phases[i] = phases[i - 1] + delta;
    }
}

inline void check_observation_indices(const PilotObservation& obs, Eigen::Index n_active) {
    if (obs.k() < 1)
        throw DegenerateInputError("estimator: empty observation");
    Eigen::Index prev = -1;
    for (Eigen::Index idx : obs.chi_p) {
        if (idx <= prev || idx >= n_active)
            throw ShapeError("estimator: observation indices must be strictly increasing and in range");
        prev = idx;
    }
}

} // namespace detail

/// Piecewise-constant estimate: each observation value holds from its index
/// up to the next one; the last value extends to n_active-1. When the first
/// index is nonzero (group-averaged contiguous observations put it at the
/// first group's center) the first value also covers the leading positions.
inline RVec ci_estimate(const PilotObservation& obs, Eigen::Index n_active) {
    detail::check_observation_indices(obs, n_active);
    RVec out(n_active);
    Eigen::Index seg = 0;
    for (Eigen::Index n = 0; n < n_active; ++n) {
        while (seg + 1 < obs.k() && obs.chi_p[static_cast<std::size_t>(seg + 1)] <= n)
            ++seg;
        out[n] = std::arg(obs.a[seg]);
    }
    return out;
}

/// Piecewise-linear estimate through (index, unwrapped phase) pairs. Outside
/// the observed span the first/last segment's slope is continued, which keeps
/// the estimate exact on linear phase ramps. Falls back to the constant
/// estimate when only one observation is available.
inline RVec li_estimate(const PilotObservation& obs, Eigen::Index n_active) {
    detail::check_observation_indices(obs, n_active);
    if (obs.k() == 1)
        return ci_estimate(obs, n_active);

    RVec phases(obs.k());
    for (Eigen::Index i = 0; i < obs.k(); ++i)
        phases[i] = std::arg(obs.a[i]);
    detail::unwrap(phases);

    RVec out(n_active);
    Eigen::Index seg = 0;
    for (Eigen::Index n = 0; n < n_active; ++n) {
        while (seg + 2 < obs.k() && obs.chi_p[static_cast<std::size_t>(seg + 1)] <= n)
            ++seg;
        const double x0 = static_cast<double>(obs.chi_p[static_cast<std::size_t>(seg)]);
        const double x1 = static_cast<double>(obs.chi_p[static_cast<std::size_t>(seg + 1)]);
        const double slope = (phases[seg + 1] - phases[seg]) / (x1 - x0);
        out[n] = phases[seg] + slope * (static_cast<double>(n) - x0);
    }
    return out;
}

/// Orthonormal DCT-II basis over [0, n_active) restricted to the first n_d
/// functions, together with its rows sampled at the pilot indices.
struct DctBasis {
    RMat psi_na; // n_active x n_d
    RMat psi_k;  // K x n_d
    Eigen::Index n_d = 0;
};

/// Build the DCT basis. Requires n_d <= K: with fewer pilots than basis
/// functions the normal matrix of the fit is singular.
inline DctBasis build_dct_basis(Eigen::Index n_active, const std::vector<Eigen::Index>& chi_p,
                                Eigen::Index n_d) {
    const auto k = static_cast<Eigen::Index>(chi_p.size());
    if (n_d < 1)
        throw ConfigError("build_dct_basis: n_d must be at least 1");
    if (n_d > k)
        throw ConfigError("build_dct_basis: DCT coefficient count n_d (" + std::to_string(n_d) +
                          ") must not exceed the pilot count K (" + std::to_string(k) +
                          "); the basis fit is singular otherwise");
    DctBasis basis;
    basis.n_d = n_d;
    basis.psi_na.resize(n_active, n_d);
    const double pi = std::numbers::pi;
    for (Eigen::Index n = 0; n < n_d; ++n) {
        const double cn = (n == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
        for (Eigen::Index pos = 0; pos < n_active; ++pos)
            basis.psi_na(pos, n) = cn * std::sqrt(2.0 / static_cast<double>(n_active)) *
                                   std::cos(pi * static_cast<double>(n) *
                                            (2.0 * static_cast<double>(pos) + 1.0) /
                                            (2.0 * static_cast<double>(n_active)));
    }
    basis.psi_k.resize(k, n_d);
    for (Eigen::Index i = 0; i < k; ++i)
        basis.psi_k.row(i) = basis.psi_na.row(chi_p[static_cast<std::size_t>(i)]);
    return basis;
}

/// How the reference phase phi_av of the DCT estimator is computed:
/// derotated uses arg(sum_i r_i s_i^* / |s_i|^2); raw_pilot_sum uses
/// arg(sum_i r_i), which is only meaningful when all pilots share one value.
enum class DctReference { derotated, raw_pilot_sum };

/// DCT basis-expansion estimate: remove a reference rotation, least-squares
/// fit the residual pilot phases in the basis, and evaluate the fit over the
/// whole symbol:
///   phi_hat = phi_av + Psi_na (Psi_k^T Psi_k)^{-1} Psi_k^T r'
/// with r'_i = arg(r_i s_i^* e^{-j phi_av}).
inline RVec dct_estimate(const PilotObservation& obs, const DctBasis& basis,
                         const CVec& raw_received_pilots,
                         DctReference reference = DctReference::derotated) {
    if (obs.k() != basis.psi_k.rows())
        throw ShapeError("dct_estimate: basis sampled at a different pilot count");
    if (basis.n_d > obs.k())
        throw ConfigError("dct_estimate: n_d exceeds pilot count");

    double phi_av;
    if (reference == DctReference::raw_pilot_sum) {
        if (raw_received_pilots.size() != obs.k())
            throw ShapeError("dct_estimate: raw pilot vector length mismatch");
        const cd sum = raw_received_pilots.sum();
        if (sum == cd(0.0, 0.0))
            throw DegenerateInputError("dct_estimate: raw pilot sum is zero");
        phi_av = std::arg(sum);
    } else {
        phi_av = cpee_estimate(obs);
    }

    RVec residual(obs.k());
    for (Eigen::Index i = 0; i < obs.k(); ++i)
        residual[i] = std::arg(obs.a[i] * std::polar(1.0, -phi_av));

    const RMat normal = basis.psi_k.transpose() * basis.psi_k;
    Eigen::SelfAdjointEigenSolver<RMat> eig(normal);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e14) {
        const double cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
        throw NumericalError("dct_estimate: singular basis normal matrix, condition number " +
                             std::to_string(cond));
    }
    const RVec coeffs = normal.ldlt().solve(basis.psi_k.transpose() * residual);
    RVec out = basis.psi_na * coeffs;
    out.array() += phi_av;
    return out;
}

/// The n_active x K linear interpolation filter Z mapping de-rotated pilot
/// observations to unit-modulus rotation estimates.
struct IfFilter {
    CMat z;
};

namespace detail {

inline void require_hermitian(const CMat& m, const char* name) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale)
        throw ValidationError(std::string("build_if_filter: matrix ") + name +
                              " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
}

} // namespace detail

/// Assemble the LMMSE interpolation filter
///   Z = R_phi^H M_p^H (P + Q + V)^+
/// with P = M_p R_phi^H M_p^H and Q, V the pilot-weighted ICI and noise
/// blocks [Q]_{ij} = [M_p R_beta^H M_p^H]_{ij} s_p[i] conj(s_p[j]) (same for
/// V with R_w). The K x K system is inverted through a Hermitian
/// eigendecomposition; a Tikhonov ridge of 1e-10 trace/K is added when the
/// condition number exceeds 1e12.
inline IfFilter build_if_filter(const CMat& r_phi, const CMat& r_beta, const CMat& r_w,
                                const SamplingMatrix& m_p, const CVec& s_p) {
    const Eigen::Index k = m_p.rows();
    if (s_p.size() != k)
        throw ShapeError("build_if_filter: s_p length must equal pilot count");
    detail::require_hermitian(r_phi, "r_phi");
    detail::require_hermitian(r_beta, "r_beta");
    detail::require_hermitian(r_w, "r_w");

    const CMat p = m_p.select(r_phi.adjoint());
    CMat a = p;
    const CMat qb = m_p.select(r_beta.adjoint());
    const CMat vb = m_p.select(r_w.adjoint());
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            a(i, j) += (qb(i, j) + vb(i, j)) * s_p[i] * std::conj(s_p[j]);

    // numerical hygiene before the self-adjoint solve
    a = 0.5 * (a + a.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<CMat> eig(a);
    if (eig.info() != Eigen::Success)
        throw NumericalError("build_if_filter: eigendecomposition failed");
    RVec lambda = eig.eigenvalues();
    const double lmax = lambda.maxCoeff();
    const double lmin = lambda.minCoeff();
    const double trace = a.real().trace();
    double ridge = 0.0;
    if (!(lmin > 0.0) || (lmax / lmin) > 1e12)
        ridge = 1e-10 * trace / static_cast<double>(k);
    // Rank-deficient systems additionally need Moore-Penrose truncation:
    // directions at the ridge/roundoff level carry eigenvector noise that a
    // 1/lambda gain of ~1e10 would amplify into visible phase error.
    const double floor = lmax * 1e-9;
    RVec inv_lambda(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double l = lambda[i] + ridge;
        inv_lambda[i] = (l > floor && l > 0.0) ? 1.0 / l : 0.0;
    }
    const CMat a_pinv =
        eig.eigenvectors() * inv_lambda.asDiagonal() * eig.eigenvectors().adjoint();

    // R_phi^H M_p^H: select columns chi_p of R_phi^H
    CMat rphi_cols(r_phi.rows(), k);
    const CMat r_phi_h = r_phi.adjoint();
    for (Eigen::Index i = 0; i < k; ++i)
        rphi_cols.col(i) = r_phi_h.col(m_p.chi_p[static_cast<std::size_t>(i)]);

    IfFilter filter;
    filter.z = rphi_cols * a_pinv;
    return filter;
}

/// phi_hat = arg(Z a_p) element-wise.
inline RVec if_estimate(const IfFilter& filter, const PilotObservation& obs) {
    if (filter.z.cols() != obs.k())
        throw ShapeError("if_estimate: filter built for a different pilot count");
    const CVec v = filter.z * obs.a;
    RVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] == cd(0.0, 0.0))
            throw DegenerateInputError("if_estimate: zero entry, phase undefined");
        out[i] = std::arg(v[i]);
    }
    return out;
}

/// s_hat = r .* e^{-j phi_hat}
inline CVec correct(const CVec& received, const RVec& phi_hat) {
    if (received.size() != phi_hat.size())
        throw ShapeError("correct: estimate length must match the received block");
    CVec out(received.size());
    for (Eigen::Index i = 0; i < received.size(); ++i)
        out[i] = received[i] * std::polar(1.0, -phi_hat[i]);
    return out;
}

/// Scalar broadcast of correct().
inline CVec correct(const CVec& received, double phi_hat) {
    CVec out(received.size());
    const cd rot = std::polar(1.0, -phi_hat);
    for (Eigen::Index i = 0; i < received.size(); ++i)
        out[i] = received[i] * rot;
    return out;
}

} // namespace pnsim
