#pragma once

#include "pnsim/errors.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/rng.hpp"

#include <cstdint>
#include <numbers>
#include <vector>

namespace pnsim {

/// Pilot placement inside one DFT-s-OFDM symbol (pre-spreading indexes).
///
/// distributed: pilots every l_spacing positions starting at 0, K = n_active/L.
/// contiguous:  n_groups blocks of group_size adjacent pilots; group g starts
///              at floor(g * n_active / n_groups); K = n_groups * group_size.
struct PtrsPattern {
    enum class Kind { distributed, contiguous };

    Kind kind = Kind::distributed;
    Eigen::Index n_active = 0;
    Eigen::Index l_spacing = 0;   // distributed only
    Eigen::Index n_groups = 0;    // contiguous only
    Eigen::Index group_size = 0;  // contiguous only
    std::vector<Eigen::Index> chi_p;

    Eigen::Index k() const { return static_cast<Eigen::Index>(chi_p.size()); }

    std::string describe() const {
        if (kind == Kind::distributed)
            return "distributed(l=" + std::to_string(l_spacing) + ")";
        return "contiguous(ng=" + std::to_string(n_groups) + ",ns=" + std::to_string(group_size) + ")";
    }
};

inline PtrsPattern distributed_pattern(Eigen::Index n_active, Eigen::Index l_spacing) {
    if (l_spacing < 1 || n_active < 1 || n_active % l_spacing != 0)
        throw ConfigError("distributed_pattern: spacing must divide n_active");
    PtrsPattern p;
    p.kind = PtrsPattern::Kind::distributed;
    p.n_active = n_active;
    p.l_spacing = l_spacing;
    for (Eigen::Index i = 0; i < n_active; i += l_spacing)
        p.chi_p.push_back(i);
    return p;
}

inline PtrsPattern contiguous_pattern(Eigen::Index n_active, Eigen::Index n_groups,
                                      Eigen::Index group_size) {
    if (n_groups < 1 || group_size < 1)
        throw ConfigError("contiguous_pattern: group count and size must be positive");
    if (n_groups * group_size > n_active)
        throw ConfigError("contiguous_pattern: n_groups * group_size exceeds n_active");
    PtrsPattern p;
    p.kind = PtrsPattern::Kind::contiguous;
    p.n_active = n_active;
    p.n_groups = n_groups;
    p.group_size = group_size;
    for (Eigen::Index g = 0; g < n_groups; ++g) {
        const Eigen::Index start = (g * n_active) / n_groups;
        if (start + group_size > n_active ||
            (g + 1 < n_groups && start + group_size > ((g + 1) * n_active) / n_groups))
            throw ConfigError("contiguous_pattern: group overlaps the next group start");
        for (Eigen::Index i = 0; i < group_size; ++i)
            p.chi_p.push_back(start + i);
    }
    return p;
}

/// Random unit-modulus QPSK pilot values; deterministic per seed.
inline CVec pilot_sequence(Eigen::Index k, std::uint64_t seed) {
    if (k < 1)
        throw ConfigError("pilot_sequence: need at least one pilot");
    auto rng = make_engine(seed);
    std::uniform_int_distribution<int> quadrant(0, 3);
    CVec out(k);
    for (Eigen::Index i = 0; i < k; ++i)
        out[i] = std::polar(1.0, std::numbers::pi / 4.0 + quadrant(rng) * std::numbers::pi / 2.0);
    return out;
}

/// K x n_active selection matrix with one 1 per row at column chi_p[i].
struct SamplingMatrix {
    std::vector<Eigen::Index> chi_p;
    Eigen::Index n_active = 0;

    Eigen::Index rows() const { return static_cast<Eigen::Index>(chi_p.size()); }

    /// (M_p v)_i = v[chi_p[i]]
    CVec apply(const CVec& v) const {
        if (v.size() != n_active)
            throw ShapeError("SamplingMatrix::apply: vector length mismatch");
        CVec out(rows());
        for (Eigen::Index i = 0; i < rows(); ++i)
            out[i] = v[chi_p[i]];
        return out;
    }

    /// Dense 0/1 matrix form.
    RMat to_matrix() const {
        RMat m = RMat::Zero(rows(), n_active);
        for (Eigen::Index i = 0; i < rows(); ++i)
            m(i, chi_p[i]) = 1.0;
        return m;
    }

    /// Select the K x K submatrix A[chi_p, chi_p] (i.e. M_p A M_p^H).
    CMat select(const CMat& a) const {
        if (a.rows() != n_active || a.cols() != n_active)
            throw ShapeError("SamplingMatrix::select: matrix must be n_active square");
        CMat out(rows(), rows());
        for (Eigen::Index i = 0; i < rows(); ++i)
            for (Eigen::Index j = 0; j < rows(); ++j)
                out(i, j) = a(chi_p[i], chi_p[j]);
        return out;
    }

    /// Select K rows: M_p A (size K x n_active). Used as (A M_p^H)^T helper.
    CMat select_rows(const CMat& a) const {
        if (a.rows() != n_active)
            throw ShapeError("SamplingMatrix::select_rows: row count mismatch");
        CMat out(rows(), a.cols());
        for (Eigen::Index i = 0; i < rows(); ++i)
            out.row(i) = a.row(chi_p[i]);
        return out;
    }
};

inline SamplingMatrix sampling_matrix(const PtrsPattern& pattern) {
    SamplingMatrix m;
    m.chi_p = pattern.chi_p;
    m.n_active = pattern.n_active;
    return m;
}

/// One averaged observation per contiguous group.
struct GroupAverage {
    CVec values;                       // complex mean of each group
    std::vector<Eigen::Index> indices; // representative index: floor of group mean
};

/// Average de-rotated pilot observations within each contiguous group. The
/// mean is taken in the complex domain, not over wrapped phases, so values
/// straddling +-pi average correctly.
inline GroupAverage group_average(const CVec& pilot_values, const PtrsPattern& pattern) {
    if (pattern.kind != PtrsPattern::Kind::contiguous)
        throw UsageError("group_average: pattern must be contiguous");
    if (pilot_values.size() != pattern.k())
        throw ShapeError("group_average: value count must equal pilot count");
    GroupAverage out;
    out.values.resize(pattern.n_groups);
    out.indices.reserve(static_cast<std::size_t>(pattern.n_groups));
    for (Eigen::Index g = 0; g < pattern.n_groups; ++g) {
        cd sum = 0.0;
        double idx_sum = 0.0;
        for (Eigen::Index i = 0; i < pattern.group_size; ++i) {
            const Eigen::Index flat = g * pattern.group_size + i;
            sum += pilot_values[flat];
            idx_sum += static_cast<double>(pattern.chi_p[static_cast<std::size_t>(flat)]);
        }
        out.values[g] = sum / static_cast<double>(pattern.group_size);
        out.indices.push_back(static_cast<Eigen::Index>(idx_sum / static_cast<double>(pattern.group_size)));
    }
    return out;
}

} // namespace pnsim
