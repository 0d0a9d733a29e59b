#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>

namespace pnsim {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

/// Unitary FFT wrapper. Plans are cached per size inside the backend, so one
/// instance per worker avoids replanning in hot loops. Not thread-safe.
class Fft {
public:
    /// forward: X[k] = (1/sqrt(N)) sum_n x[n] e^{-j 2 pi n k / N}
    CVec forward(const CVec& x) {
        CVec out;
        impl_.fwd(out, x);
        out /= std::sqrt(static_cast<double>(x.size()));
        return out;
    }

    /// inverse: x[n] = (1/sqrt(N)) sum_k X[k] e^{+j 2 pi n k / N}
    CVec inverse(const CVec& x) {
        CVec out;
        impl_.inv(out, x); // backend applies 1/N
        out *= std::sqrt(static_cast<double>(x.size()));
        return out;
    }

    /// Unscaled forward transform: sum_n x[n] e^{-j 2 pi n k / N}.
    CVec forward_raw(const CVec& x) {
        CVec out;
        impl_.fwd(out, x);
        return out;
    }

    /// Inverse with 1/N scaling: (1/N) sum_k X[k] e^{+j 2 pi n k / N}.
    CVec inverse_scaled(const CVec& x) {
        CVec out;
        impl_.inv(out, x);
        return out;
    }

private:
    Eigen::FFT<double> impl_;
};

} // namespace pnsim
