#pragma once

// Thin wrappers over Eigen's FFT (kissfft backend, any transform length).
// Plans are cached per thread, so concurrent use from parallel_for is safe.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace qhalab {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

// Unnormalized DFT: y[k] = sum_j x[j] e^{-2 pi i jk/n}.
inline VectorXcd dft(const VectorXcd& x) {
  VectorXcd y(x.size());
  fft_engine().fwd(y, x);
  return y;
}

// Unnormalized inverse: y[j] = (1/n) sum_k x[k] e^{+2 pi i jk/n}.
inline VectorXcd idft(const VectorXcd& x) {
  VectorXcd y(x.size());
  fft_engine().inv(y, x);
  return y;
}

// Cyclic convolution c[m] = sum_j a[j] b[m-j].
inline VectorXcd cyclic_convolution(const VectorXcd& a, const VectorXcd& b) {
  VectorXcd fa = dft(a), fb = dft(b);
  fa.array() *= fb.array();
  return idft(fa);
}

// Cyclic correlation c[m] = sum_j a[j] conj(b[j-m]).
inline VectorXcd cyclic_correlation(const VectorXcd& a, const VectorXcd& b) {
  VectorXcd fa = dft(a), fb = dft(b);
  fa.array() *= fb.array().conjugate();
  return idft(fa);
}

}  // namespace qhalab
