#pragma once

#include <complex>

#include <Eigen/Core>

namespace disac::fft {

/// Unnormalized DFT conventions used throughout:
///   forward:  X[k] = sum_n x[n] exp(-j 2 pi k n / N)
///   backward: X[k] = sum_n x[n] exp(+j 2 pi k n / N)
/// No 1/N factor on either direction; callers apply whatever scale their
/// signal model requires. Backed by FFTW with a process-wide plan cache;
/// execution is safe from concurrent threads.

void forward_inplace(std::complex<double>* data, int n);
void backward_inplace(std::complex<double>* data, int n);

Eigen::VectorXcd forward(const Eigen::VectorXcd& x);
Eigen::VectorXcd backward(const Eigen::VectorXcd& x);

/// Per-column / per-row transforms of a column-major matrix, in place.
void forward_columns(Eigen::MatrixXcd& m);
void backward_columns(Eigen::MatrixXcd& m);
void forward_rows(Eigen::MatrixXcd& m);
void backward_rows(Eigen::MatrixXcd& m);

}  // namespace disac::fft
