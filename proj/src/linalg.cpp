// Copyright 2026 The VFF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vff/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace vff {

SchattenP schatten_from_int(int p) {
  switch (p) {
    case 1:
      return SchattenP::One;
    case 2:
      return SchattenP::Two;
    case 0:  // used on the command line for "inf"
      return SchattenP::Inf;
    default:
      throw std::invalid_argument("unsupported Schatten p=" + std::to_string(p) +
                                  " (expected 1, 2 or inf)");
  }
}

double schatten_norm(const Matrix& m, SchattenP p) {
  if (m.size() == 0) return 0.0;
  if (p == SchattenP::Two) {
    // Frobenius norm is the 2-norm of the singular values; no SVD needed.
    return m.norm();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& s = svd.singularValues();
  if (p == SchattenP::Inf) return s.size() ? s.maxCoeff() : 0.0;
  return s.sum();
}

cplx hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hs_inner: dimension mismatch");
  }
  // Tr(A B^dagger) = sum_ij A_ij conj(B_ij)
  return (a.array() * b.array().conjugate()).sum();
}

double unitarity_defect(const Matrix& u) {
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tol) {
  return u.rows() == u.cols() && unitarity_defect(u) < tol;
}

Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("expm_hermitian: eigendecomposition failed");
  }
  const RealVector& w = es.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    phases[k] = std::polar(1.0, -w[k] * t);
  }
  const Matrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

RealVector hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<cplx> unitary_eigenvalues(const Matrix& u) {
  Eigen::ComplexEigenSolver<Matrix> es(u, false);
  std::vector<cplx> out(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index k = 0; k < u.rows(); ++k) out[k] = es.eigenvalues()[k];
  return out;
}

Matrix matrix_power(const Matrix& u, std::size_t n) {
  Matrix result = Matrix::Identity(u.rows(), u.cols());
  Matrix base = u;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n) base = base * base;
  }
  return result;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix haar_unitary(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix z(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = cplx(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0) q.col(j) *= rjj / mag;
  }
  return q;
}

Vector haar_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(gauss(rng), gauss(rng));
  return v / v.norm();
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t qubits_for_dim(std::size_t dim) {
  if (!is_power_of_two(dim)) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

}  // namespace vff
