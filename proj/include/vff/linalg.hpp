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

#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace vff {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest register the dense simulator will allocate (statevector or
/// unitary-as-vector). 10 qubits of system+ancilla, doubled for density
/// matrices.
inline constexpr std::size_t kMaxQubits = 10;

/// Schatten norm selector. `Inf` is the operator norm.
enum class SchattenP { One, Two, Inf };

SchattenP schatten_from_int(int p);

/// (sum_j s_j^p)^(1/p) over the singular values s_j of `m`.
double schatten_norm(const Matrix& m, SchattenP p);

/// Tr(a b^dagger).
cplx hs_inner(const Matrix& a, const Matrix& b);

/// max_ij |(U^dagger U - I)_ij|.
double unitarity_defect(const Matrix& u);

bool is_unitary(const Matrix& u, double tol = 1e-10);

/// exp(-i h t) for Hermitian `h`, through its eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVector hermitian_eigenvalues(const Matrix& h);

/// Eigenvalues of a unitary (general complex eigensolver).
std::vector<cplx> unitary_eigenvalues(const Matrix& u);

/// Integer matrix power by repeated squaring.
Matrix matrix_power(const Matrix& u, std::size_t n);

/// Kronecker product a (x) b with `a` as the leading (most significant)
/// factor.
Matrix kron(const Matrix& a, const Matrix& b);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Matrix haar_unitary(std::size_t dim, std::mt19937_64& rng);

/// Haar-random pure state.
Vector haar_state(std::size_t dim, std::mt19937_64& rng);

bool is_power_of_two(std::size_t x);

/// log2 of a power-of-two dimension; throws std::invalid_argument otherwise.
std::size_t qubits_for_dim(std::size_t dim);

}  // namespace vff
