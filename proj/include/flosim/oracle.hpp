/*
 * Copyright 2026 The flosim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <vector>

#include "flosim/gaussian.hpp"
#include "flosim/grassmann.hpp"

// Brute-force 2^n-dimensional reference implementation.  Everything here is
// a referee for the correlation-matrix pipeline at desk scale; nothing on the
// production path depends on it.
namespace flosim::oracle {

using DenseMatrix = Eigen::MatrixXcd;

/// Jordan-Wigner Majorana matrices c_0, ..., c_{2n-1}: Hermitian, integer
/// entries times phases, {c_a, c_b} = 2 δ_ab.  The convention is pinned so
/// that the Fock vacuum is the first basis vector.  Guarded to n <= 6.
std::vector<DenseMatrix> majoranas(int n);

DenseMatrix identity_op(int n);

/// Grassmann representation of a dense operator: the coefficient of the
/// ascending monomial c_{a_1}···c_{a_p} is 2^{-n} tr(c_{a_p}···c_{a_1} X).
GrassmannPoly omega(const DenseMatrix& x);

/// Inverse of omega; the polynomial must have an even generator count 2n.
DenseMatrix dense_from_grassmann(const GrassmannPoly& f);

/// tr(XY), evaluated both directly and through the Berezin pairing
/// (-2)^n ∫ DθDμ e^{θ^T μ} ω(X,θ) ω(Y,μ); throws if the two routes disagree.
Complex trace_pair(const DenseMatrix& x, const DenseMatrix& y);

/// Density matrix of the Gaussian state with correlation matrix m.
DenseMatrix dense_state(const GaussianState& state);

/// V = exp(iH) with H = (i/4) Σ_ab h_ab c_a c_b.
DenseMatrix canonical_unitary(const Eigen::MatrixXd& h_generator);

/// Extracts R from V c_a V† = Σ_b R_ab c_b.
Eigen::MatrixXd rotation_of_unitary(const DenseMatrix& v);

/// (I + (-1)^outcome i c_{2j} c_{2j+1}) / 2.
DenseMatrix number_projector(int n, int mode, int outcome);

/// Pair correlation matrix M_ab = tr(ρ i c_a c_b) of a dense density matrix.
Eigen::MatrixXd correlation_of(const DenseMatrix& rho);

/// Dense dual operator of a Gaussian map (2^{2n} dimensional).
DenseMatrix dense_dual_state(const GaussianMap& map);

/// Staged Berezin integration of the map's integral kernel against an
/// arbitrary polynomial; independent of apply_map's matrix path.
GrassmannPoly apply_map_symbolic(const GaussianMap& map, const GrassmannPoly& x);

}  // namespace flosim::oracle
