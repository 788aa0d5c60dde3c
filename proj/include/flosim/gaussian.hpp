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

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "flosim/skew.hpp"

namespace flosim {

/// Gaussian state of n fermionic modes: real antisymmetric 2n x 2n
/// correlation matrix M with all singular values <= 1 (+1e-9 slack).
/// Construction antisymmetrizes exactly and rejects invalid matrices.
struct GaussianState {
    GaussianState(int n, Eigen::MatrixXd m);

    int n_modes;
    Eigen::MatrixXd corr;
};

GaussianState vacuum_state(int n);

bool is_valid_state(const Eigen::MatrixXd& corr);
bool is_pure(const GaussianState& state);

/// tr(ρ i^p c_{a_1}···c_{a_2p}) = Pf(M restricted to the given rows/columns).
/// Indices are 0-based and must be strictly increasing with even count.
double wick_correlator(const GaussianState& state, const std::vector<int>& indices);

/// Gaussian operator in the regular representation
/// X(θ) = C exp((i/2) θ^T M θ), C != 0.
struct GaussianOperator {
    GaussianOperator(int n, Complex c, Eigen::MatrixXcd m);

    int n_modes;
    Complex prefactor;
    Eigen::MatrixXcd corr;
};

/// The state as a regular Gaussian operator (prefactor 2^{-n}).
GaussianOperator to_operator(const GaussianState& state);

/// tr X = 2^n C.
Complex trace_of(const GaussianOperator& x);

/// Gaussian linear map with action exponent
/// S(θ, η) = (i/2) (θ^T, η^T) [[A, B], [-B^T, D]] (θ; η) and scalar C.
/// A and D are antisymmetrized at construction.
struct GaussianMap {
    GaussianMap(int n, Eigen::MatrixXcd a, Eigen::MatrixXcd b, Eigen::MatrixXcd d, Complex c);

    int n_modes;
    Eigen::MatrixXcd A, B, D;
    Complex C;
};

GaussianMap identity_map(int n);

/// Unitary canonical transformation: A = D = 0, B = R^T, C = 1.
GaussianMap rotation_map(const Eigen::MatrixXd& rotation);

struct SingularUpdate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularComposition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// (-1)^n Pf([[M, I], [-I, D]]); equals (-1)^n Pf(M) Pf(M^{-1} + D) whenever
/// M is invertible and extends it continuously to singular M.  This is the
/// scalar the image of a Gaussian operator picks up under a map.
Complex gaussian_pair_prefactor(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& d);

/// Image of a regular Gaussian operator:
///   corr'      = B (I + M D)^{-1} M B^T + A
///   prefactor' = C_in · C_map · gaussian_pair_prefactor(M, D).
/// Throws SingularUpdate when (I + M D) is numerically singular (the image
/// is a traceless Gaussian operator, outside the regular representation).
GaussianOperator apply_map(const GaussianMap& map, const GaussianOperator& x);

/// C² det(I + M D) tr(X)², the squared trace of the image (phase-free route).
Complex trace_of_image_squared(const GaussianMap& map, const GaussianOperator& x);

bool is_trace_preserving(const GaussianMap& map);
bool is_bistochastic(const GaussianMap& map);
bool is_completely_positive(const GaussianMap& map);

/// Raw measurements behind the certification verdicts, for margin reporting.
struct MapCertificate {
    bool trace_preserving = false;
    bool bistochastic = false;
    bool completely_positive = false;
    double d_max = 0.0;            // ‖D‖_max            (TP wants <= 1e-10)
    double c_minus_one = 0.0;      // |C - 1|            (TP wants <= 1e-10)
    double a_max = 0.0;            // ‖A‖_max            (bistochastic wants <= 1e-10)
    double c_imag = 0.0;           // |Im C|             (CP wants <= 1e-12)
    double c_real = 0.0;           // Re C               (CP wants >= -1e-12)
    double block_imag_max = 0.0;   // ‖Im block‖_max     (CP wants <= 1e-10)
    double block_sigma_max = 0.0;  // σ_max of the real block (CP wants <= 1 + 1e-9)
};

MapCertificate certify(const GaussianMap& map);

/// Jamiolkowski-style dual operator on the doubled mode set: prefactor
/// C / 2^{2n} and correlation matrix [[A, B], [-B^T, D]].
struct DualOperator {
    int n_modes;         // modes of the parent map; the dual lives on 2n modes
    Complex prefactor;
    Eigen::MatrixXcd corr;

    GaussianOperator as_operator() const;
};

DualOperator dual_state(const GaussianMap& map);

/// second ∘ first.  Defined whenever (I + A_first D_second) is nonsingular:
///   A' = A2 + B2 P A1 B2^T,  B' = B2 P B1,  D' = D1 + B1^T D2 P B1,
///   C' = C1 C2 · gaussian_pair_prefactor(A1, D2),   P = (I + A1 D2)^{-1}.
GaussianMap compose(const GaussianMap& second, const GaussianMap& first);

/// B = R_left · diag · R_right with R_left, R_right in SO(2n) and diagonal
/// entries in [-1, 1]; requires a bistochastic completely positive map.
struct BistochasticDecomposition {
    Eigen::MatrixXd rotation_left;
    Eigen::VectorXd diagonal;
    Eigen::MatrixXd rotation_right;
};

BistochasticDecomposition decompose_bistochastic(const GaussianMap& map);

}  // namespace flosim
