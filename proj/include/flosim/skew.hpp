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
#include <complex>
#include <stdexcept>
#include <utility>

namespace flosim {

using Complex = std::complex<double>;

/// Antisymmetric matrix with the invariant S = -S^T enforced at construction.
///
/// The plain constructor antisymmetrizes exactly (S <- (S - S^T)/2);
/// `checked` first rejects inputs whose asymmetry exceeds a caller tolerance.
template <typename Scalar>
class SkewMatrix {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    explicit SkewMatrix(Matrix m) : mat_(std::move(m)) {
        if (mat_.rows() != mat_.cols()) {
            throw std::invalid_argument("SkewMatrix: matrix must be square");
        }
        if (mat_.rows() % 2 != 0) {
            throw std::invalid_argument("SkewMatrix: dimension must be even");
        }
        mat_ = (Scalar(0.5) * (mat_ - mat_.transpose())).eval();
    }

    static SkewMatrix checked(const Matrix& m, double tol) {
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("SkewMatrix: matrix must be square");
        }
        const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
        const double scale = 1.0 + m.cwiseAbs().maxCoeff();
        if (asym > tol * scale) {
            throw std::invalid_argument("SkewMatrix: input is not antisymmetric within tolerance");
        }
        return SkewMatrix(m);
    }

    static SkewMatrix zero(Eigen::Index dim) { return SkewMatrix(Matrix::Zero(dim, dim)); }

    const Matrix& mat() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

using SkewMatrixXd = SkewMatrix<double>;
using SkewMatrixXcd = SkewMatrix<Complex>;

/// Pfaffian by skew-symmetric Parlett-Reid elimination with partial pivoting.
/// Sign convention: Pf([[0, a], [-a, 0]]) = a, and each symmetric row/column
/// swap flips the sign. Returns 0 for singular input. Pf(S)^2 = det(S).
double pfaffian(const SkewMatrixXd& s);
Complex pfaffian(const SkewMatrixXcd& s);

/// Exact sum over perfect matchings, (2n-1)!! terms. Test oracle for `pfaffian`;
/// guarded to dim <= 12.
double pfaffian_combinatorial(const SkewMatrixXd& s);
Complex pfaffian_combinatorial(const SkewMatrixXcd& s);

/// Result of bringing a real antisymmetric matrix to its canonical 2x2
/// block-diagonal form M = R (⊕_j [[0, λ_j], [-λ_j, 0]]) R^T, R ∈ SO(2n).
struct BlockDiagonalForm {
    Eigen::MatrixXd rotation;   // orthogonal, det +1
    Eigen::VectorXd lambdas;    // n signed block values

    Eigen::MatrixXd block_matrix() const;   // ⊕_j [[0, λ_j], [-λ_j, 0]]
    Eigen::MatrixXd reconstruct() const;    // R * block_matrix * R^T
};

BlockDiagonalForm block_diagonalize(const SkewMatrixXd& m);

/// |λ_1| >= |λ_2| >= ... of the block-diagonal form.
Eigen::VectorXd williamson_eigenvalues(const SkewMatrixXd& m);

/// Orthogonal exponential R = exp(h) of a real antisymmetric generator,
/// computed per 2x2 block of the canonical form. R R^T = I to machine
/// precision and det R = +1.
Eigen::MatrixXd rotation_from_generator(const SkewMatrixXd& h);

}  // namespace flosim
