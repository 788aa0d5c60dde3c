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

#include "flosim/skew.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace flosim {

namespace {

template <typename Scalar>
Scalar pfaffian_ltl(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
    const Eigen::Index n = a.rows();
    Scalar pf(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        // Pivot on the largest entry of column k below the diagonal.
        Eigen::Index kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (Eigen::Index i = k + 2; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                kp = i;
            }
        }
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (best == 0.0) {
            return Scalar(0);
        }
        pf *= a(k, k + 1);
        const Eigen::Index rest = n - k - 2;
        if (rest > 0) {
            const auto tau = (a.col(k).segment(k + 2, rest) / a(k + 1, k)).eval();
            const auto w = a.col(k + 1).segment(k + 2, rest).eval();
            a.bottomRightCorner(rest, rest) +=
                tau * w.transpose() - w * tau.transpose();
        }
    }
    return pf;
}

template <typename Scalar>
Scalar matching_sum(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                    std::vector<Eigen::Index>& idx) {
    if (idx.empty()) {
        return Scalar(1);
    }
    Scalar total(0);
    const Eigen::Index i0 = idx.front();
    double sign = 1.0;
    for (std::size_t p = 1; p < idx.size(); ++p) {
        const Eigen::Index j = idx[p];
        std::vector<Eigen::Index> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t q = 1; q < idx.size(); ++q) {
            if (q != p) {
                rest.push_back(idx[q]);
            }
        }
        total += Scalar(sign) * a(i0, j) * matching_sum(a, rest);
        sign = -sign;
    }
    return total;
}

template <typename Scalar>
Scalar pfaffian_combinatorial_impl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    if (a.rows() > 12) {
        throw std::invalid_argument("pfaffian_combinatorial: dimension too large (max 12)");
    }
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(a.rows()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = static_cast<Eigen::Index>(i);
    }
    return matching_sum(a, idx);
}

}  // namespace

double pfaffian(const SkewMatrixXd& s) { return pfaffian_ltl<double>(s.mat()); }

Complex pfaffian(const SkewMatrixXcd& s) { return pfaffian_ltl<Complex>(s.mat()); }

double pfaffian_combinatorial(const SkewMatrixXd& s) {
    return pfaffian_combinatorial_impl<double>(s.mat());
}

Complex pfaffian_combinatorial(const SkewMatrixXcd& s) {
    return pfaffian_combinatorial_impl<Complex>(s.mat());
}

Eigen::MatrixXd BlockDiagonalForm::block_matrix() const {
    const Eigen::Index dim = rotation.rows();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
        b(2 * j, 2 * j + 1) = lambdas(j);
        b(2 * j + 1, 2 * j) = -lambdas(j);
    }
    return b;
}

Eigen::MatrixXd BlockDiagonalForm::reconstruct() const {
    return rotation * block_matrix() * rotation.transpose();
}

BlockDiagonalForm block_diagonalize(const SkewMatrixXd& s) {
    const Eigen::MatrixXd& m = s.mat();
    const Eigen::Index dim = m.rows();
    BlockDiagonalForm out;
    if (dim == 0) {
        out.rotation = Eigen::MatrixXd::Identity(0, 0);
        out.lambdas = Eigen::VectorXd::Zero(0);
        return out;
    }

    Eigen::RealSchur<Eigen::MatrixXd> schur(m);
    if (schur.info() != Eigen::Success) {
        throw std::runtime_error("block_diagonalize: real Schur iteration failed to converge");
    }
    const Eigen::MatrixXd& t = schur.matrixT();
    const Eigen::MatrixXd& u = schur.matrixU();

    // The Schur form of an antisymmetric matrix is block diagonal: 2x2 blocks
    // carry the ±iλ pairs, 1x1 blocks carry (near-)zero eigenvalues.  Zero
    // blocks are collected at the end and paired up there.
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    const double thresh = 1e-11 * scale;
    std::vector<Eigen::Index> order;
    std::vector<Eigen::Index> singles;
    order.reserve(static_cast<std::size_t>(dim));
    Eigen::Index k = 0;
    while (k < dim) {
        if (k + 1 < dim && std::abs(t(k + 1, k)) > thresh) {
            order.push_back(k);
            order.push_back(k + 1);
            k += 2;
        } else {
            singles.push_back(k);
            k += 1;
        }
    }
    order.insert(order.end(), singles.begin(), singles.end());

    Eigen::MatrixXd r(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        r.col(i) = u.col(order[static_cast<std::size_t>(i)]);
    }

    Eigen::VectorXd lambdas(dim / 2);
    for (Eigen::Index j = 0; j < dim / 2; ++j) {
        lambdas(j) = r.col(2 * j).dot(m * r.col(2 * j + 1));
    }

    // det R = +1; flipping a block column flips the matching λ, so the last
    // block absorbs the parity.
    if (r.determinant() < 0) {
        r.col(dim - 1) *= -1.0;
        lambdas(dim / 2 - 1) *= -1.0;
    }

    out.rotation = std::move(r);
    out.lambdas = std::move(lambdas);

    const double residual = (out.reconstruct() - m).cwiseAbs().maxCoeff();
    if (residual > 1e-8 * scale) {
        std::ostringstream msg;
        msg << "block_diagonalize: reconstruction residual " << residual
            << " exceeds tolerance";
        throw std::runtime_error(msg.str());
    }
    return out;
}

Eigen::VectorXd williamson_eigenvalues(const SkewMatrixXd& m) {
    Eigen::VectorXd lam = block_diagonalize(m).lambdas.cwiseAbs();
    std::sort(lam.data(), lam.data() + lam.size(), std::greater<double>());
    return lam;
}

Eigen::MatrixXd rotation_from_generator(const SkewMatrixXd& h) {
    const BlockDiagonalForm bd = block_diagonalize(h);
    const Eigen::Index dim = h.dim();
    Eigen::MatrixXd core = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim / 2; ++j) {
        const double c = std::cos(bd.lambdas(j));
        const double s = std::sin(bd.lambdas(j));
        core(2 * j, 2 * j) = c;
        core(2 * j, 2 * j + 1) = s;
        core(2 * j + 1, 2 * j) = -s;
        core(2 * j + 1, 2 * j + 1) = c;
    }
    return bd.rotation * core * bd.rotation.transpose();
}

}  // namespace flosim
