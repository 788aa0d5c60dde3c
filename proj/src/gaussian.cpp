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

#include "flosim/gaussian.hpp"

#include <cmath>

namespace flosim {

namespace {

constexpr double kStateSigmaTol = 1e-9;
constexpr double kPurityTol = 1e-8;
constexpr double kTpTol = 1e-10;
constexpr double kCpImagTol = 1e-10;
constexpr double kCpScalarTol = 1e-12;
constexpr double kSingularDetTol = 1e-12;
constexpr double kConditionLimit = 1e12;

Eigen::MatrixXcd antisymmetrize(const Eigen::MatrixXcd& m) {
    return 0.5 * (m - m.transpose().eval());
}

void check_square(const Eigen::MatrixXcd& m, Eigen::Index dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

}  // namespace

GaussianState::GaussianState(int n, Eigen::MatrixXd m) : n_modes(n), corr(std::move(m)) {
    if (n < 1) {
        throw std::invalid_argument("GaussianState: need at least one mode");
    }
    if (corr.rows() != 2 * n || corr.cols() != 2 * n) {
        throw std::invalid_argument("GaussianState: correlation matrix must be 2n x 2n");
    }
    corr = (0.5 * (corr - corr.transpose())).eval();
    if (!is_valid_state(corr)) {
        throw std::invalid_argument("GaussianState: correlation matrix has a singular value above 1");
    }
}

GaussianState vacuum_state(int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        m(2 * j, 2 * j + 1) = 1.0;
        m(2 * j + 1, 2 * j) = -1.0;
    }
    return GaussianState(n, std::move(m));
}

bool is_valid_state(const Eigen::MatrixXd& corr) {
    if (corr.rows() != corr.cols() || corr.rows() % 2 != 0 || corr.rows() == 0) {
        return false;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(corr);
    return svd.singularValues()(0) <= 1.0 + kStateSigmaTol;
}

bool is_pure(const GaussianState& state) {
    const Eigen::MatrixXd gram = state.corr.transpose() * state.corr;
    const Eigen::Index dim = state.corr.rows();
    return (gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= kPurityTol;
}

double wick_correlator(const GaussianState& state, const std::vector<int>& indices) {
    if (indices.size() % 2 != 0) {
        throw std::invalid_argument("wick_correlator: index count must be even");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= state.corr.rows()) {
            throw std::out_of_range("wick_correlator: index out of range");
        }
        if (i > 0 && indices[i] <= indices[i - 1]) {
            throw std::invalid_argument("wick_correlator: indices must be strictly increasing");
        }
    }
    const Eigen::Index p = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd sub(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
        for (Eigen::Index c = 0; c < p; ++c) {
            sub(r, c) = state.corr(indices[static_cast<std::size_t>(r)],
                                   indices[static_cast<std::size_t>(c)]);
        }
    }
    return pfaffian(SkewMatrixXd(std::move(sub)));
}

GaussianOperator::GaussianOperator(int n, Complex c, Eigen::MatrixXcd m)
    : n_modes(n), prefactor(c), corr(std::move(m)) {
    if (n < 1) {
        throw std::invalid_argument("GaussianOperator: need at least one mode");
    }
    check_square(corr, 2 * n, "GaussianOperator");
    if (std::abs(prefactor) == 0.0) {
        throw std::invalid_argument(
            "GaussianOperator: zero prefactor is outside the regular representation");
    }
    corr = antisymmetrize(corr);
}

GaussianOperator to_operator(const GaussianState& state) {
    return GaussianOperator(state.n_modes, std::ldexp(1.0, -state.n_modes),
                            state.corr.cast<Complex>());
}

Complex trace_of(const GaussianOperator& x) {
    return std::ldexp(1.0, x.n_modes) * x.prefactor;
}

GaussianMap::GaussianMap(int n, Eigen::MatrixXcd a, Eigen::MatrixXcd b, Eigen::MatrixXcd d,
                         Complex c)
    : n_modes(n), A(std::move(a)), B(std::move(b)), D(std::move(d)), C(c) {
    if (n < 1) {
        throw std::invalid_argument("GaussianMap: need at least one mode");
    }
    check_square(A, 2 * n, "GaussianMap A");
    check_square(B, 2 * n, "GaussianMap B");
    check_square(D, 2 * n, "GaussianMap D");
    A = antisymmetrize(A);
    D = antisymmetrize(D);
}

GaussianMap identity_map(int n) {
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    return GaussianMap(n, zero, Eigen::MatrixXcd::Identity(2 * n, 2 * n), zero, 1.0);
}

GaussianMap rotation_map(const Eigen::MatrixXd& rotation) {
    const Eigen::Index dim = rotation.rows();
    if (rotation.cols() != dim || dim % 2 != 0 || dim == 0) {
        throw std::invalid_argument("rotation_map: rotation must be 2n x 2n");
    }
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(dim, dim);
    return GaussianMap(static_cast<int>(dim / 2), zero,
                       rotation.transpose().cast<Complex>(), zero, 1.0);
}

Complex gaussian_pair_prefactor(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& d) {
    const Eigen::Index dim = m.rows();
    Eigen::MatrixXcd block(2 * dim, 2 * dim);
    block.topLeftCorner(dim, dim) = m;
    block.topRightCorner(dim, dim) = Eigen::MatrixXcd::Identity(dim, dim);
    block.bottomLeftCorner(dim, dim) = -Eigen::MatrixXcd::Identity(dim, dim);
    block.bottomRightCorner(dim, dim) = d;
    const Complex pf = pfaffian(SkewMatrixXcd(std::move(block)));
    return (dim / 2) % 2 == 0 ? pf : -pf;
}

GaussianOperator apply_map(const GaussianMap& map, const GaussianOperator& x) {
    if (map.n_modes != x.n_modes) {
        throw std::invalid_argument("apply_map: mode-count mismatch");
    }
    const Eigen::Index dim = 2 * map.n_modes;
    const Eigen::MatrixXcd pivot =
        Eigen::MatrixXcd::Identity(dim, dim) + x.corr * map.D;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pivot);
    if (std::abs(lu.determinant()) <= kSingularDetTol || 1.0 / lu.rcond() > kConditionLimit) {
        throw SingularUpdate("apply_map: (I + M D) is singular; the image is traceless");
    }
    const Eigen::MatrixXcd core = lu.solve(x.corr);
    Eigen::MatrixXcd corr_out = map.B * core * map.B.transpose() + map.A;
    const Complex c_out = x.prefactor * map.C * gaussian_pair_prefactor(x.corr, map.D);
    if (std::abs(c_out) == 0.0) {
        throw SingularUpdate("apply_map: image has zero trace");
    }
    return GaussianOperator(map.n_modes, c_out, std::move(corr_out));
}

Complex trace_of_image_squared(const GaussianMap& map, const GaussianOperator& x) {
    const Eigen::Index dim = 2 * map.n_modes;
    const Eigen::MatrixXcd pivot =
        Eigen::MatrixXcd::Identity(dim, dim) + x.corr * map.D;
    const Complex tr_in = trace_of(x);
    return map.C * map.C * pivot.determinant() * tr_in * tr_in;
}

MapCertificate certify(const GaussianMap& map) {
    MapCertificate cert;
    cert.d_max = map.D.cwiseAbs().maxCoeff();
    cert.c_minus_one = std::abs(map.C - Complex(1.0, 0.0));
    cert.a_max = map.A.cwiseAbs().maxCoeff();
    cert.c_imag = std::abs(map.C.imag());
    cert.c_real = map.C.real();

    const Eigen::Index dim = 2 * map.n_modes;
    Eigen::MatrixXcd block(2 * dim, 2 * dim);
    block.topLeftCorner(dim, dim) = map.A;
    block.topRightCorner(dim, dim) = map.B;
    block.bottomLeftCorner(dim, dim) = -map.B.transpose();
    block.bottomRightCorner(dim, dim) = map.D;
    cert.block_imag_max = block.imag().cwiseAbs().maxCoeff();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(block.real());
    cert.block_sigma_max = svd.singularValues()(0);

    cert.trace_preserving = cert.d_max <= kTpTol && cert.c_minus_one <= kTpTol;
    cert.bistochastic = cert.trace_preserving && cert.a_max <= kTpTol;
    cert.completely_positive = cert.c_imag <= kCpScalarTol && cert.c_real >= -kCpScalarTol &&
                               cert.block_imag_max <= kCpImagTol &&
                               cert.block_sigma_max <= 1.0 + kStateSigmaTol;
    return cert;
}

bool is_trace_preserving(const GaussianMap& map) { return certify(map).trace_preserving; }

bool is_bistochastic(const GaussianMap& map) { return certify(map).bistochastic; }

bool is_completely_positive(const GaussianMap& map) {
    return certify(map).completely_positive;
}

GaussianOperator DualOperator::as_operator() const {
    return GaussianOperator(2 * n_modes, prefactor, corr);
}

DualOperator dual_state(const GaussianMap& map) {
    const Eigen::Index dim = 2 * map.n_modes;
    DualOperator dual;
    dual.n_modes = map.n_modes;
    dual.prefactor = map.C * std::ldexp(1.0, -2 * map.n_modes);
    dual.corr.resize(2 * dim, 2 * dim);
    dual.corr.topLeftCorner(dim, dim) = map.A;
    dual.corr.topRightCorner(dim, dim) = map.B;
    dual.corr.bottomLeftCorner(dim, dim) = -map.B.transpose();
    dual.corr.bottomRightCorner(dim, dim) = map.D;
    return dual;
}

GaussianMap compose(const GaussianMap& second, const GaussianMap& first) {
    if (second.n_modes != first.n_modes) {
        throw std::invalid_argument("compose: mode-count mismatch");
    }
    const Eigen::Index dim = 2 * first.n_modes;
    const Eigen::MatrixXcd pivot =
        Eigen::MatrixXcd::Identity(dim, dim) + first.A * second.D;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pivot);
    if (std::abs(lu.determinant()) <= kSingularDetTol) {
        throw SingularComposition("compose: (I + A1 D2) is singular");
    }
    const Eigen::MatrixXcd pa = lu.solve(first.A);   // (I + A1 D2)^{-1} A1
    const Eigen::MatrixXcd pb = lu.solve(first.B);   // (I + A1 D2)^{-1} B1
    Eigen::MatrixXcd a_out = second.A + second.B * pa * second.B.transpose();
    Eigen::MatrixXcd b_out = second.B * pb;
    Eigen::MatrixXcd d_out = first.D + first.B.transpose() * second.D * pb;
    const Complex c_out =
        first.C * second.C * gaussian_pair_prefactor(first.A, second.D);
    return GaussianMap(first.n_modes, std::move(a_out), std::move(b_out), std::move(d_out),
                       c_out);
}

BistochasticDecomposition decompose_bistochastic(const GaussianMap& map) {
    const MapCertificate cert = certify(map);
    if (!cert.bistochastic || !cert.completely_positive) {
        throw std::invalid_argument(
            "decompose_bistochastic: map must be bistochastic and completely positive");
    }
    const Eigen::MatrixXd b = map.B.real();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd u = svd.matrixU();
    Eigen::MatrixXd v = svd.matrixV();
    Eigen::VectorXd diag = svd.singularValues();
    const Eigen::Index last = diag.size() - 1;
    // Singular values sort descending, so the sign repairs land on the
    // smallest entry.
    if (u.determinant() < 0) {
        u.col(last) *= -1.0;
        diag(last) *= -1.0;
    }
    if (v.determinant() < 0) {
        v.col(last) *= -1.0;
        diag(last) *= -1.0;
    }
    BistochasticDecomposition out;
    out.rotation_left = std::move(u);
    out.diagonal = std::move(diag);
    out.rotation_right = v.transpose();
    return out;
}

}  // namespace flosim
