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

#include "flosim/oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flosim::oracle {

namespace {

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

int modes_of(const DenseMatrix& x) {
    const Eigen::Index dim = x.rows();
    if (dim != x.cols() || dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("oracle: operator dimension must be a power of two");
    }
    return std::countr_zero(static_cast<unsigned long long>(dim));
}

// Ascending product c_{a_1}···c_{a_p} for the bits of mask.
DenseMatrix monomial_matrix(const std::vector<DenseMatrix>& c, std::uint64_t mask, int n) {
    DenseMatrix out = identity_op(n);
    std::uint64_t rest = mask;
    while (rest != 0) {
        const int a = std::countr_zero(rest);
        out = out * c[static_cast<std::size_t>(a)];
        rest &= rest - 1;
    }
    return out;
}

}  // namespace

std::vector<DenseMatrix> majoranas(int n) {
    if (n < 1 || n > 6) {
        throw std::invalid_argument("majoranas: mode count must be in [1, 6]");
    }
    DenseMatrix x(2, 2), y(2, 2), z(2, 2), id2(2, 2);
    x << 0, 1, 1, 0;
    // Sign pinned so that a = (c_{2j} - i c_{2j+1})/2 annihilates the first
    // basis vector: the Fock vacuum is index 0.
    y << 0, Complex(0, 1), Complex(0, -1), 0;
    z << 1, 0, 0, -1;
    id2 << 1, 0, 0, 1;

    std::vector<DenseMatrix> out;
    out.reserve(static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        for (const DenseMatrix& local : {x, y}) {
            DenseMatrix m(1, 1);
            m << 1;
            for (int k = 0; k < n; ++k) {
                if (k < j) {
                    m = kron(m, z);
                } else if (k == j) {
                    m = kron(m, local);
                } else {
                    m = kron(m, id2);
                }
            }
            out.push_back(std::move(m));
        }
    }
    return out;
}

DenseMatrix identity_op(int n) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    return DenseMatrix::Identity(dim, dim);
}

GrassmannPoly omega(const DenseMatrix& x) {
    const int n = modes_of(x);
    const std::vector<DenseMatrix> c = majoranas(n);
    const double norm = std::ldexp(1.0, -n);
    GrassmannPoly poly(2 * n);
    const std::uint64_t limit = std::uint64_t(1) << (2 * n);
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        // Reversed-order conjugate monomial: c_{a_p}···c_{a_1} c_{a_1}···c_{a_p} = I.
        DenseMatrix rev = identity_op(n);
        std::uint64_t rest = mask;
        while (rest != 0) {
            const int a = std::countr_zero(rest);
            rev = c[static_cast<std::size_t>(a)] * rev;
            rest &= rest - 1;
        }
        const Complex coeff = norm * (rev * x).trace();
        if (std::abs(coeff) > GrassmannPoly::kPruneThreshold) {
            poly.add_term(mask, coeff);
        }
    }
    return poly;
}

DenseMatrix dense_from_grassmann(const GrassmannPoly& f) {
    if (f.num_generators() % 2 != 0) {
        throw std::invalid_argument("dense_from_grassmann: generator count must be even");
    }
    const int n = f.num_generators() / 2;
    const std::vector<DenseMatrix> c = majoranas(n);
    DenseMatrix out = DenseMatrix::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
    for (const auto& [mask, value] : f.terms()) {
        out += value * monomial_matrix(c, mask, n);
    }
    return out;
}

Complex trace_pair(const DenseMatrix& x, const DenseMatrix& y) {
    const int n = modes_of(x);
    if (y.rows() != x.rows() || n > 4) {
        throw std::invalid_argument("trace_pair: operators must match and have n <= 4");
    }
    const Complex direct = (x * y).trace();

    const int m = 2 * n;
    GrassmannPoly kernel = GrassmannPoly::constant(2 * m, 1.0);
    for (int a = 0; a < m; ++a) {
        GrassmannPoly factor = GrassmannPoly::constant(2 * m, 1.0);
        factor.add_term((std::uint64_t(1) << a) | (std::uint64_t(1) << (m + a)), 1.0);
        kernel = mul(kernel, factor);
    }
    const GrassmannPoly paired =
        mul(kernel, mul(shift_generators(omega(x), 0, 2 * m), shift_generators(omega(y), m, 2 * m)));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex via_berezin = sign * std::ldexp(1.0, n) * berezin_full(paired);

    const double scale = 1.0 + std::abs(direct);
    if (std::abs(direct - via_berezin) > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "trace_pair: matrix trace " << direct << " and Berezin pairing " << via_berezin
            << " disagree";
        throw std::runtime_error(msg.str());
    }
    return direct;
}

DenseMatrix dense_state(const GaussianState& state) {
    if (state.n_modes > 5) {
        throw std::invalid_argument("dense_state: n <= 5");
    }
    return dense_from_grassmann(
        gaussian_exp(state.corr.cast<Complex>(), std::ldexp(1.0, -state.n_modes)));
}

DenseMatrix canonical_unitary(const Eigen::MatrixXd& h_generator) {
    const int n = static_cast<int>(h_generator.rows() / 2);
    const std::vector<DenseMatrix> c = majoranas(n);
    DenseMatrix h = DenseMatrix::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) {
            if (a != b && h_generator(a, b) != 0.0) {
                h += Complex(0, 0.25) * h_generator(a, b) * (c[a] * c[b]);
            }
        }
    }
    // H is Hermitian, so exp(iH) comes from its eigendecomposition.
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    Eigen::VectorXcd phases(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        phases(k) = std::exp(Complex(0, ev(k)));
    }
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXd rotation_of_unitary(const DenseMatrix& v) {
    const int n = modes_of(v);
    const std::vector<DenseMatrix> c = majoranas(n);
    const double norm = std::ldexp(1.0, -n);
    Eigen::MatrixXd r(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
        const DenseMatrix conj = v * c[a] * v.adjoint();
        for (int b = 0; b < 2 * n; ++b) {
            r(a, b) = (norm * (c[b] * conj).trace()).real();
        }
    }
    return r;
}

DenseMatrix number_projector(int n, int mode, int outcome) {
    const std::vector<DenseMatrix> c = majoranas(n);
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return 0.5 * (identity_op(n) +
                  Complex(0, sign) * (c[static_cast<std::size_t>(2 * mode)] *
                                      c[static_cast<std::size_t>(2 * mode + 1)]));
}

Eigen::MatrixXd correlation_of(const DenseMatrix& rho) {
    const int n = modes_of(rho);
    const std::vector<DenseMatrix> c = majoranas(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = a + 1; b < 2 * n; ++b) {
            const Complex val = (rho * Complex(0, 1) * c[a] * c[b]).trace();
            m(a, b) = val.real();
            m(b, a) = -val.real();
        }
    }
    return m;
}

DenseMatrix dense_dual_state(const GaussianMap& map) {
    const DualOperator dual = dual_state(map);
    return dense_from_grassmann(gaussian_exp(dual.corr, dual.prefactor));
}

GrassmannPoly apply_map_symbolic(const GaussianMap& map, const GrassmannPoly& x) {
    const int m = 2 * map.n_modes;
    if (x.num_generators() != m) {
        throw std::invalid_argument("apply_map_symbolic: generator-count mismatch");
    }

    // Stage one: f(η) = ∫Dμ exp(i η^T μ) X(μ), with η on 0..m-1 and μ on m..2m-1.
    GrassmannPoly kernel(2 * m);
    for (int a = 0; a < m; ++a) {
        kernel.add_term((std::uint64_t(1) << a) | (std::uint64_t(1) << (m + a)), Complex(0, 1));
    }
    std::vector<int> upper(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        upper[static_cast<std::size_t>(a)] = m + a;
    }
    const GrassmannPoly fourier = berezin_partial(
        mul(exp_poly(kernel), shift_generators(x, m, 2 * m)), upper);

    // Stage two: C ∫Dη exp(S(θ, η)) f(η), with θ on 0..m-1 and η on m..2m-1.
    Eigen::MatrixXcd action(2 * m, 2 * m);
    action.topLeftCorner(m, m) = map.A;
    action.topRightCorner(m, m) = map.B;
    action.bottomLeftCorner(m, m) = -map.B.transpose();
    action.bottomRightCorner(m, m) = map.D;
    const GrassmannPoly integrand =
        mul(gaussian_exp(action, 1.0),
            shift_generators(restrict_generators(fourier, m), m, 2 * m));
    return restrict_generators(berezin_partial(integrand, upper), m) * map.C;
}

}  // namespace flosim::oracle
