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

// Acceptance suite: every release-gating property of the simulator, one
// pass/fail line per criterion.  Tolerances are pinned in code; the binary
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "flosim/flo.hpp"
#include "flosim/oracle.hpp"
#include "test_support.hpp"

using namespace flosim;
using namespace flosim::testing;
using oracle::DenseMatrix;

namespace {

int failures = 0;

void report(int index, int total, const char* name, bool pass, double seconds) {
    std::printf("[%d/%d] %-44s %s (%.2f s)\n", index, total, name, pass ? "PASS" : "FAIL",
                seconds);
    if (!pass) {
        ++failures;
    }
}

bool expect(bool condition, const char* what) {
    if (!condition) {
        std::fprintf(stderr, "    failed: %s\n", what);
    }
    return condition;
}

Complex i_power(int n) {
    Complex out(1, 0);
    for (int k = 0; k < ((n % 4) + 4) % 4; ++k) {
        out *= Complex(0, 1);
    }
    return out;
}

// --------------------------------------------------------------------------
// 1. Gaussian-integral identities at n in {1, 2}, 100 random complex M each.

bool criterion_gaussian_integrals() {
    std::mt19937_64 rng(1001);
    bool ok = true;
    for (const int n : {1, 2}) {
        const int m = 2 * n;
        for (int rep = 0; rep < 100; ++rep) {
            Eigen::MatrixXcd mat = random_antisymmetric_complex(rng, m);
            Complex pf = pfaffian(SkewMatrixXcd(mat));
            while (std::abs(pf) < 1e-2) {  // the source-term identity needs invertible M
                mat = random_antisymmetric_complex(rng, m);
                pf = pfaffian(SkewMatrixXcd(mat));
            }

            const Complex lhs1 = berezin_full(gaussian_exp(mat, 1.0));
            const Complex rhs1 = i_power(n) * pf;
            ok &= expect(std::abs(lhs1 - rhs1) <= 1e-10 * std::max(1.0, std::abs(rhs1)),
                         "berezin_full(exp) = i^n Pf(M)");
            GrassmannPoly exponent(2 * m);  // η on 0..m-1, θ on m..2m-1
            for (int a = 0; a < m; ++a) {
                exponent.add_term((std::uint64_t(1) << a) | (std::uint64_t(1) << (m + a)), 1.0);
            }
            for (int a = 0; a < m; ++a) {
                for (int b = a + 1; b < m; ++b) {
                    exponent.add_term(
                        (std::uint64_t(1) << (m + a)) | (std::uint64_t(1) << (m + b)),
                        Complex(0, 1) * mat(a, b));
                }
            }
            std::vector<int> thetas;
            for (int a = 0; a < m; ++a) {
                thetas.push_back(m + a);
            }
            const GrassmannPoly lhs2 = berezin_partial(exp_poly(exponent), thetas);
            const GrassmannPoly rhs2 =
                shift_generators(gaussian_exp((-mat.inverse()).eval(), 1.0), 0, 2 * m) *
                (i_power(n) * pf);
            ok &= expect((lhs2 - rhs2).max_abs_coefficient() <=
                             1e-10 * std::max(1.0, rhs2.max_abs_coefficient()),
                         "source-term gaussian integral");
        }
    }
    return ok;
}

// --------------------------------------------------------------------------
// 2. Pfaffian suite: elimination vs matching sum, and Pf² = det.

bool criterion_pfaffian_suite() {
    std::mt19937_64 rng(1002);
    bool ok = true;
    for (int rep = 0; rep < 500; ++rep) {
        const Eigen::Index dim = 2 * (1 + static_cast<Eigen::Index>(rng() % 5));  // <= 10
        if (rep % 2 == 0) {
            const Eigen::MatrixXd m = random_antisymmetric(rng, dim);
            const double a = pfaffian(SkewMatrixXd(m));
            const double b = pfaffian_combinatorial(SkewMatrixXd(m));
            ok &= expect(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)),
                         "elimination vs combinatorial (real)");
        } else {
            const Eigen::MatrixXcd m = random_antisymmetric_complex(rng, dim);
            const Complex a = pfaffian(SkewMatrixXcd(m));
            const Complex b = pfaffian_combinatorial(SkewMatrixXcd(m));
            ok &= expect(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)),
                         "elimination vs combinatorial (complex)");
        }
    }
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::Index dim = 2 * (1 + static_cast<Eigen::Index>(rng() % 8));  // <= 16
        const Eigen::MatrixXd m = random_antisymmetric(rng, dim);
        const double pf = pfaffian(SkewMatrixXd(m));
        const double det = m.determinant();
        ok &= expect(std::abs(pf * pf - det) <= 1e-8 * std::max(1.0, std::abs(det)),
                     "Pf^2 = det (real)");
        const Eigen::MatrixXcd mc = random_antisymmetric_complex(rng, dim);
        const Complex pfc = pfaffian(SkewMatrixXcd(mc));
        const Complex detc = mc.determinant();
        ok &= expect(std::abs(pfc * pfc - detc) <= 1e-8 * std::max(1.0, std::abs(detc)),
                     "Pf^2 = det (complex)");
    }
    return ok;
}

// --------------------------------------------------------------------------
// 3. Probability consistency: det(M K - I)/4 = p_empty² on 1000 states.

bool criterion_probability_consistency() {
    std::mt19937_64 rng(1003);
    bool ok = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const GaussianState state = random_state(rng, n);
        for (int mode = 0; mode < n; ++mode) {
            const double p = 0.5 * (1.0 + state.corr(2 * mode, 2 * mode + 1));
            Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * n, 2 * n);
            k(2 * mode, 2 * mode + 1) = 1.0;
            k(2 * mode + 1, 2 * mode) = -1.0;
            const double det =
                (state.corr * k - Eigen::MatrixXd::Identity(2 * n, 2 * n)).determinant();
            ok &= expect(std::abs(det / 4.0 - p * p) <= 1e-10, "det(MK - I)/4 = p^2");
        }
    }
    return ok;
}

// --------------------------------------------------------------------------
// 4. End-to-end dense equivalence on random circuits at n in {1..4}.

bool criterion_oracle_equivalence() {
    std::mt19937_64 rng(1004);
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 100 && ok; ++rep) {
            GaussianState state = vacuum_state(n);
            DenseMatrix rho = oracle::dense_state(state);
            double branch_flo = 1.0;
            double branch_dense = 1.0;

            const int unitaries = 3 + static_cast<int>(rng() % 6);
            for (int step = 0; step < unitaries; ++step) {
                const Eigen::MatrixXd gen = random_antisymmetric(rng, 2 * n);
                std::uniform_real_distribution<double> tdist(0.0, 2.0);
                const double time = tdist(rng);
                state = evolve_unitary(state, gen, time);
                const DenseMatrix v = oracle::canonical_unitary(time * gen);
                rho = v * rho * v.adjoint();
                ok &= expect((state.corr - oracle::correlation_of(rho)).cwiseAbs().maxCoeff() <=
                                 1e-8,
                             "correlation matrices agree after a unitary");

                if (rng() % 2 == 0) {
                    const int mode = static_cast<int>(rng() % n);
                    const auto [p_empty, p_occ] = outcome_probabilities(state, mode);
                    int outcome;
                    if (std::min(p_empty, p_occ) < 0.05) {
                        outcome = p_empty >= p_occ ? 0 : 1;
                    } else {
                        outcome = static_cast<int>(rng() % 2);
                    }
                    const auto [next, p] = apply_measurement(state, mode, outcome);
                    state = next;
                    const DenseMatrix proj = oracle::number_projector(n, mode, outcome);
                    const DenseMatrix conj = proj * rho * proj;
                    const double p_dense = conj.trace().real();
                    ok &= expect(std::abs(p - p_dense) <= 1e-9,
                                 "branch probability agrees with the dense projector");
                    branch_flo *= p;
                    branch_dense *= p_dense;
                    ok &= expect(std::abs(branch_flo - branch_dense) <= 1e-9,
                                 "cumulative branch probability agrees");
                    rho = conj / p_dense;
                    ok &= expect(
                        (state.corr - oracle::correlation_of(rho)).cwiseAbs().maxCoeff() <= 1e-8,
                        "correlation matrices agree after a measurement");
                }
            }
        }
    }
    return ok;
}

// --------------------------------------------------------------------------
// 5. Gaussianity checker: exponentials pass, perturbed even polynomials fail,
//    operator products of Gaussians pass.

bool criterion_gaussianity_checker() {
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool ok = true;

    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const Eigen::MatrixXcd mat = random_antisymmetric_complex(rng, 2 * n);
        const Complex c(u(rng) + 2.0, u(rng));
        const GrassmannPoly f = gaussian_exp(mat, c);
        const double scale = f.max_abs_coefficient();
        ok &= expect(lambda_ad(f, f).max_abs_coefficient() <= 1e-10 * scale * scale,
                     "gaussian exponential residual is zero");
        ok &= expect(is_gaussian_operator(f), "gaussian exponential passes");
    }

    int produced = 0;
    while (produced < 100) {
        const int m = (rng() % 2 == 0) ? 4 : 6;
        GrassmannPoly f(m);
        const int terms = 2 + static_cast<int>(rng() % 4);
        for (int t = 0; t < terms; ++t) {
            std::uint64_t mask;
            do {
                mask = rng() & ((std::uint64_t(1) << m) - 1);
            } while (std::popcount(mask) % 2 != 0);
            f.add_term(mask, Complex(u(rng), u(rng)));
        }
        const double scale = f.max_abs_coefficient();
        if (scale == 0.0 ||
            lambda_ad(f, f).max_abs_coefficient() <= 1e-6 * scale * scale) {
            continue;  // accidentally Gaussian, redraw
        }
        ++produced;
        ok &= expect(!is_gaussian_operator(f), "non-gaussian even polynomial fails");
    }

    for (int rep = 0; rep < 60; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const DenseMatrix x = oracle::dense_from_grassmann(
            gaussian_exp(random_antisymmetric_complex(rng, 2 * n), 1.0));
        const DenseMatrix y = oracle::dense_from_grassmann(
            gaussian_exp(random_antisymmetric_complex(rng, 2 * n), 1.0));
        ok &= expect(is_gaussian_operator(oracle::omega(x * y)),
                     "operator product of gaussians passes");
    }
    return ok;
}

// --------------------------------------------------------------------------
// 6. CP verdicts against dense dual-state positivity, 200 maps at n = 2.

bool criterion_cp_referee() {
    std::mt19937_64 rng(1006);
    bool ok = true;
    for (int rep = 0; rep < 200; ++rep) {
        const bool cp_by_construction = rep % 2 == 0;
        const GaussianMap map =
            cp_by_construction ? random_cp_map(rng, 2, 0.85) : random_non_cp_map(rng, 2);

        const bool verdict = is_completely_positive(map);
        ok &= expect(verdict == cp_by_construction, "certifier matches the construction");

        const DenseMatrix rho = oracle::dense_dual_state(map);
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        const double min_eig =
            Eigen::SelfAdjointEigenSolver<DenseMatrix>(0.5 * (rho + rho.adjoint()))
                .eigenvalues()
                .minCoeff();
        const bool dense_positive = herm <= 1e-9 && min_eig >= -1e-9;
        ok &= expect(verdict == dense_positive, "certifier matches dense dual positivity");
    }
    return ok;
}

// --------------------------------------------------------------------------
// 7. Composition contract at n in {2, 3}, 200 CP-map pairs.

bool criterion_composition() {
    std::mt19937_64 rng(1007);
    bool ok = true;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const GaussianMap e1 = random_cp_map(rng, n);
        const GaussianMap e2 = random_cp_map(rng, n);
        const GaussianOperator x = random_gaussian_operator(rng, n);
        GaussianOperator seq = apply_map(e1, x);
        GaussianOperator once = x;
        try {
            seq = apply_map(e2, seq);
            once = apply_map(compose(e2, e1), x);
        } catch (const SingularComposition&) {
            continue;  // outside the composable domain
        } catch (const SingularUpdate&) {
            continue;
        }
        ok &= expect((once.corr - seq.corr).cwiseAbs().maxCoeff() <= 1e-8,
                     "composed correlation matrix");
        ok &= expect(std::abs(std::abs(once.prefactor) - std::abs(seq.prefactor)) <=
                         1e-8 * std::max(1.0, std::abs(seq.prefactor)),
                     "composed prefactor magnitude");
        ok &= expect(std::abs(once.prefactor - seq.prefactor) <=
                         1e-8 * std::max(1.0, std::abs(seq.prefactor)),
                     "composed prefactor phase");
    }
    return ok;
}

// --------------------------------------------------------------------------
// 8. Sampling statistics for a fixed 3-mode circuit, 1e5 shots.

bool criterion_sampling_statistics() {
    QuadraticHamiltonian mixer = QuadraticHamiltonian::zero(3);
    mixer.eps << 0.3, -0.7, 0.5;
    mixer.tunneling(0, 1) = Complex(0.9, 0.4);
    mixer.tunneling(1, 2) = Complex(-0.6, 0.8);
    mixer.pairing(0, 2) = Complex(0.5, -0.7);
    QuadraticHamiltonian stir = QuadraticHamiltonian::zero(3);
    stir.tunneling(0, 2) = Complex(0.4, -1.1);
    stir.pairing(0, 1) = Complex(1.0, 0.3);
    stir.pairing(1, 2) = Complex(-0.2, 0.9);

    Circuit circuit;
    circuit.n_modes = 3;
    circuit.ops.push_back(UnitaryOp{hamiltonian_to_generator(mixer), 0.85});
    circuit.ops.push_back(MeasureOp{0, std::nullopt});
    circuit.ops.push_back(UnitaryOp{hamiltonian_to_generator(stir), 1.2});
    circuit.ops.push_back(MeasureOp{1, std::nullopt});
    circuit.ops.push_back(MeasureOp{2, std::nullopt});

    const GaussianState vac = vacuum_state(3);
    const auto exact = enumerate_outcome_distribution(circuit, vac);
    bool ok = expect(exact.size() >= 4, "distribution is nondegenerate");

    constexpr int kShots = 100000;
    const auto shots = run_shots(circuit, vac, 424242, kShots);
    std::map<std::string, int> counts;
    for (const auto& shot : shots) {
        std::string key;
        for (const auto& ev : shot.events) {
            key.push_back(ev.outcome == 0 ? '0' : '1');
        }
        ++counts[key];
    }
    for (const auto& [key, p] : exact) {
        const double freq = counts[key] / double(kShots);
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / kShots);
        ok &= expect(std::abs(freq - p) <= 4.0 * sigma,
                     "empirical frequency within four standard errors");
    }
    return ok;
}

// --------------------------------------------------------------------------
// 9. Conservation: Williamson spectra under unitaries, exact measured blocks,
//    repeated-measurement determinism.

bool criterion_conservation() {
    std::mt19937_64 rng(1009);
    bool ok = true;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const GaussianState state = random_state(rng, n);
        const Eigen::MatrixXd gen = random_antisymmetric(rng, 2 * n);
        const GaussianState evolved = evolve_unitary(state, gen, 1.0);
        const Eigen::VectorXd before = williamson_eigenvalues(SkewMatrixXd(state.corr));
        const Eigen::VectorXd after = williamson_eigenvalues(SkewMatrixXd(evolved.corr));
        ok &= expect((before - after).cwiseAbs().maxCoeff() <= 1e-9,
                     "unitary preserves the Williamson spectrum");

        const int mode = static_cast<int>(rng() % n);
        const auto [p_empty, p_occ] = outcome_probabilities(evolved, mode);
        const int outcome = p_empty >= p_occ ? 0 : 1;
        const auto [post, p] = apply_measurement(evolved, mode, outcome);
        const double sign = outcome == 0 ? 1.0 : -1.0;
        ok &= expect(is_valid_state(post.corr), "post-measurement state is valid");
        ok &= expect(post.corr(2 * mode, 2 * mode + 1) == sign &&
                         post.corr(2 * mode + 1, 2 * mode) == -sign,
                     "measured pair carries the exact projector block");
        const auto [post2, p_again] = apply_measurement(post, mode, outcome);
        ok &= expect(std::abs(p_again - 1.0) <= 1e-10, "repeated measurement is certain");
        ok &= expect((post2.corr - post.corr).cwiseAbs().maxCoeff() <= 1e-9,
                     "repeated measurement leaves the state fixed");
    }
    return ok;
}

struct Criterion {
    const char* name;
    std::function<bool()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"gaussian integral identities", criterion_gaussian_integrals},
        {"pfaffian suite", criterion_pfaffian_suite},
        {"probability consistency", criterion_probability_consistency},
        {"end-to-end dense equivalence", criterion_oracle_equivalence},
        {"gaussianity checker", criterion_gaussianity_checker},
        {"cp certification referee", criterion_cp_referee},
        {"composition contract", criterion_composition},
        {"sampling statistics", criterion_sampling_statistics},
        {"conservation properties", criterion_conservation},
    };
    const int total = static_cast<int>(criteria.size());
    for (int i = 0; i < total; ++i) {
        const auto start = std::chrono::steady_clock::now();
        bool pass = false;
        try {
            pass = criteria[static_cast<std::size_t>(i)].run();
        } catch (const std::exception& err) {
            std::fprintf(stderr, "    exception: %s\n", err.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report(i + 1, total, criteria[static_cast<std::size_t>(i)].name, pass, seconds);
    }
    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
