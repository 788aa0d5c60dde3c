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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flosim/gaussian.hpp"

namespace flosim {

/// Quadratic Hamiltonian
///   H = Σ_j eps_j a_j† a_j
///     + Σ_{j<k} t_jk a_j† a_k + conj(t_jk) a_k† a_j
///     + Σ_{j<k} s_jk a_j† a_k† + conj(s_jk) a_k a_j.
/// Only the strict upper triangles of `tunneling` and `pairing` are read.
struct QuadraticHamiltonian {
    int n_modes;
    Eigen::VectorXd eps;
    Eigen::MatrixXcd tunneling;
    Eigen::MatrixXcd pairing;

    static QuadraticHamiltonian zero(int n);
};

/// The real antisymmetric 2n x 2n generator h with
/// H = (i/4) Σ_ab h_ab c_a c_b + (Σ_j eps_j / 2) I; the identity shift is a
/// global phase invisible to correlation matrices and is discarded.
Eigen::MatrixXd hamiltonian_to_generator(const QuadraticHamiltonian& h);

/// M' = R^T M R with R = exp(time · generator).  Preserves purity and the
/// Williamson spectrum.
GaussianState evolve_unitary(const GaussianState& state, const Eigen::MatrixXd& generator,
                             double time);

/// (p_empty, p_occupied) for an occupation measurement of `mode` (0-based).
/// p_empty = (1 + M_{2j,2j+1})/2, cross-checked against the determinant
/// identity det(M K_j - I)/4 = p_empty² on every call.
std::pair<double, double> outcome_probabilities(const GaussianState& state, int mode);

/// Adjoint action of the occupation projector as a Gaussian map: C = 1/2,
/// A carries the block (-1)^outcome on the measured Majorana pair, D the
/// opposite block, and B is the identity with the pair zeroed out.
GaussianMap measurement_map(int n, int mode, int outcome);

struct ImpossibleOutcome : std::runtime_error {
    explicit ImpossibleOutcome(const std::string& what, int op = -1)
        : std::runtime_error(what), op_index(op) {}
    int op_index;  // position in the circuit op list when raised by a run, else -1
};

/// Projects onto the requested outcome and renormalizes.  The measured pair's
/// block becomes exactly (-1)^outcome · [[0,1],[-1,0]] and the rest is the
/// matching restriction of (I - (-1)^outcome M K_j)^{-1} M.  Returns the new
/// state and the probability of the outcome; throws ImpossibleOutcome when
/// that probability is at most 1e-12.
std::pair<GaussianState, double> apply_measurement(const GaussianState& state, int mode,
                                                   int outcome);

struct UnitaryOp {
    Eigen::MatrixXd generator;  // real antisymmetric 2n x 2n
    double time = 0.0;
};

struct MeasureOp {
    int mode = 0;                 // 0-based
    std::optional<int> forced;    // nullopt: sample; 0/1: project on that outcome
};

using CircuitOp = std::variant<UnitaryOp, MeasureOp>;

struct Circuit {
    int n_modes = 0;
    std::vector<CircuitOp> ops;
};

struct MeasurementEvent {
    int mode;            // 0-based
    int outcome;         // 0 = empty, 1 = occupied
    double probability;  // conditional probability of the recorded outcome
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::string prng;
    std::vector<MeasurementEvent> events;
    GaussianState final_state;
};

/// One seeded trajectory.  Sampled measurements draw Bernoulli(p_occupied)
/// from SplitMix64; identical (circuit, initial, seed) triples give
/// bit-identical records.
TrajectoryRecord run_trajectory(const Circuit& circuit, const GaussianState& initial,
                                std::uint64_t seed);

/// Shot i uses the PRNG stream split(seed, i); rotations are compiled once.
std::vector<TrajectoryRecord> run_shots(const Circuit& circuit, const GaussianState& initial,
                                        std::uint64_t seed, int shots);

/// Exact joint distribution over the outcomes of every measurement op, by
/// branch enumeration.  Keys are '0'/'1' strings in op order; branches below
/// 1e-15 are pruned.  Forced flags are ignored here (both branches explored).
/// Guarded to at most 20 measurements.
std::map<std::string, double> enumerate_outcome_distribution(const Circuit& circuit,
                                                             const GaussianState& initial);

}  // namespace flosim
