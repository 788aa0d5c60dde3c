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

#include "flosim/flo.hpp"

#include <cmath>

#include "flosim/prng.hpp"

namespace flosim {

namespace {

constexpr double kImpossibleTol = 1e-12;
constexpr double kClampBand = 1e-12;
constexpr double kProbConsistencyTol = 1e-10;

Eigen::MatrixXd pair_kernel(Eigen::Index dim, int mode, double sign) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dim, dim);
    k(2 * mode, 2 * mode + 1) = sign;
    k(2 * mode + 1, 2 * mode) = -sign;
    return k;
}

double clamp_probability(double p) {
    if (p >= 0.0 && p <= 1.0) {
        return p;
    }
    if (p < 0.0 && p >= -kClampBand) {
        return 0.0;
    }
    if (p > 1.0 && p <= 1.0 + kClampBand) {
        return 1.0;
    }
    throw std::domain_error("outcome_probabilities: probability outside the float-noise band; "
                            "the correlation matrix is not a valid state");
}

void check_mode(const GaussianState& state, int mode) {
    if (mode < 0 || mode >= state.n_modes) {
        throw std::out_of_range("mode index out of range");
    }
}

struct CompiledOp {
    // Either a precomputed rotation or a measurement.
    std::optional<Eigen::MatrixXd> rotation;
    MeasureOp measure;
};

std::vector<CompiledOp> compile_circuit(const Circuit& circuit) {
    std::vector<CompiledOp> out;
    out.reserve(circuit.ops.size());
    for (const CircuitOp& op : circuit.ops) {
        CompiledOp c;
        if (const auto* u = std::get_if<UnitaryOp>(&op)) {
            c.rotation = rotation_from_generator(SkewMatrixXd(u->time * u->generator));
        } else {
            c.measure = std::get<MeasureOp>(op);
        }
        out.push_back(std::move(c));
    }
    return out;
}

TrajectoryRecord run_compiled(const std::vector<CompiledOp>& ops, const GaussianState& initial,
                              std::uint64_t seed, SplitMix64 rng) {
    TrajectoryRecord record{seed, kPrngName, {}, initial};
    GaussianState state = initial;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const CompiledOp& op = ops[i];
        if (op.rotation) {
            state = GaussianState(state.n_modes,
                                  op.rotation->transpose() * state.corr * (*op.rotation));
            continue;
        }
        const auto [p_empty, p_occupied] = outcome_probabilities(state, op.measure.mode);
        int outcome;
        if (op.measure.forced) {
            outcome = *op.measure.forced;
        } else {
            outcome = rng.next_double() < p_occupied ? 1 : 0;
        }
        try {
            auto [next, prob] = apply_measurement(state, op.measure.mode, outcome);
            state = std::move(next);
            record.events.push_back({op.measure.mode, outcome, prob});
        } catch (ImpossibleOutcome& err) {
            throw ImpossibleOutcome(err.what(), static_cast<int>(i));
        }
    }
    record.final_state = std::move(state);
    return record;
}

}  // namespace

QuadraticHamiltonian QuadraticHamiltonian::zero(int n) {
    return {n, Eigen::VectorXd::Zero(n), Eigen::MatrixXcd::Zero(n, n),
            Eigen::MatrixXcd::Zero(n, n)};
}

Eigen::MatrixXd hamiltonian_to_generator(const QuadraticHamiltonian& h) {
    const int n = h.n_modes;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    const auto set = [&gen](int a, int b, double v) {
        gen(a, b) += v;
        gen(b, a) -= v;
    };
    for (int j = 0; j < n; ++j) {
        set(2 * j, 2 * j + 1, -h.eps(j));
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const Complex t = h.tunneling(j, k);
            const Complex s = h.pairing(j, k);
            set(2 * j, 2 * k, t.imag() + s.imag());
            set(2 * j + 1, 2 * k + 1, t.imag() - s.imag());
            set(2 * j, 2 * k + 1, -t.real() + s.real());
            set(2 * j + 1, 2 * k, t.real() + s.real());
        }
    }
    return gen;
}

GaussianState evolve_unitary(const GaussianState& state, const Eigen::MatrixXd& generator,
                             double time) {
    const Eigen::MatrixXd r = rotation_from_generator(SkewMatrixXd(time * generator));
    return GaussianState(state.n_modes, r.transpose() * state.corr * r);
}

std::pair<double, double> outcome_probabilities(const GaussianState& state, int mode) {
    check_mode(state, mode);
    const double raw = 0.5 * (1.0 + state.corr(2 * mode, 2 * mode + 1));

    // det(M K_j - I)/4 = p_empty² is an algebraic identity for antisymmetric
    // M; a violation means the matrix got corrupted upstream.
    const Eigen::Index dim = state.corr.rows();
    const Eigen::MatrixXd mk = state.corr * pair_kernel(dim, mode, 1.0);
    const double det = (mk - Eigen::MatrixXd::Identity(dim, dim)).determinant();
    if (std::abs(0.25 * det - raw * raw) > kProbConsistencyTol) {
        throw std::runtime_error("outcome_probabilities: determinant consistency check failed");
    }

    const double p_empty = clamp_probability(raw);
    return {p_empty, 1.0 - p_empty};
}

GaussianMap measurement_map(int n, int mode, int outcome) {
    if (mode < 0 || mode >= n) {
        throw std::out_of_range("measurement_map: mode index out of range");
    }
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("measurement_map: outcome must be 0 or 1");
    }
    const double sign = outcome == 0 ? 1.0 : -1.0;
    const Eigen::Index dim = 2 * n;
    Eigen::MatrixXcd a = pair_kernel(dim, mode, sign).cast<Complex>();
    Eigen::MatrixXcd d = pair_kernel(dim, mode, -sign).cast<Complex>();
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(dim, dim);
    b(2 * mode, 2 * mode) = 0.0;
    b(2 * mode + 1, 2 * mode + 1) = 0.0;
    return GaussianMap(n, std::move(a), std::move(b), std::move(d), 0.5);
}

std::pair<GaussianState, double> apply_measurement(const GaussianState& state, int mode,
                                                   int outcome) {
    check_mode(state, mode);
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("apply_measurement: outcome must be 0 or 1");
    }
    const auto [p_empty, p_occupied] = outcome_probabilities(state, mode);
    const double prob = outcome == 0 ? p_empty : p_occupied;
    if (prob <= kImpossibleTol) {
        throw ImpossibleOutcome("apply_measurement: outcome has probability zero");
    }

    const double sign = outcome == 0 ? 1.0 : -1.0;
    const Eigen::Index dim = state.corr.rows();
    const Eigen::MatrixXd pivot = Eigen::MatrixXd::Identity(dim, dim) -
                                  sign * (state.corr * pair_kernel(dim, mode, 1.0));
    const Eigen::MatrixXd post = pivot.partialPivLu().solve(state.corr);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        if (r == 2 * mode || r == 2 * mode + 1) {
            continue;
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (c == 2 * mode || c == 2 * mode + 1) {
                continue;
            }
            out(r, c) = post(r, c);
        }
    }
    out(2 * mode, 2 * mode + 1) = sign;
    out(2 * mode + 1, 2 * mode) = -sign;
    return {GaussianState(state.n_modes, std::move(out)), prob};
}

TrajectoryRecord run_trajectory(const Circuit& circuit, const GaussianState& initial,
                                std::uint64_t seed) {
    if (circuit.n_modes != initial.n_modes) {
        throw std::invalid_argument("run_trajectory: circuit and state mode counts differ");
    }
    return run_compiled(compile_circuit(circuit), initial, seed, SplitMix64::split(seed, 0));
}

std::vector<TrajectoryRecord> run_shots(const Circuit& circuit, const GaussianState& initial,
                                        std::uint64_t seed, int shots) {
    if (circuit.n_modes != initial.n_modes) {
        throw std::invalid_argument("run_shots: circuit and state mode counts differ");
    }
    const std::vector<CompiledOp> compiled = compile_circuit(circuit);
    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(shots));
    for (int i = 0; i < shots; ++i) {
        records.push_back(run_compiled(compiled, initial, seed,
                                       SplitMix64::split(seed, static_cast<std::uint64_t>(i))));
    }
    return records;
}

namespace {

void enumerate_branches(const std::vector<CompiledOp>& ops, std::size_t at,
                        const GaussianState& state, double weight, std::string& prefix,
                        std::map<std::string, double>& table) {
    constexpr double kBranchFloor = 1e-15;
    for (std::size_t i = at; i < ops.size(); ++i) {
        if (ops[i].rotation) {
            GaussianState next(state.n_modes,
                               ops[i].rotation->transpose() * state.corr * (*ops[i].rotation));
            enumerate_branches(ops, i + 1, next, weight, prefix, table);
            return;
        }
        const int mode = ops[i].measure.mode;
        for (int outcome : {0, 1}) {
            const auto [p_empty, p_occupied] = outcome_probabilities(state, mode);
            const double p = outcome == 0 ? p_empty : p_occupied;
            if (weight * p <= kBranchFloor) {
                continue;
            }
            auto [next, prob] = apply_measurement(state, mode, outcome);
            prefix.push_back(outcome == 0 ? '0' : '1');
            enumerate_branches(ops, i + 1, next, weight * prob, prefix, table);
            prefix.pop_back();
        }
        return;
    }
    table[prefix] += weight;
}

}  // namespace

std::map<std::string, double> enumerate_outcome_distribution(const Circuit& circuit,
                                                             const GaussianState& initial) {
    if (circuit.n_modes != initial.n_modes) {
        throw std::invalid_argument("enumerate_outcome_distribution: mode counts differ");
    }
    int measurements = 0;
    for (const CircuitOp& op : circuit.ops) {
        if (std::holds_alternative<MeasureOp>(op)) {
            ++measurements;
        }
    }
    if (measurements > 20) {
        throw std::invalid_argument(
            "enumerate_outcome_distribution: more than 20 measurements (branch limit)");
    }
    const std::vector<CompiledOp> compiled = compile_circuit(circuit);
    std::map<std::string, double> table;
    std::string prefix;
    enumerate_branches(compiled, 0, initial, 1.0, prefix, table);
    return table;
}

}  // namespace flosim
