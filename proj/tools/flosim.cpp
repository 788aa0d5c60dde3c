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

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>

#include "flosim/io.hpp"
#include "flosim/oracle.hpp"
#include "flosim/prng.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace flosim;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitImpossibleOutcome = 2;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

std::ifstream open_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return in;
}

// ---------------------------------------------------------------- run

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed_flag, int shots,
            bool as_json) {
    std::ifstream in = open_or_die(path);
    const CircuitFile file = parse_circuit_file(in);
    const std::uint64_t seed = seed_flag ? *seed_flag : file.seed.value_or(0);
    const GaussianState initial(file.n_modes, file.initial);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<TrajectoryRecord> records;
    try {
        records = run_shots(file.circuit, initial, seed, shots);
    } catch (const ImpossibleOutcome& err) {
        std::cerr << "error: impossible forced outcome at op " << err.op_index + 1 << ": "
                  << err.what() << "\n";
        return kExitImpossibleOutcome;
    }
    const double wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::map<std::string, long> histogram;
    for (const TrajectoryRecord& rec : records) {
        std::string key;
        for (const MeasurementEvent& ev : rec.events) {
            key.push_back(ev.outcome == 0 ? '0' : '1');
        }
        ++histogram[key];
    }

    if (as_json) {
        json report;
        report["schema"] = kSchemaName;
        report["command"] = "run";
        report["n_modes"] = file.n_modes;
        report["seed"] = seed;
        report["shots"] = shots;
        report["prng"] = kPrngName;
        report["histogram"] = histogram;
        json log = json::array();
        for (std::size_t i = 0; i < records.size(); ++i) {
            const TrajectoryRecord& rec = records[i];
            json events = json::array();
            for (const MeasurementEvent& ev : rec.events) {
                events.push_back({{"mode", ev.mode + 1},
                                  {"outcome", ev.outcome},
                                  {"probability", ev.probability}});
            }
            log.push_back(
                {{"shot", i},
                 {"events", std::move(events)},
                 {"final_correlation_matrix", matrix_to_json(rec.final_state.corr)},
                 {"final_williamson",
                  vector_to_json(williamson_eigenvalues(SkewMatrixXd(rec.final_state.corr)))}});
        }
        report["shots_log"] = std::move(log);
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "circuit: " << path << "  modes: " << file.n_modes << "  seed: " << seed
                  << "  shots: " << shots << "  prng: " << kPrngName << "\n";
        std::cout << "histogram:\n";
        for (const auto& [key, count] : histogram) {
            std::printf("  %-12s %8ld  (%.6f)\n", key.empty() ? "(none)" : key.c_str(), count,
                        double(count) / shots);
        }
        const TrajectoryRecord& last = records.back();
        std::cout << "last shot events:\n";
        for (const MeasurementEvent& ev : last.events) {
            std::printf("  mode %d -> %d  (p = %.6f)\n", ev.mode + 1, ev.outcome, ev.probability);
        }
        const Eigen::VectorXd lam = williamson_eigenvalues(SkewMatrixXd(last.final_state.corr));
        std::cout << "final williamson:";
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            std::printf(" %.6f", lam(i));
        }
        std::printf("\nwall clock: %.3f s\n", wall_s);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- probs

std::map<std::string, double> dense_distribution(const CircuitFile& file) {
    using oracle::DenseMatrix;
    struct DenseOp {
        std::optional<DenseMatrix> unitary;
        int mode = 0;
    };
    std::vector<DenseOp> ops;
    for (const CircuitOp& op : file.circuit.ops) {
        DenseOp d;
        if (const auto* u = std::get_if<UnitaryOp>(&op)) {
            d.unitary = oracle::canonical_unitary(u->time * u->generator);
        } else {
            d.mode = std::get<MeasureOp>(op).mode;
        }
        ops.push_back(std::move(d));
    }
    std::map<std::string, double> table;
    std::string prefix;
    const std::function<void(std::size_t, DenseMatrix, double)> walk =
        [&](std::size_t at, DenseMatrix rho, double weight) {
            for (std::size_t i = at; i < ops.size(); ++i) {
                if (ops[i].unitary) {
                    rho = (*ops[i].unitary * rho * ops[i].unitary->adjoint()).eval();
                    continue;
                }
                for (int outcome : {0, 1}) {
                    const DenseMatrix proj =
                        oracle::number_projector(file.n_modes, ops[i].mode, outcome);
                    const DenseMatrix next = proj * rho * proj;
                    const double p = next.trace().real();
                    if (weight * p > 1e-15) {
                        prefix.push_back(outcome == 0 ? '0' : '1');
                        walk(i + 1, next / p, weight * p);
                        prefix.pop_back();
                    }
                }
                return;
            }
            table[prefix] += weight;
        };
    walk(0, oracle::dense_state(GaussianState(file.n_modes, file.initial)), 1.0);
    return table;
}

int cmd_probs(const std::string& path, bool as_json, bool oracle_check) {
    std::ifstream in = open_or_die(path);
    const CircuitFile file = parse_circuit_file(in);
    const GaussianState initial(file.n_modes, file.initial);
    const std::map<std::string, double> table =
        enumerate_outcome_distribution(file.circuit, initial);
    double total = 0.0;
    for (const auto& [key, p] : table) {
        total += p;
    }

    double oracle_diff = 0.0;
    if (oracle_check) {
        if (file.n_modes > 3) {
            std::cerr << "error: --oracle-check supports at most 3 modes\n";
            return kExitInvalidInput;
        }
        const std::map<std::string, double> dense = dense_distribution(file);
        for (const auto& [key, p] : table) {
            const auto it = dense.find(key);
            const double q = it == dense.end() ? 0.0 : it->second;
            oracle_diff = std::max(oracle_diff, std::abs(p - q));
        }
        for (const auto& [key, q] : dense) {
            if (table.find(key) == table.end()) {
                oracle_diff = std::max(oracle_diff, q);
            }
        }
    }

    if (as_json) {
        json report;
        report["schema"] = kSchemaName;
        report["command"] = "probs";
        report["n_modes"] = file.n_modes;
        report["table"] = table;
        report["total"] = total;
        if (oracle_check) {
            report["oracle_check"] = {{"max_abs_difference", oracle_diff}};
        }
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "exact outcome distribution (" << table.size() << " branches):\n";
        for (const auto& [key, p] : table) {
            std::printf("  %-12s %.6f\n", key.empty() ? "(none)" : key.c_str(), p);
        }
        std::printf("total: %.6f\n", total);
        if (oracle_check) {
            std::printf("oracle check: max |difference| = %.3e\n", oracle_diff);
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- certify

int cmd_certify(const std::string& path, bool as_json) {
    std::ifstream in = open_or_die(path);
    const GaussianMap map = parse_map_file(in);
    const MapCertificate cert = certify(map);

    const DualOperator dual = dual_state(map);
    const Eigen::VectorXd dual_lam =
        williamson_eigenvalues(SkewMatrixXd(dual.corr.real().eval()));

    std::optional<BistochasticDecomposition> product;
    if (cert.bistochastic && cert.completely_positive) {
        product = decompose_bistochastic(map);
    }

    const auto margin = [](double value, double tolerance) {
        return json{{"value", value}, {"tolerance", tolerance}};
    };
    json margins;
    margins["d_max"] = margin(cert.d_max, 1e-10);
    margins["c_minus_one"] = margin(cert.c_minus_one, 1e-10);
    margins["a_max"] = margin(cert.a_max, 1e-10);
    margins["c_imag"] = margin(cert.c_imag, 1e-12);
    margins["c_real_min"] = margin(cert.c_real, -1e-12);
    margins["block_imag_max"] = margin(cert.block_imag_max, 1e-10);
    margins["block_sigma_max"] = margin(cert.block_sigma_max, 1.0 + 1e-9);

    if (as_json) {
        json report;
        report["schema"] = kSchemaName;
        report["command"] = "certify";
        report["n_modes"] = map.n_modes;
        report["trace_preserving"] = cert.trace_preserving;
        report["bistochastic"] = cert.bistochastic;
        report["completely_positive"] = cert.completely_positive;
        report["margins"] = std::move(margins);
        report["dual_williamson"] = vector_to_json(dual_lam);
        if (product) {
            report["product_decomposition"] = {
                {"rotation_left", matrix_to_json(product->rotation_left)},
                {"diagonal", vector_to_json(product->diagonal)},
                {"rotation_right", matrix_to_json(product->rotation_right)}};
        }
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "map: " << path << "  modes: " << map.n_modes << "\n";
        std::cout << "trace preserving:    " << (cert.trace_preserving ? "yes" : "no")
                  << "  (|D|max = " << cert.d_max << ", |C-1| = " << cert.c_minus_one << ")\n";
        std::cout << "bistochastic:        " << (cert.bistochastic ? "yes" : "no")
                  << "  (|A|max = " << cert.a_max << ")\n";
        std::cout << "completely positive: " << (cert.completely_positive ? "yes" : "no")
                  << "  (sigma_max = " << cert.block_sigma_max
                  << ", |Im block|max = " << cert.block_imag_max << ")\n";
        std::cout << "dual williamson:";
        for (Eigen::Index i = 0; i < dual_lam.size(); ++i) {
            std::printf(" %.6f", dual_lam(i));
        }
        std::cout << "\n";
        if (product) {
            std::cout << "product diagonal:";
            for (Eigen::Index i = 0; i < product->diagonal.size(); ++i) {
                std::printf(" %.6f", product->diagonal(i));
            }
            std::cout << "\n";
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- pfaffian

int cmd_pfaffian(const std::string& path, bool as_json) {
    std::ifstream in = open_or_die(path);
    const SkewMatrixXd m = parse_matrix_file(in);
    const double pf = pfaffian(m);
    const double det = m.mat().determinant();
    const double scale = std::max({1.0, std::abs(det), pf * pf});
    if (std::abs(pf * pf - det) > 1e-8 * scale) {
        std::cerr << "error: Pf^2 = " << pf * pf << " disagrees with det = " << det << "\n";
        return kExitInvalidInput;
    }
    if (as_json) {
        json report;
        report["schema"] = kSchemaName;
        report["command"] = "pfaffian";
        report["dim"] = m.dim();
        report["pfaffian"] = pf;
        report["determinant"] = det;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "pfaffian    = " << pf << "\n";
        std::cout << "determinant = " << det << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fermionic linear optics simulator"};
    app.require_subcommand(1);

    std::string path;
    std::optional<std::uint64_t> seed_flag;
    int shots = 1;
    bool flag_json = false;
    bool flag_text = false;
    bool oracle_check = false;

    const auto add_format_flags = [&](CLI::App* cmd) {
        cmd->add_flag("--json", flag_json, "machine-readable JSON report");
        cmd->add_flag("--text", flag_text, "human-readable report (default)");
    };

    CLI::App* run = app.add_subcommand("run", "run seeded trajectories of a circuit file");
    run->add_option("file", path, "circuit file")->required();
    run->add_option("--seed", seed_flag, "PRNG seed (overrides the file's seed)");
    run->add_option("--shots", shots, "number of trajectories")->check(CLI::PositiveNumber);
    add_format_flags(run);

    CLI::App* probs = app.add_subcommand("probs", "exact joint outcome distribution");
    probs->add_option("file", path, "circuit file")->required();
    probs->add_flag("--oracle-check", oracle_check,
                    "cross-check against the dense reference (n <= 3)");
    add_format_flags(probs);

    CLI::App* certify_cmd = app.add_subcommand("certify", "certify a Gaussian map file");
    certify_cmd->add_option("file", path, "map file")->required();
    add_format_flags(certify_cmd);

    CLI::App* pfaff = app.add_subcommand("pfaffian", "Pfaffian of an antisymmetric matrix file");
    pfaff->add_option("file", path, "matrix file")->required();
    add_format_flags(pfaff);

    CLI11_PARSE(app, argc, argv);
    const bool as_json = flag_json;

    try {
        if (run->parsed()) {
            return cmd_run(path, seed_flag, shots, as_json);
        }
        if (probs->parsed()) {
            return cmd_probs(path, as_json, oracle_check);
        }
        if (certify_cmd->parsed()) {
            return cmd_certify(path, as_json);
        }
        if (pfaff->parsed()) {
            return cmd_pfaffian(path, as_json);
        }
    } catch (const ParseError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
