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

#include "flosim/io.hpp"

#include <sstream>
#include <vector>

namespace flosim {

namespace {

constexpr double kFileAntisymTol = 1e-9;

// Line-oriented reader that skips blanks and '#' comments and tracks the
// current line number for error anchoring.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::optional<std::vector<std::string>> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            std::vector<std::string> tokens = tokenize(line);
            if (!tokens.empty()) {
                return tokens;
            }
        }
        return std::nullopt;
    }

    std::vector<std::string> require(const std::string& what) {
        auto tokens = next();
        if (!tokens) {
            throw ParseError(line_ + 1, "unexpected end of file, expected " + what);
        }
        return *tokens;
    }

    int line() const { return line_; }

private:
    static std::vector<std::string> tokenize(const std::string& line) {
        std::vector<std::string> out;
        std::istringstream stream(line);
        std::string token;
        while (stream >> token) {
            if (token[0] == '#') {
                break;
            }
            out.push_back(token);
        }
        return out;
    }

    std::istream& in_;
    int line_ = 0;
};

double parse_real(const LineReader& reader, const std::string& token) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(reader.line(), "expected a number, got '" + token + "'");
    }
}

long parse_int(const LineReader& reader, const std::string& token) {
    try {
        std::size_t used = 0;
        const long v = std::stol(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(reader.line(), "expected an integer, got '" + token + "'");
    }
}

Eigen::MatrixXd read_real_matrix(LineReader& reader, Eigen::Index dim) {
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const auto tokens = reader.require("a matrix row");
        if (static_cast<Eigen::Index>(tokens.size()) != dim) {
            throw ParseError(reader.line(), "matrix row has " + std::to_string(tokens.size()) +
                                                " entries, expected " + std::to_string(dim));
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            m(r, c) = parse_real(reader, tokens[static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

// Complex rows are serialized as interleaved [re, im] pairs.
Eigen::MatrixXcd read_complex_matrix(LineReader& reader, Eigen::Index dim) {
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const auto tokens = reader.require("a matrix row");
        if (static_cast<Eigen::Index>(tokens.size()) != 2 * dim) {
            throw ParseError(reader.line(),
                             "complex matrix row has " + std::to_string(tokens.size()) +
                                 " entries, expected " + std::to_string(2 * dim) +
                                 " ([re im] pairs)");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            m(r, c) = Complex(parse_real(reader, tokens[static_cast<std::size_t>(2 * c)]),
                              parse_real(reader, tokens[static_cast<std::size_t>(2 * c + 1)]));
        }
    }
    return m;
}

void check_antisymmetric(const LineReader& reader, const Eigen::MatrixXd& m, const char* what) {
    const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kFileAntisymTol * (1.0 + m.cwiseAbs().maxCoeff())) {
        throw ParseError(reader.line(),
                         std::string(what) + " is not antisymmetric within 1e-9");
    }
}

std::string expect_header(LineReader& reader, const std::string& kind) {
    const auto tokens = reader.require("a header line");
    if (tokens.size() != 2 || tokens[0] != kSchemaName) {
        throw ParseError(reader.line(),
                         std::string("unrecognized schema; expected '") + kSchemaName + " " +
                             kind + "'");
    }
    if (tokens[1] != kind) {
        throw ParseError(reader.line(), "expected a '" + kind + "' file, got '" + tokens[1] + "'");
    }
    return tokens[1];
}

int parse_mode(const LineReader& reader, const std::string& token, int n) {
    const long mode = parse_int(reader, token);
    if (mode < 1 || mode > n) {
        throw ParseError(reader.line(), "mode " + std::to_string(mode) + " out of range 1.." +
                                            std::to_string(n));
    }
    return static_cast<int>(mode - 1);
}

}  // namespace

CircuitFile parse_circuit_file(std::istream& in) {
    LineReader reader(in);
    expect_header(reader, "circuit");

    auto tokens = reader.require("'modes <n>'");
    if (tokens.size() != 2 || tokens[0] != "modes") {
        throw ParseError(reader.line(), "expected 'modes <n>'");
    }
    const long n = parse_int(reader, tokens[1]);
    if (n < 1 || n > 1000) {
        throw ParseError(reader.line(), "mode count out of range");
    }

    CircuitFile file;
    file.n_modes = static_cast<int>(n);
    file.circuit.n_modes = file.n_modes;
    const Eigen::Index dim = 2 * n;

    tokens = reader.require("'seed' or 'initial'");
    if (tokens[0] == "seed") {
        if (tokens.size() != 2) {
            throw ParseError(reader.line(), "expected 'seed <integer>'");
        }
        file.seed = static_cast<std::uint64_t>(parse_int(reader, tokens[1]));
        tokens = reader.require("'initial'");
    }

    if (tokens[0] != "initial" || tokens.size() != 2) {
        throw ParseError(reader.line(), "expected 'initial vacuum' or 'initial matrix'");
    }
    if (tokens[1] == "vacuum") {
        file.initial = vacuum_state(file.n_modes).corr;
    } else if (tokens[1] == "matrix") {
        file.initial = read_real_matrix(reader, dim);
        check_antisymmetric(reader, file.initial, "initial matrix");
        if (!is_valid_state(0.5 * (file.initial - file.initial.transpose().eval()))) {
            throw ParseError(reader.line(), "initial matrix is not a valid correlation matrix");
        }
    } else {
        throw ParseError(reader.line(), "initial must be 'vacuum' or 'matrix'");
    }

    while (auto op_tokens = reader.next()) {
        const auto& op = *op_tokens;
        if (op[0] == "unitary") {
            if (op.size() != 2) {
                throw ParseError(reader.line(), "expected 'unitary <time>'");
            }
            UnitaryOp u;
            u.time = parse_real(reader, op[1]);
            u.generator = read_real_matrix(reader, dim);
            check_antisymmetric(reader, u.generator, "generator");
            file.circuit.ops.emplace_back(std::move(u));
        } else if (op[0] == "hamiltonian") {
            if (op.size() != 2) {
                throw ParseError(reader.line(), "expected 'hamiltonian <time>'");
            }
            UnitaryOp u;
            u.time = parse_real(reader, op[1]);
            QuadraticHamiltonian h = QuadraticHamiltonian::zero(file.n_modes);
            bool saw_end = false;
            while (auto line = reader.next()) {
                const auto& t = *line;
                if (t[0] == "end") {
                    saw_end = true;
                    break;
                }
                if (t[0] == "eps") {
                    if (static_cast<long>(t.size()) != n + 1) {
                        throw ParseError(reader.line(),
                                         "eps needs " + std::to_string(n) + " values");
                    }
                    for (long j = 0; j < n; ++j) {
                        h.eps(j) = parse_real(reader, t[static_cast<std::size_t>(j + 1)]);
                    }
                } else if (t[0] == "t" || t[0] == "s") {
                    if (t.size() != 5) {
                        throw ParseError(reader.line(),
                                         "expected '" + t[0] + " <j> <k> <re> <im>'");
                    }
                    const int j = parse_mode(reader, t[1], file.n_modes);
                    const int k = parse_mode(reader, t[2], file.n_modes);
                    if (j >= k) {
                        throw ParseError(reader.line(), "need j < k");
                    }
                    const Complex v(parse_real(reader, t[3]), parse_real(reader, t[4]));
                    (t[0] == "t" ? h.tunneling : h.pairing)(j, k) = v;
                } else {
                    throw ParseError(reader.line(), "unknown hamiltonian entry '" + t[0] + "'");
                }
            }
            if (!saw_end) {
                throw ParseError(reader.line() + 1, "hamiltonian block not closed with 'end'");
            }
            u.generator = hamiltonian_to_generator(h);
            file.circuit.ops.emplace_back(std::move(u));
        } else if (op[0] == "measure") {
            if (op.size() != 3) {
                throw ParseError(reader.line(), "expected 'measure <mode> sample|0|1'");
            }
            MeasureOp m;
            m.mode = parse_mode(reader, op[1], file.n_modes);
            if (op[2] == "sample") {
                m.forced = std::nullopt;
            } else if (op[2] == "0" || op[2] == "1") {
                m.forced = op[2] == "0" ? 0 : 1;
            } else {
                throw ParseError(reader.line(), "measure outcome must be 'sample', 0 or 1");
            }
            file.circuit.ops.emplace_back(m);
        } else {
            throw ParseError(reader.line(), "unknown op '" + op[0] + "'");
        }
    }
    return file;
}

GaussianMap parse_map_file(std::istream& in) {
    LineReader reader(in);
    expect_header(reader, "map");

    auto tokens = reader.require("'modes <n>'");
    if (tokens.size() != 2 || tokens[0] != "modes") {
        throw ParseError(reader.line(), "expected 'modes <n>'");
    }
    const long n = parse_int(reader, tokens[1]);
    if (n < 1 || n > 1000) {
        throw ParseError(reader.line(), "mode count out of range");
    }
    const Eigen::Index dim = 2 * n;

    tokens = reader.require("'C <re> <im>'");
    if (tokens.size() != 3 || tokens[0] != "C") {
        throw ParseError(reader.line(), "expected 'C <re> <im>'");
    }
    const Complex c(parse_real(reader, tokens[1]), parse_real(reader, tokens[2]));

    Eigen::MatrixXcd blocks[3];
    const char* names[3] = {"A", "B", "D"};
    for (int i = 0; i < 3; ++i) {
        tokens = reader.require(std::string("'") + names[i] + "'");
        if (tokens.size() != 1 || tokens[0] != names[i]) {
            throw ParseError(reader.line(), std::string("expected block label '") + names[i] + "'");
        }
        blocks[i] = read_complex_matrix(reader, dim);
    }
    for (int i : {0, 2}) {
        const double asym = (blocks[i] + blocks[i].transpose()).cwiseAbs().maxCoeff();
        if (asym > kFileAntisymTol * (1.0 + blocks[i].cwiseAbs().maxCoeff())) {
            throw ParseError(reader.line(),
                             std::string("block ") + names[i] + " is not antisymmetric within 1e-9");
        }
    }
    if (reader.next()) {
        throw ParseError(reader.line(), "trailing content after D block");
    }
    return GaussianMap(static_cast<int>(n), blocks[0], blocks[1], blocks[2], c);
}

SkewMatrixXd parse_matrix_file(std::istream& in) {
    LineReader reader(in);
    expect_header(reader, "matrix");

    auto tokens = reader.require("'dim <2n>'");
    if (tokens.size() != 2 || tokens[0] != "dim") {
        throw ParseError(reader.line(), "expected 'dim <2n>'");
    }
    const long dim = parse_int(reader, tokens[1]);
    if (dim < 2 || dim > 2000) {
        throw ParseError(reader.line(), "dimension out of range");
    }
    if (dim % 2 != 0) {
        throw ParseError(reader.line(), "dimension must be even");
    }
    const Eigen::MatrixXd m = read_real_matrix(reader, dim);
    check_antisymmetric(reader, m, "matrix");
    if (reader.next()) {
        throw ParseError(reader.line(), "trailing content after matrix rows");
    }
    return SkewMatrixXd(m);
}

}  // namespace flosim
