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

#include <istream>
#include <optional>
#include <string>

#include "flosim/flo.hpp"

namespace flosim {

inline constexpr const char* kSchemaName = "flosim/1";

/// Parse failure anchored to an input line.
struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
    int line;
};

/// Parsed "flosim/1 circuit" file.  In the text format modes are 1-based;
/// they are converted to the library's 0-based indices here.
struct CircuitFile {
    int n_modes = 0;
    std::optional<std::uint64_t> seed;
    Eigen::MatrixXd initial;  // validated 2n x 2n correlation matrix
    Circuit circuit;
};

CircuitFile parse_circuit_file(std::istream& in);

/// Parsed "flosim/1 map" file (blocks A, B, D and scalar C).
GaussianMap parse_map_file(std::istream& in);

/// Parsed "flosim/1 matrix" file: real antisymmetric (to 1e-9), even dim.
SkewMatrixXd parse_matrix_file(std::istream& in);

}  // namespace flosim
