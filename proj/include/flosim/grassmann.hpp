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
#include <cstdint>
#include <map>
#include <vector>

#include "flosim/skew.hpp"

namespace flosim {

/// Exact polynomial over anticommuting generators θ_0, ..., θ_{m-1}
/// (indices are 0-based throughout the C++ API).
///
/// Terms are stored sparsely as {bitmask -> complex coefficient}; a bitmask
/// encodes the strictly increasing product of the generators it selects.
/// Coefficients with magnitude below 1e-14 are pruned after every arithmetic
/// pass.  Values are immutable from the caller's point of view: every
/// operation returns a fresh polynomial.
class GrassmannPoly {
public:
    using TermMap = std::map<std::uint64_t, Complex>;

    enum class Parity { Even, Odd, Mixed };

    explicit GrassmannPoly(int num_generators);

    static GrassmannPoly constant(int num_generators, Complex value);
    static GrassmannPoly generator(int num_generators, int index);
    static GrassmannPoly monomial(int num_generators, std::uint64_t mask, Complex value);

    int num_generators() const { return num_generators_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Complex coefficient(std::uint64_t mask) const;
    double max_abs_coefficient() const;

    /// Parity of the zero polynomial is defined as even.
    Parity parity() const;

    void add_term(std::uint64_t mask, Complex value);

    GrassmannPoly operator+(const GrassmannPoly& other) const;
    GrassmannPoly operator-(const GrassmannPoly& other) const;
    GrassmannPoly operator*(Complex scalar) const;
    GrassmannPoly& operator+=(const GrassmannPoly& other);

    static constexpr double kPruneThreshold = 1e-14;

private:
    int num_generators_;
    TermMap terms_;
};

GrassmannPoly operator*(Complex scalar, const GrassmannPoly& f);

/// Associative product with θ_a² = 0 and θ_aθ_b = -θ_bθ_a; the sign of each
/// term pair is the parity of the inversion count of the merged index word.
GrassmannPoly mul(const GrassmannPoly& f, const GrassmannPoly& g);

/// Left derivative ∂/∂θ_a.
GrassmannPoly derivative(const GrassmannPoly& f, int index);

/// Coefficient of the top monomial θ_0 θ_1 ··· θ_{m-1}, i.e. the full Berezin
/// integral with the convention ∫Dθ θ_0···θ_{m-1} = 1.
Complex berezin_full(const GrassmannPoly& f);

/// Berezin integration over a subset of generators.  The set is processed in
/// ascending index order, matching ∫Dθ = ∫dθ_{m-1}···∫dθ_0 (the rightmost
/// single integral acts first).
GrassmannPoly berezin_partial(const GrassmannPoly& f, std::vector<int> indices);

/// prefactor · exp((i/2) θ^T M θ), the terminating Taylor series of a
/// Gaussian exponent.  M must be antisymmetric to 1e-12 on ‖M + M^T‖_max.
GrassmannPoly gaussian_exp(const Eigen::MatrixXcd& m, Complex prefactor);

/// exp(f) for an even polynomial with no constant term (nilpotent input, so
/// the series terminates).
GrassmannPoly exp_poly(const GrassmannPoly& f);

/// Substitutes θ_a <- Σ_b T_ab θ_b and re-expands.  T must be invertible;
/// the Berezin measure factor det(T) is the caller's responsibility.
GrassmannPoly change_variables(const GrassmannPoly& f, const Eigen::MatrixXcd& t);

/// Renumbers generator a -> a + offset inside an algebra of new_num_generators.
GrassmannPoly shift_generators(const GrassmannPoly& f, int offset, int new_num_generators);

/// Restriction to the first new_num_generators generators; throws if any term
/// touches a dropped generator.
GrassmannPoly restrict_generators(const GrassmannPoly& f, int new_num_generators);

/// Graded tensor product of two m-generator polynomials, realized inside the
/// 2m-generator algebra (first copy on 0..m-1, second on m..2m-1).  The
/// embedding multiplication obeys (x⊗y)(x'⊗y') = (-1)^{p(y)p(x')} xx'⊗yy'.
GrassmannPoly tensor_embed(const GrassmannPoly& x, const GrassmannPoly& y);

/// 2 Σ_a (θ_a f ⊗ ∂_a g + ∂_a f ⊗ θ_a g) over 2m generators.  Vanishes
/// exactly when f = g is a Gaussian exponential.  Inputs must have equal
/// definite parity.
GrassmannPoly lambda_ad(const GrassmannPoly& f, const GrassmannPoly& g);

/// True iff f is even and the lambda_ad(f, f) residual is at most
/// 1e-10 · (max coefficient magnitude of f)².
bool is_gaussian_operator(const GrassmannPoly& f);

}  // namespace flosim
