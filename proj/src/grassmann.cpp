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

#include "flosim/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace flosim {

namespace {

// Parity of the inversion count when concatenating ascending words a, b:
// each element j of b jumps over the elements of a greater than j.
int merge_sign(std::uint64_t a, std::uint64_t b) {
    int inversions = 0;
    std::uint64_t rest = b;
    while (rest != 0) {
        const int j = std::countr_zero(rest);
        inversions += std::popcount(a >> (j + 1));
        rest &= rest - 1;
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

void check_index(const GrassmannPoly& f, int index) {
    if (index < 0 || index >= f.num_generators()) {
        throw std::out_of_range("GrassmannPoly: generator index out of range");
    }
}

}  // namespace

GrassmannPoly::GrassmannPoly(int num_generators) : num_generators_(num_generators) {
    if (num_generators < 0 || num_generators > 62) {
        throw std::invalid_argument("GrassmannPoly: generator count must be in [0, 62]");
    }
}

GrassmannPoly GrassmannPoly::constant(int num_generators, Complex value) {
    GrassmannPoly p(num_generators);
    p.add_term(0, value);
    return p;
}

GrassmannPoly GrassmannPoly::generator(int num_generators, int index) {
    GrassmannPoly p(num_generators);
    if (index < 0 || index >= num_generators) {
        throw std::out_of_range("GrassmannPoly: generator index out of range");
    }
    p.add_term(std::uint64_t(1) << index, Complex(1.0, 0.0));
    return p;
}

GrassmannPoly GrassmannPoly::monomial(int num_generators, std::uint64_t mask, Complex value) {
    GrassmannPoly p(num_generators);
    if (num_generators < 64 && (mask >> num_generators) != 0) {
        throw std::out_of_range("GrassmannPoly: monomial mask exceeds generator count");
    }
    p.add_term(mask, value);
    return p;
}

Complex GrassmannPoly::coefficient(std::uint64_t mask) const {
    const auto it = terms_.find(mask);
    return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

double GrassmannPoly::max_abs_coefficient() const {
    double best = 0.0;
    for (const auto& [mask, value] : terms_) {
        best = std::max(best, std::abs(value));
    }
    return best;
}

GrassmannPoly::Parity GrassmannPoly::parity() const {
    bool saw_even = false;
    bool saw_odd = false;
    for (const auto& [mask, value] : terms_) {
        if (std::popcount(mask) % 2 == 0) {
            saw_even = true;
        } else {
            saw_odd = true;
        }
    }
    if (saw_even && saw_odd) {
        return Parity::Mixed;
    }
    return saw_odd ? Parity::Odd : Parity::Even;
}

void GrassmannPoly::add_term(std::uint64_t mask, Complex value) {
    auto [it, inserted] = terms_.try_emplace(mask, value);
    if (!inserted) {
        it->second += value;
    }
    if (std::abs(it->second) <= kPruneThreshold) {
        terms_.erase(it);
    }
}

GrassmannPoly GrassmannPoly::operator+(const GrassmannPoly& other) const {
    GrassmannPoly out = *this;
    out += other;
    return out;
}

GrassmannPoly GrassmannPoly::operator-(const GrassmannPoly& other) const {
    return *this + other * Complex(-1.0, 0.0);
}

GrassmannPoly GrassmannPoly::operator*(Complex scalar) const {
    GrassmannPoly out(num_generators_);
    if (scalar == Complex(0.0, 0.0)) {
        return out;
    }
    for (const auto& [mask, value] : terms_) {
        out.add_term(mask, value * scalar);
    }
    return out;
}

GrassmannPoly& GrassmannPoly::operator+=(const GrassmannPoly& other) {
    if (other.num_generators_ != num_generators_) {
        throw std::invalid_argument("GrassmannPoly: generator-count mismatch");
    }
    for (const auto& [mask, value] : other.terms_) {
        add_term(mask, value);
    }
    return *this;
}

GrassmannPoly operator*(Complex scalar, const GrassmannPoly& f) { return f * scalar; }

GrassmannPoly mul(const GrassmannPoly& f, const GrassmannPoly& g) {
    if (f.num_generators() != g.num_generators()) {
        throw std::invalid_argument("mul: generator-count mismatch");
    }
    GrassmannPoly out(f.num_generators());
    for (const auto& [fa, fv] : f.terms()) {
        for (const auto& [gb, gv] : g.terms()) {
            if ((fa & gb) != 0) {
                continue;  // θ² = 0
            }
            const int sign = merge_sign(fa, gb);
            out.add_term(fa | gb, double(sign) * fv * gv);
        }
    }
    return out;
}

GrassmannPoly derivative(const GrassmannPoly& f, int index) {
    check_index(f, index);
    const std::uint64_t bit = std::uint64_t(1) << index;
    const std::uint64_t below = bit - 1;
    GrassmannPoly out(f.num_generators());
    for (const auto& [mask, value] : f.terms()) {
        if ((mask & bit) == 0) {
            continue;
        }
        const int sign = (std::popcount(mask & below) % 2 == 0) ? 1 : -1;
        out.add_term(mask & ~bit, double(sign) * value);
    }
    return out;
}

Complex berezin_full(const GrassmannPoly& f) {
    const int m = f.num_generators();
    const std::uint64_t top = (m == 0) ? 0 : ((std::uint64_t(1) << m) - 1);
    return f.coefficient(top);
}

GrassmannPoly berezin_partial(const GrassmannPoly& f, std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw std::invalid_argument("berezin_partial: duplicate index");
    }
    GrassmannPoly out = f;
    for (const int index : indices) {
        out = derivative(out, index);
    }
    return out;
}

GrassmannPoly gaussian_exp(const Eigen::MatrixXcd& m, Complex prefactor) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0) {
        throw std::invalid_argument("gaussian_exp: matrix must be square with even dimension");
    }
    const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) {
        throw std::invalid_argument("gaussian_exp: matrix is not antisymmetric to 1e-12");
    }
    const int num = static_cast<int>(m.rows());
    // (i/2) θ^T M θ = i Σ_{a<b} M_ab θ_a θ_b
    GrassmannPoly quad(num);
    for (int a = 0; a < num; ++a) {
        for (int b = a + 1; b < num; ++b) {
            const Complex c = Complex(0.0, 1.0) * m(a, b);
            if (std::abs(c) > 0.0) {
                quad.add_term((std::uint64_t(1) << a) | (std::uint64_t(1) << b), c);
            }
        }
    }
    return exp_poly(quad) * prefactor;
}

GrassmannPoly exp_poly(const GrassmannPoly& f) {
    if (f.parity() != GrassmannPoly::Parity::Even || f.coefficient(0) != Complex(0.0, 0.0)) {
        throw std::invalid_argument("exp_poly: input must be even with no constant term");
    }
    GrassmannPoly result = GrassmannPoly::constant(f.num_generators(), Complex(1.0, 0.0));
    GrassmannPoly power = result;
    const int max_order = f.num_generators() / 2;
    for (int k = 1; k <= max_order; ++k) {
        power = mul(power, f) * Complex(1.0 / k, 0.0);
        if (power.is_zero()) {
            break;
        }
        result += power;
    }
    return result;
}

GrassmannPoly change_variables(const GrassmannPoly& f, const Eigen::MatrixXcd& t) {
    const int m = f.num_generators();
    if (t.rows() != m || t.cols() != m) {
        throw std::invalid_argument("change_variables: matrix dimension mismatch");
    }
    if (m > 0) {
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 1e-12 * sv(0)) {
            throw std::invalid_argument("change_variables: matrix is singular");
        }
    }
    std::vector<GrassmannPoly> linear;
    linear.reserve(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        GrassmannPoly row(m);
        for (int b = 0; b < m; ++b) {
            if (std::abs(t(a, b)) > 0.0) {
                row.add_term(std::uint64_t(1) << b, t(a, b));
            }
        }
        linear.push_back(std::move(row));
    }
    GrassmannPoly out(m);
    for (const auto& [mask, value] : f.terms()) {
        GrassmannPoly term = GrassmannPoly::constant(m, value);
        std::uint64_t rest = mask;
        while (rest != 0) {
            const int a = std::countr_zero(rest);
            term = mul(term, linear[static_cast<std::size_t>(a)]);
            rest &= rest - 1;
        }
        out += term;
    }
    return out;
}

GrassmannPoly shift_generators(const GrassmannPoly& f, int offset, int new_num_generators) {
    if (offset < 0 || f.num_generators() + offset > new_num_generators) {
        throw std::invalid_argument("shift_generators: target algebra too small");
    }
    GrassmannPoly out(new_num_generators);
    for (const auto& [mask, value] : f.terms()) {
        out.add_term(mask << offset, value);
    }
    return out;
}

GrassmannPoly restrict_generators(const GrassmannPoly& f, int new_num_generators) {
    const std::uint64_t allowed =
        (new_num_generators == 0) ? 0 : ((std::uint64_t(1) << new_num_generators) - 1);
    GrassmannPoly out(new_num_generators);
    for (const auto& [mask, value] : f.terms()) {
        if ((mask & ~allowed) != 0) {
            throw std::invalid_argument("restrict_generators: term outside retained generators");
        }
        out.add_term(mask, value);
    }
    return out;
}

GrassmannPoly tensor_embed(const GrassmannPoly& x, const GrassmannPoly& y) {
    if (x.num_generators() != y.num_generators()) {
        throw std::invalid_argument("tensor_embed: generator-count mismatch");
    }
    const int m = x.num_generators();
    return mul(shift_generators(x, 0, 2 * m), shift_generators(y, m, 2 * m));
}

GrassmannPoly lambda_ad(const GrassmannPoly& f, const GrassmannPoly& g) {
    if (f.num_generators() != g.num_generators()) {
        throw std::invalid_argument("lambda_ad: generator-count mismatch");
    }
    const auto pf = f.parity();
    const auto pg = g.parity();
    if (pf == GrassmannPoly::Parity::Mixed || pg == GrassmannPoly::Parity::Mixed || pf != pg) {
        throw std::invalid_argument("lambda_ad: inputs must share a definite parity");
    }
    const int m = f.num_generators();
    GrassmannPoly acc(2 * m);
    for (int a = 0; a < m; ++a) {
        const GrassmannPoly theta = GrassmannPoly::generator(m, a);
        acc += tensor_embed(mul(theta, f), derivative(g, a));
        acc += tensor_embed(derivative(f, a), mul(theta, g));
    }
    return acc * Complex(2.0, 0.0);
}

bool is_gaussian_operator(const GrassmannPoly& f) {
    if (f.parity() != GrassmannPoly::Parity::Even) {
        return false;
    }
    const double scale = f.max_abs_coefficient();
    const GrassmannPoly residual = lambda_ad(f, f);
    return residual.max_abs_coefficient() <= 1e-10 * scale * scale;
}

}  // namespace flosim
