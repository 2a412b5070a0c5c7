// Copyright 2026 The PQC Ensemble Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pqc/error.hpp"

namespace pqc {

using Complex = std::complex<double>;
using AmplitudeVector = std::vector<Complex>;

/// Absolute tolerance for amplitude comparisons and norm checks.
inline constexpr double kAmplitudeTol = 1e-12;
/// Tolerance applied to user-supplied preparation data.
inline constexpr double kInputTol = 1e-9;

inline double norm_squared(std::span<const Complex> amps) {
    double s = 0.0;
    for (const auto &a : amps)
        s += std::norm(a);
    return s;
}

/// One molecule class of the ensemble: the n1-register pinned to the basis
/// state `j1`, with a pure state over (ancilla x function x n2-register).
struct ConstituentState {
    std::uint64_t j1 = 0;
    AmplitudeVector amplitudes;
    double weight = 0.0;

    friend bool operator==(const ConstituentState &, const ConstituentState &) = default;
};

/// Square complex matrix, row-major.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    DenseMatrix(std::size_t dim, std::vector<Complex> data) : dim_(dim), data_(std::move(data)) {
        if (data_.size() != dim_ * dim_)
            detail::fail_validation("matrix data size does not match dimension");
    }

    static DenseMatrix identity(std::size_t dim) {
        DenseMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] std::size_t dim() const { return dim_; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    [[nodiscard]] const std::vector<Complex> &data() const { return data_; }

    /// max |(U^dagger U - I)_{rc}|
    [[nodiscard]] double unitarity_defect() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                Complex acc = 0.0;
                for (std::size_t k = 0; k < dim_; ++k)
                    acc += std::conj((*this)(k, r)) * (*this)(k, c);
                if (r == c)
                    acc -= 1.0;
                worst = std::max(worst, std::abs(acc));
            }
        }
        return worst;
    }

    [[nodiscard]] bool is_unitary(double tol = 1e-10) const { return unitarity_defect() < tol; }

    /// y = U x
    void multiply(std::span<const Complex> x, std::span<Complex> y) const {
        for (std::size_t r = 0; r < dim_; ++r) {
            Complex acc = 0.0;
            const Complex *row = data_.data() + r * dim_;
            for (std::size_t c = 0; c < dim_; ++c)
                acc += row[c] * x[c];
            y[r] = acc;
        }
    }

    friend bool operator==(const DenseMatrix &, const DenseMatrix &) = default;

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

} // namespace pqc
