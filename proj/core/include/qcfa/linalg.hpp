// Copyright 2026 The qcfa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qcfa/errors.hpp"

namespace qcfa {

using Complex = std::complex<double>;

class Matrix;

/// Pure quantum state over a finite basis. Storage is inline up to dimension 4,
/// which covers every machine the builders emit.
class StateVector {
  public:
    using Storage = boost::container::small_vector<Complex, 4>;

    StateVector() = default;
    explicit StateVector(std::span<const Complex> amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    /// Unit vector |index> in a space of dimension `dim`.
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Complex> amplitudes() const { return {amps_.data(), amps_.size()}; }

    double norm_squared() const;
    bool is_finite() const;

  private:
    friend StateVector operator*(const Matrix &m, const StateVector &v);
    explicit StateVector(Storage amps) : amps_(std::move(amps)) {}

    Storage amps_;
};

/// Dense square complex matrix, row-major.
class Matrix {
  public:
    using Storage = boost::container::small_vector<Complex, 16>;

    Matrix() = default;
    /// Zero matrix of the given dimension.
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::span<const Complex> row_major);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t dim);
    /// |i><i| summed over `indices`.
    static Matrix diagonal_projector(std::size_t dim, std::initializer_list<std::size_t> indices);
    /// Permutation matrix sending basis vector j to basis vector image[j].
    static Matrix permutation(std::span<const std::size_t> image);

    std::size_t dim() const { return dim_; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    std::span<const Complex> data() const { return {data_.data(), data_.size()}; }

    Matrix adjoint() const;
    Complex trace() const;
    bool is_finite() const;

    friend Matrix operator*(const Matrix &lhs, const Matrix &rhs);
    friend Matrix operator+(const Matrix &lhs, const Matrix &rhs);
    friend Matrix operator-(const Matrix &lhs, const Matrix &rhs);
    friend Matrix operator*(double scale, const Matrix &m);
    friend StateVector operator*(const Matrix &m, const StateVector &v);

    Matrix &operator+=(const Matrix &rhs);

  private:
    std::size_t dim_ = 0;
    Storage data_;
};

double max_abs_diff(const Matrix &a, const Matrix &b);
double max_abs_diff(const StateVector &a, const StateVector &b);

/// A @p A rho A^dagger. Used for density-operator evolution.
Matrix conjugate_by(const Matrix &a, const Matrix &rho);

/// Matrix tagged as a unitary. `checked` enforces U^dagger U = I; `unchecked`
/// exists so malformed machine files can still be loaded and reported by the
/// validators.
class UnitaryMatrix {
  public:
    UnitaryMatrix() = default;

    static UnitaryMatrix checked(Matrix m, double tol = kDefaultTolerances.validation);
    static UnitaryMatrix unchecked(Matrix m) { return UnitaryMatrix(std::move(m)); }
    static UnitaryMatrix identity(std::size_t dim) { return UnitaryMatrix(Matrix::identity(dim)); }

    const Matrix &matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }

    /// max |(U^dagger U - I)_ij|
    double unitarity_error() const;
    bool is_unitary(double tol = kDefaultTolerances.validation) const;

  private:
    explicit UnitaryMatrix(Matrix m) : m_(std::move(m)) {}

    Matrix m_;
};

/// Projective measurement: projectors paired with outcome labels, in declared
/// order. The order fixes inverse-CDF outcome selection.
class Measurement {
  public:
    Measurement() = default;

    static Measurement checked(std::vector<Matrix> projectors, std::vector<std::string> outcomes,
                               double tol = kDefaultTolerances.validation);
    static Measurement unchecked(std::vector<Matrix> projectors, std::vector<std::string> outcomes);
    /// One rank-1 projector per basis vector, labelled by `labels`.
    static Measurement computational_basis(std::vector<std::string> labels);

    std::size_t dim() const { return projectors_.empty() ? 0 : projectors_.front().dim(); }
    std::size_t size() const { return projectors_.size(); }
    const std::vector<Matrix> &projectors() const { return projectors_; }
    const std::vector<std::string> &outcomes() const { return outcomes_; }
    std::optional<std::size_t> find_outcome(std::string_view label) const;

    /// max |(sum_i P_i - I)_jk|
    double completeness_error() const;
    /// max over projectors of max(|P - P^dagger|, |P^2 - P|)
    double projector_error() const;
    bool is_valid(double tol = kDefaultTolerances.validation) const;

  private:
    Measurement(std::vector<Matrix> projectors, std::vector<std::string> outcomes)
        : projectors_(std::move(projectors)), outcomes_(std::move(outcomes)) {}

    std::vector<Matrix> projectors_;
    std::vector<std::string> outcomes_;
};

StateVector apply_unitary(const UnitaryMatrix &u, const StateVector &psi);

struct MeasurementResult {
    std::size_t index = 0;
    std::string outcome;
    StateVector state;
    double probability = 0.0;
};

/// Samples an outcome with uniform draw `u` in [0, 1) by inverse CDF over the
/// declared projector order, then collapses the state.
MeasurementResult measure(const Measurement &m, const StateVector &psi, double u);

/// <psi|P_i|psi> for every projector, index-aligned with m.outcomes().
std::vector<double> outcome_probabilities(const Measurement &m, const StateVector &psi);

/// tr(P_i rho) for a (possibly unnormalised) density operator.
std::vector<double> outcome_weights(const Measurement &m, const Matrix &rho);

struct OutcomeProbability {
    std::string outcome;
    double probability = 0.0;
};

std::vector<OutcomeProbability> outcome_distribution(const Measurement &m, const StateVector &psi);

}  // namespace qcfa
