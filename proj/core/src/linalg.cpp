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

#include "qcfa/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qcfa {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
    }
}

bool finite(const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::span<const Complex> amplitudes)
    : amps_(amplitudes.begin(), amplitudes.end()) {}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : amps_(amplitudes.begin(), amplitudes.end()) {}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw UsageError("basis index " + std::to_string(index) + " out of range for dimension " +
                         std::to_string(dim));
    }
    Storage amps(dim, Complex{});
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &z : amps_) s += std::norm(z);
    return s;
}

bool StateVector::is_finite() const { return std::all_of(amps_.begin(), amps_.end(), finite); }

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{}) {}

Matrix::Matrix(std::size_t dim, std::span<const Complex> row_major) : dim_(dim) {
    if (row_major.size() != dim * dim) {
        throw UsageError("matrix of dimension " + std::to_string(dim) + " needs " +
                         std::to_string(dim * dim) + " entries, got " + std::to_string(row_major.size()));
    }
    data_.assign(row_major.begin(), row_major.end());
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) throw UsageError("matrix rows must form a square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal_projector(std::size_t dim, std::initializer_list<std::size_t> indices) {
    Matrix m(dim);
    for (auto i : indices) {
        if (i >= dim) throw UsageError("projector index out of range");
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::permutation(std::span<const std::size_t> image) {
    const auto dim = image.size();
    Matrix m(dim);
    std::vector<bool> hit(dim, false);
    for (std::size_t j = 0; j < dim; ++j) {
        if (image[j] >= dim || hit[image[j]]) throw UsageError("not a permutation");
        hit[image[j]] = true;
        m(image[j], j) = 1.0;
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex Matrix::trace() const {
    Complex t{};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

bool Matrix::is_finite() const { return std::all_of(data_.begin(), data_.end(), finite); }

Matrix operator*(const Matrix &lhs, const Matrix &rhs) {
    require_same_dim(lhs.dim_, rhs.dim_, "matrix product");
    const auto n = lhs.dim_;
    Matrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(r, k);
            if (a == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

Matrix operator+(const Matrix &lhs, const Matrix &rhs) {
    Matrix out = lhs;
    out += rhs;
    return out;
}

Matrix operator-(const Matrix &lhs, const Matrix &rhs) {
    require_same_dim(lhs.dim_, rhs.dim_, "matrix difference");
    Matrix out = lhs;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix operator*(double scale, const Matrix &m) {
    Matrix out = m;
    for (auto &z : out.data_) z *= scale;
    return out;
}

Matrix &Matrix::operator+=(const Matrix &rhs) {
    require_same_dim(dim_, rhs.dim_, "matrix sum");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

StateVector operator*(const Matrix &m, const StateVector &v) {
    require_same_dim(m.dim_, v.dim(), "matrix-vector product");
    const auto n = m.dim_;
    StateVector::Storage out(n, Complex{});
    for (std::size_t r = 0; r < n; ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < n; ++c) acc += m(r, c) * v[c];
        out[r] = acc;
    }
    return StateVector(std::move(out));
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

double max_abs_diff(const StateVector &a, const StateVector &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

Matrix conjugate_by(const Matrix &a, const Matrix &rho) { return a * rho * a.adjoint(); }

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix UnitaryMatrix::checked(Matrix m, double tol) {
    UnitaryMatrix u(std::move(m));
    if (!u.matrix().is_finite()) throw UsageError("unitary has non-finite entries");
    if (!u.is_unitary(tol)) {
        throw UsageError("matrix is not unitary (max |U^dagger U - I| = " +
                         std::to_string(u.unitarity_error()) + ")");
    }
    return u;
}

double UnitaryMatrix::unitarity_error() const {
    return max_abs_diff(m_.adjoint() * m_, Matrix::identity(m_.dim()));
}

bool UnitaryMatrix::is_unitary(double tol) const {
    return m_.dim() > 0 && m_.is_finite() && unitarity_error() <= tol;
}

// ---------------------------------------------------------------------------
// Measurement

Measurement Measurement::checked(std::vector<Matrix> projectors, std::vector<std::string> outcomes,
                                 double tol) {
    Measurement m = unchecked(std::move(projectors), std::move(outcomes));
    if (!m.is_valid(tol)) {
        throw UsageError("invalid projective measurement (completeness error " +
                         std::to_string(m.completeness_error()) + ", projector error " +
                         std::to_string(m.projector_error()) + ")");
    }
    return m;
}

Measurement Measurement::unchecked(std::vector<Matrix> projectors, std::vector<std::string> outcomes) {
    if (projectors.size() != outcomes.size()) {
        throw UsageError("measurement needs one outcome label per projector");
    }
    if (projectors.empty()) throw UsageError("measurement needs at least one projector");
    for (const auto &p : projectors) require_same_dim(p.dim(), projectors.front().dim(), "measurement");
    return Measurement(std::move(projectors), std::move(outcomes));
}

Measurement Measurement::computational_basis(std::vector<std::string> labels) {
    const auto dim = labels.size();
    std::vector<Matrix> projectors;
    projectors.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Matrix p(dim);
        p(i, i) = 1.0;
        projectors.push_back(std::move(p));
    }
    return unchecked(std::move(projectors), std::move(labels));
}

std::optional<std::size_t> Measurement::find_outcome(std::string_view label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i)
        if (outcomes_[i] == label) return i;
    return std::nullopt;
}

double Measurement::completeness_error() const {
    Matrix sum(dim());
    for (const auto &p : projectors_) sum += p;
    return max_abs_diff(sum, Matrix::identity(dim()));
}

double Measurement::projector_error() const {
    double worst = 0.0;
    for (const auto &p : projectors_) {
        worst = std::max(worst, max_abs_diff(p, p.adjoint()));
        worst = std::max(worst, max_abs_diff(p * p, p));
    }
    return worst;
}

bool Measurement::is_valid(double tol) const {
    if (projectors_.empty()) return false;
    for (const auto &p : projectors_)
        if (!p.is_finite()) return false;
    return completeness_error() <= tol && projector_error() <= tol;
}

// ---------------------------------------------------------------------------
// Operations

StateVector apply_unitary(const UnitaryMatrix &u, const StateVector &psi) {
    require_same_dim(u.dim(), psi.dim(), "apply_unitary");
    return u.matrix() * psi;
}

std::vector<double> outcome_probabilities(const Measurement &m, const StateVector &psi) {
    require_same_dim(m.dim(), psi.dim(), "measure");
    std::vector<double> probs;
    probs.reserve(m.size());
    for (const auto &p : m.projectors()) probs.push_back((p * psi).norm_squared());
    return probs;
}

std::vector<double> outcome_weights(const Measurement &m, const Matrix &rho) {
    require_same_dim(m.dim(), rho.dim(), "measure");
    std::vector<double> weights;
    weights.reserve(m.size());
    const auto n = rho.dim();
    for (const auto &p : m.projectors()) {
        // tr(P rho) without forming the product.
        double w = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) w += (p(r, c) * rho(c, r)).real();
        weights.push_back(std::max(w, 0.0));
    }
    return weights;
}

MeasurementResult measure(const Measurement &m, const StateVector &psi, double u) {
    const auto probs = outcome_probabilities(m, psi);
    double total = 0.0;
    for (double p : probs) total += p;
    if (!(total > 0.0)) throw InternalError("measurement lost all probability mass");

    const double target = u * total;
    std::size_t chosen = probs.size();
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        cumulative += probs[i];
        chosen = i;
        if (target < cumulative) break;
    }

    const double p = probs[chosen];
    StateVector collapsed = m.projectors()[chosen] * psi;
    const double scale = 1.0 / std::sqrt(collapsed.norm_squared());
    std::vector<Complex> amps(collapsed.amplitudes().begin(), collapsed.amplitudes().end());
    for (auto &z : amps) z *= scale;
    return MeasurementResult{chosen, m.outcomes()[chosen], StateVector(amps), p};
}

std::vector<OutcomeProbability> outcome_distribution(const Measurement &m, const StateVector &psi) {
    const auto probs = outcome_probabilities(m, psi);
    std::vector<OutcomeProbability> out;
    out.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) out.push_back({m.outcomes()[i], probs[i]});
    return out;
}

}  // namespace qcfa
