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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qcfa/linalg.hpp"

using namespace qcfa;

namespace {

// cos / sin of sqrt(2) pi from a 30-digit evaluation.
constexpr double kCos = -0.266255342041415;
constexpr double kSin = -0.963902532849877;

Matrix rotation_block(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return Matrix{{c, -s, 0, 0}, {s, c, 0, 0}, {0, 0, c, s}, {0, 0, -s, c}};
}

Measurement basis4() { return Measurement::computational_basis({"q0", "q1", "q2", "q3"}); }

// Random unitary as a product of phased Givens rotations.
Matrix random_unitary(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Matrix u = Matrix::identity(4);
    for (int r = 0; r < 12; ++r) {
        const std::size_t i = rng() % 4;
        const std::size_t j = (i + 1 + rng() % 3) % 4;
        Matrix g = Matrix::identity(4);
        const double t = angle(rng);
        const Complex phase = std::polar(1.0, angle(rng));
        g(i, i) = std::cos(t);
        g(j, j) = std::cos(t);
        g(i, j) = -std::sin(t) * std::conj(phase);
        g(j, i) = std::sin(t) * phase;
        u = g * u;
    }
    return u;
}

}  // namespace

TEST(Linalg, IdentityLeavesBasisAlone) {
    const auto psi = apply_unitary(UnitaryMatrix::identity(4), StateVector::basis(4, 0));
    EXPECT_LT(max_abs_diff(psi, StateVector::basis(4, 0)), 1e-15);
}

TEST(Linalg, PermutationMapsBasisToImage) {
    const std::array<std::size_t, 4> image{2, 3, 0, 1};
    const auto u = UnitaryMatrix::checked(Matrix::permutation(image));
    for (std::size_t j = 0; j < 4; ++j)
        EXPECT_LT(max_abs_diff(apply_unitary(u, StateVector::basis(4, j)), StateVector::basis(4, image[j])), 1e-15);
}

TEST(Linalg, RotationOfQ0) {
    const auto u = UnitaryMatrix::checked(rotation_block(std::numbers::sqrt2 * std::numbers::pi));
    const auto psi = apply_unitary(u, StateVector::basis(4, 0));
    EXPECT_NEAR(psi[0].real(), kCos, 1e-13);
    EXPECT_NEAR(psi[1].real(), kSin, 1e-13);
    EXPECT_EQ(psi[2], Complex(0.0));
    EXPECT_EQ(psi[3], Complex(0.0));
}

TEST(Linalg, DimensionMismatchIsUsageError) {
    EXPECT_THROW(apply_unitary(UnitaryMatrix::identity(2), StateVector::basis(4, 0)), UsageError);
    EXPECT_THROW(StateVector::basis(2, 2), UsageError);
}

TEST(Linalg, CheckedRejectsNonUnitary) {
    Matrix m = Matrix::identity(4);
    m(0, 0) = 1.1;
    EXPECT_THROW(UnitaryMatrix::checked(m), UsageError);
    EXPECT_GT(UnitaryMatrix::unchecked(m).unitarity_error(), 0.2);
    EXPECT_FALSE(UnitaryMatrix::unchecked(m).is_unitary());
}

TEST(Linalg, IncompleteMeasurementDetected) {
    std::vector<Matrix> ps{Matrix::diagonal_projector(4, {0, 1, 2})};
    EXPECT_THROW(Measurement::checked(ps, {"x"}), UsageError);
    const auto m = Measurement::unchecked(ps, {"x"});
    EXPECT_NEAR(m.completeness_error(), 1.0, 1e-15);
    EXPECT_LT(m.projector_error(), 1e-15);
    EXPECT_THROW(Measurement::unchecked(ps, {"x", "y"}), UsageError);
}

TEST(Linalg, MeasureBasisStateIsCertain) {
    const auto q2 = StateVector::basis(4, 2);
    for (double u : {0.0, 0.3, 0.999999}) {
        const auto r = measure(basis4(), q2, u);
        EXPECT_EQ(r.outcome, "q2");
        EXPECT_DOUBLE_EQ(r.probability, 1.0);
        EXPECT_LT(max_abs_diff(r.state, q2), 1e-15);
    }
}

TEST(Linalg, CoinMeasurementOnEqualSuperposition) {
    const double h = 1.0 / std::sqrt(2.0);
    const auto m = Measurement::checked({Matrix::diagonal_projector(2, {0}), Matrix::diagonal_projector(2, {1})},
                                        {"0", "1"});
    const StateVector psi{h, h};
    const auto r = measure(m, psi, 0.3);
    EXPECT_EQ(r.outcome, "0");
    EXPECT_NEAR(r.probability, 0.5, 1e-15);
    EXPECT_EQ(measure(m, psi, 0.7).outcome, "1");
}

TEST(Linalg, BasisMeasurementAfterRotation) {
    const StateVector psi{0.0, 0.0, kCos, kSin};
    const auto dist = outcome_distribution(basis4(), psi);
    ASSERT_EQ(dist.size(), 4u);
    EXPECT_EQ(dist[3].outcome, "q3");
    EXPECT_NEAR(dist[3].probability, 0.929108092834409, 1e-12);
    EXPECT_NEAR(dist[2].probability, 1.0 - 0.929108092834409, 1e-12);
    EXPECT_EQ(measure(basis4(), psi, 0.5).outcome, "q3");
    EXPECT_EQ(measure(basis4(), psi, 0.01).outcome, "q2");
}

TEST(Linalg, DistributionOfBasisState) {
    const auto dist = outcome_distribution(basis4(), StateVector::basis(4, 0));
    const std::vector<double> expected{1, 0, 0, 0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(dist[i].probability, expected[i]);
}

TEST(Linalg, ZeroMassIsInternalError) {
    const auto m = Measurement::unchecked({Matrix::diagonal_projector(2, {0})}, {"0"});
    EXPECT_THROW(measure(m, StateVector::basis(2, 1), 0.5), InternalError);
}

TEST(Linalg, MeasureSkipsZeroProbabilityOutcomes) {
    // u = 0 must not land on a leading zero-mass outcome.
    EXPECT_EQ(measure(basis4(), StateVector::basis(4, 3), 0.0).outcome, "q3");
}

TEST(LinalgProperty, RandomUnitariesPreserveNormAndDensity) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto u = UnitaryMatrix::checked(random_unitary(rng));
        EXPECT_LT(u.unitarity_error(), 1e-12);
        std::array<Complex, 4> a{};
        for (auto &x : a) x = {coord(rng), coord(rng)};
        StateVector psi(a);
        const double norm = psi.norm_squared();
        const auto phi = apply_unitary(u, psi);
        EXPECT_NEAR(phi.norm_squared(), norm, 1e-12);

        // Density evolution agrees with pure-state evolution.
        Matrix rho(4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
        const auto rho2 = conjugate_by(u.matrix(), rho);
        EXPECT_NEAR(rho2.trace().real(), norm, 1e-12);
        const auto probs = outcome_probabilities(basis4(), phi);
        const auto weights = outcome_weights(basis4(), rho2);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(probs[i], weights[i], 1e-12);
    }
}

TEST(LinalgProperty, CollapsedStateIsNormalizedEigenvector) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto psi = apply_unitary(UnitaryMatrix::unchecked(random_unitary(rng)), StateVector::basis(4, 0));
        const auto r = measure(basis4(), psi, unit(rng));
        EXPECT_NEAR(r.state.norm_squared(), 1.0, 1e-12);
        EXPECT_NEAR(std::norm(r.state[r.index]), 1.0, 1e-12);
        EXPECT_NEAR(r.probability, std::norm(psi[r.index]), 1e-12);
    }
}
