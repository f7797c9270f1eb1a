// Copyright 2026 The rydarp Authors
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

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "rydarp/core.hpp"
#include "rydarp/dynamics.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/units.hpp"

using namespace rydarp;
using rydarp::units::mhz_to_angular;

namespace {

constexpr double pi = std::numbers::pi;

LadderParams ladder(double o1, double o2, double d1, double d2)
{
    LadderParams p;
    p.omega1 = o1;
    p.omega2 = o2;
    p.delta1 = d1;
    p.delta2 = d2;
    return p;
}

}  // namespace

TEST_CASE("effective two-level reduction at the experimental point")
{
    const auto e = effective_two_level(
        ladder(mhz_to_angular(2.3), mhz_to_angular(10.7), mhz_to_angular(-40), mhz_to_angular(40)));
    CHECK(units::angular_to_mhz(e.omega_eff) == doctest::Approx(2.3 * 10.7 / (2 * -40.0)).epsilon(1e-12));
    CHECK(units::angular_to_mhz(e.omega_eff) == doctest::Approx(-0.3076).epsilon(1e-3));
    CHECK(e.delta_two_photon == doctest::Approx(0.0));
    // |delta1| = 40 MHz sits below 5 x 10.7 MHz, so the guard flags it.
    CHECK_FALSE(e.elimination_valid);
    CHECK(effective_two_level(ladder(mhz_to_angular(2.3), mhz_to_angular(10.7), mhz_to_angular(-60), mhz_to_angular(60)))
              .elimination_valid);
}

TEST_CASE("effective two-level reduction edge cases")
{
    const auto off = effective_two_level(ladder(0.0, 3.0, -20.0, 7.0));
    CHECK(off.omega_eff == 0.0);
    CHECK(off.delta_two_photon == doctest::Approx(-13.0));

    const double u = units::two_pi;
    const auto small = effective_two_level(ladder(u, u, -10 * u, 10 * u));
    CHECK(units::angular_to_mhz(small.omega_eff) == doctest::Approx(-0.05));
    CHECK(small.delta_two_photon == doctest::Approx(0.0));

    CHECK_FALSE(effective_two_level(ladder(10.0, 10.0, 20.0, 0.0)).elimination_valid);
    CHECK_THROWS_AS(effective_two_level(ladder(1.0, 1.0, 0.0, 1.0)), DomainError);
}

TEST_CASE("mixing angle")
{
    CHECK(mixing_angle(2.0, 0.0) == doctest::Approx(pi / 4));
    CHECK(mixing_angle(1.0, 1e9) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(mixing_angle(1.0, 1.0) == doctest::Approx(pi / 8));
    CHECK_THROWS_AS(mixing_angle(0.0, 0.0), DomainError);

    double last = mixing_angle(1.0, -100.0);
    for (double delta = -99.0; delta <= 100.0; delta += 0.5) {
        const double theta = mixing_angle(1.0, delta);
        CHECK(theta <= last);
        CHECK(theta > 0.0);
        CHECK(theta < pi / 2);
        last = theta;
    }
}

TEST_CASE("dressed states")
{
    const DressedStates res = dressed_states(2.0, 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(res.plus[0]) == doctest::Approx(r));
    CHECK(std::abs(res.plus[1]) == doctest::Approx(r));
    CHECK(std::abs(res.minus[0]) == doctest::Approx(r));
    CHECK(std::abs(res.minus[1] + res.minus[0]) == doctest::Approx(0.0).epsilon(1e-12));

    // Large positive delta pushes R down by -delta: the lower state is R.
    const DressedStates far = dressed_states(1.0, 1e8);
    CHECK(std::abs(far.minus[1]) == doctest::Approx(1.0));
    CHECK(std::abs(far.plus[0]) == doctest::Approx(1.0));

    const DressedStates tri = dressed_states(3.0, 4.0);
    CHECK(std::abs(tri.lambda_plus - tri.lambda_minus) == doctest::Approx(5.0));
}

TEST_CASE("dressed states diagonalize the two-level block")
{
    SuperatomParams p;
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            const double omega = 0.1 + 49.9 * i / 39.0;
            const double delta = -50.0 + 100.0 * j / 39.0;
            const Matrix h = hamiltonian_superatom(p, omega, delta).matrix;
            const DressedStates d = dressed_states(omega, delta);
            CHECK((h * d.plus - d.lambda_plus * d.plus).norm() < 1e-10);
            CHECK((h * d.minus - d.lambda_minus * d.minus).norm() < 1e-10);
            CHECK(std::abs(d.plus.dot(d.minus)) < 1e-12);
            CHECK(d.plus.norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("superatom Hamiltonian elements")
{
    SuperatomParams p;
    const LabeledOperator h = hamiltonian_superatom(p, 2.0, 0.0);
    REQUIRE(h.dimension() == 2);
    CHECK(h.matrix(0, 1).real() == doctest::Approx(1.0));
    CHECK(h.matrix(1, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(h.matrix(0, 0)) == 0.0);
    CHECK(std::abs(h.matrix(1, 1)) == 0.0);

    SuperatomParams two;
    two.n_atoms = 2.0;
    two.include_double = true;
    const double omega_n = std::sqrt(2.0) * 1.0;
    const LabeledOperator h2 = hamiltonian_superatom(two, omega_n, 0.0);
    REQUIRE(h2.dimension() == 3);
    CHECK(h2.matrix(0, 1).real() == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(h2.matrix(1, 2).real() == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(h2.basis == std::vector<std::string>{"G", "R", "RR"});

    two.blockade_shift = 7.0;
    const LabeledOperator h3 = hamiltonian_superatom(two, 1.0, 0.5);
    CHECK(h3.matrix(1, 1).real() == doctest::Approx(-0.5));
    CHECK(h3.matrix(2, 2).real() == doctest::Approx(-1.0 + 7.0));
    CHECK(h3.hermitian_defect() < 1e-12);
}

TEST_CASE("ladder Hamiltonian")
{
    const LabeledOperator zero = hamiltonian_ladder3(ladder(0.0, 0.0, -3.0, 5.0));
    CHECK(zero.basis == std::vector<std::string>{"g", "e", "r"});
    CHECK(std::abs(zero.matrix(0, 1)) == 0.0);
    CHECK(std::abs(zero.matrix(1, 2)) == 0.0);
    CHECK(zero.matrix(1, 1).real() == doctest::Approx(3.0));
    CHECK(zero.matrix(2, 2).real() == doctest::Approx(-2.0));

    PulseSchedule s;
    s.omega1_shape = PulseShape::constant(mhz_to_angular(2.3));
    s.omega2_shape = PulseShape::gaussian(mhz_to_angular(10.7), 0.25, 0.188);
    s.delta1 = mhz_to_angular(-40);
    s.chirp = {mhz_to_angular(40), 4 * units::chirp_unit, 0.0, 0.5};
    s.duration = 0.5;
    const LabeledOperator mid = hamiltonian_ladder3(s, 0.25);
    CHECK(std::abs(mid.matrix(2, 2)) < 1e-12);
    CHECK(mid.hermitian_defect() < 1e-12);
    CHECK_THROWS_AS(hamiltonian_ladder3(s, 0.6), DomainError);
}

TEST_CASE("full ensemble Hamiltonian")
{
    const LabeledOperator one = hamiltonian_full_n(FullEnsembleParams::uniform(1, 1.3, 0.4, 0.0));
    SuperatomParams sp;
    const LabeledOperator two_level = hamiltonian_superatom(sp, 1.3, 0.4);
    CHECK((one.matrix - two_level.matrix).norm() < 1e-14);

    // Singles block of N = 3 without pairs: rank one with singular value sqrt(3) W / 2.
    const LabeledOperator three = hamiltonian_full_n(FullEnsembleParams::uniform(3, 1.0, 0.0, 0.0));
    const Eigen::MatrixXcd block = three.matrix.block(0, 1, 1, 3);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
    CHECK(svd.singularValues()[0] == doctest::Approx(std::sqrt(3.0) / 2));

    CHECK_THROWS_AS(hamiltonian_full_n(FullEnsembleParams::uniform(9, 1.0, 0.0, 0.0)), DomainError);
}

TEST_CASE("symmetric projection of the full ensemble reproduces the Dicke couplings")
{
    for (int n = 2; n <= 6; ++n) {
        const double omega = 0.7, delta = 0.3, shift = 5.0;
        const LabeledOperator full = hamiltonian_full_n(FullEnsembleParams::uniform(n, omega, delta, shift));
        const Eigen::Index dim = full.dimension();
        Eigen::MatrixXcd iso = Eigen::MatrixXcd::Zero(dim, 3);
        iso(0, 0) = 1.0;
        for (int i = 0; i < n; ++i)
            iso(1 + i, 1) = 1.0 / std::sqrt(double(n));
        const double pairs = n * (n - 1) / 2.0;
        for (Eigen::Index k = 1 + n; k < dim; ++k)
            iso(k, 2) = 1.0 / std::sqrt(pairs);
        const Eigen::MatrixXcd projected = iso.adjoint() * full.matrix * iso;

        SuperatomParams sp;
        sp.n_atoms = n;
        sp.include_double = true;
        sp.blockade_shift = shift;
        const LabeledOperator dicke = hamiltonian_superatom(sp, std::sqrt(double(n)) * omega, delta);
        CHECK((projected - dicke.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("atom-number estimate")
{
    CHECK(estimate_atom_number(mhz_to_angular(4.127), mhz_to_angular(0.3076)) == doctest::Approx(180.0).epsilon(0.005));
    CHECK(estimate_atom_number(2.5, 2.5) == doctest::Approx(1.0));
    CHECK(estimate_atom_number(5.0, 2.5) == doctest::Approx(4.0));
    CHECK_THROWS_AS(estimate_atom_number(1.0, 0.0), DomainError);
}

TEST_CASE("labeled operator lookup")
{
    SuperatomParams p;
    const LabeledOperator h = hamiltonian_superatom(p, 1.0, 0.0);
    CHECK(h.index_of("R") == 1);
    CHECK_THROWS_AS(h.index_of("RR"), DomainError);
}
