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

#include "doctest.h"
#include "oracles.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/units.hpp"

using namespace rydarp;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("resonant Rabi oscillation")
{
    const oracle::RabiCheck r = oracle::rabi(two_pi * 1.0, 5.0, 0.0005);
    CHECK(r.max_error < 1e-6);
    CHECK(r.norm_drift / (r.steps / 1000.0) < 1e-9);
}

TEST_CASE("step halving shows fourth-order convergence")
{
    const double coarse = oracle::rabi(two_pi, 5.0, 0.01).max_error;
    const double fine = oracle::rabi(two_pi, 5.0, 0.005).max_error;
    CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("zero Hamiltonian leaves the state unchanged")
{
    const PulseSchedule s = two_level_schedule(PulseShape::constant(0.0), 0.0, 0.0, 1.0);
    Vector psi(2);
    psi << cplx(0.6, 0.0), cplx(0.0, 0.8);
    const Trajectory tr = evolve_schrodinger(oracle::two_level(), s, psi);
    CHECK(std::abs(tr.amplitudes[0].back() - psi[0]) < 1e-14);
    CHECK(std::abs(tr.amplitudes[1].back() - psi[1]) < 1e-14);
}

TEST_CASE("Landau-Zener formula")
{
    CHECK(landau_zener_probability(1e-6, 1.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(landau_zener_probability(1.0, std::numbers::pi / (2 * std::numbers::ln2)) == doctest::Approx(0.5));
    CHECK(landau_zener_probability(1.0, 1e-6) == doctest::Approx(1.0));
    CHECK_THROWS_AS(landau_zener_probability(1.0, 0.0), DomainError);
}

TEST_CASE("linear sweep reproduces Landau-Zener transfer")
{
    for (double exponent : {0.1, std::numbers::ln2, 1.0, 10.0}) {
        const oracle::LandauZenerCheck lz = oracle::landau_zener(two_pi, exponent);
        CAPTURE(exponent);
        CHECK(std::abs(lz.simulated - lz.formula) < 1e-3);
    }
}

TEST_CASE("Lindblad without collapse operators matches the pure-state run")
{
    const oracle::ChirpedPulse p{two_pi * 2.0, 0.3, 1.0, two_pi * 10.0, 1.0};
    SuperatomModel m = oracle::two_level(4.0);
    m.params.include_double = true;
    m.params.blockade_shift = two_pi * 20.0;
    const Trajectory pure = evolve_schrodinger(m, p.schedule(), oracle::ground(3));
    Matrix rho0 = Matrix::Zero(3, 3);
    rho0(0, 0) = 1.0;
    const Trajectory mixed = evolve_lindblad(m, p.schedule(), rho0);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < pure.times.size(); ++i)
            CHECK(std::abs(pure.populations[k][i] - mixed.populations[k][i]) < 1e-8);
}

TEST_CASE("pure intermediate-state decay")
{
    Ladder3Model m;
    m.params.gamma_e = two_pi * 5.75;
    PulseSchedule s;
    s.omega1_shape = PulseShape::constant(0.0);
    s.omega2_shape = PulseShape::constant(0.0);
    s.delta1 = -two_pi * 40.0;
    s.duration = 0.5;
    Matrix rho0 = Matrix::Zero(3, 3);
    rho0(1, 1) = 1.0;
    IntegratorOptions opts;
    opts.dense_output_stride = 10;
    const Trajectory tr = evolve_lindblad(m, s, rho0, {}, opts);
    const auto& pe = tr.population("e");
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        CHECK(std::abs(pe[i] - std::exp(-m.params.gamma_e * tr.times[i])) < 1e-6);
    CHECK(tr.min_eigenvalue >= -1e-8);
}

TEST_CASE("decay into an extra loss level")
{
    Ladder3Model m;
    m.params.gamma_e = 3.0;
    m.decay_to_loss = true;
    PulseSchedule s;
    s.omega1_shape = PulseShape::constant(0.0);
    s.omega2_shape = PulseShape::constant(0.0);
    s.delta1 = -1.0;
    s.duration = 1.0;
    Matrix rho0 = Matrix::Zero(4, 4);
    rho0(1, 1) = 1.0;
    const Trajectory tr = evolve_lindblad(m, s, rho0);
    CHECK(tr.final_population("loss") == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-8));
    CHECK(tr.final_population("g") == doctest::Approx(0.0));
}

TEST_CASE("switched-off upper laser never populates the Rydberg level")
{
    Ladder3Model m;
    PulseSchedule s;
    s.omega1_shape = PulseShape::constant(two_pi * 2.3);
    s.omega2_shape = PulseShape::constant(0.0);
    s.delta1 = -two_pi * 40.0;
    s.chirp = {two_pi * 40.0, 0.0, 0.0, 0.5};
    s.duration = 0.5;
    const Trajectory tr = evolve_from_ground(m, s);
    for (double p : tr.population("r"))
        CHECK(p == 0.0);
}

TEST_CASE("mirrored detunings and chirp leave the lossy ladder unchanged")
{
    // H -> -H* under (delta1, delta2, rate) -> -(delta1, delta2, rate) up to a
    // basis sign, so every population must agree.
    auto run = [](double sign) {
        Ladder3Model m;
        m.params.gamma_e = two_pi * 5.75;
        m.params.gamma_r = two_pi * 0.5;
        PulseSchedule s;
        s.duration = 0.5;
        s.omega1_shape = PulseShape::smoothed_square(two_pi * 2.3, 0.25, 0.467, 0.03);
        s.omega2_shape = PulseShape::gaussian(two_pi * 10.7, 0.25, 0.188);
        s.delta1 = -sign * two_pi * 40.0;
        s.chirp = {sign * two_pi * 40.0, sign * 4.0 * units::chirp_unit, 0.0, 0.5};
        return evolve_from_ground(m, s);
    };
    const Trajectory a = run(1.0), b = run(-1.0);
    REQUIRE(a.basis == b.basis);
    for (std::size_t k = 0; k < a.basis.size(); ++k)
        for (std::size_t i = 0; i < a.times.size(); ++i)
            CHECK(std::abs(a.populations[k][i] - b.populations[k][i]) < 1e-12);
    CHECK(a.final_population("r") > 0.0);
}

TEST_CASE("strong blockade suppresses double excitation")
{
    SuperatomModel m = oracle::two_level(5.0);
    m.params.include_double = true;
    m.params.blockade_shift = 1e6;
    const oracle::ChirpedPulse p{two_pi * 1.0, 0.1, 0.0, two_pi * 100.0, 0.2};
    IntegratorOptions opts;
    opts.step = 2e-6;
    opts.dense_output_stride = 500;
    const Trajectory tr = evolve_schrodinger(m, p.schedule(), oracle::ground(3), opts);
    for (double v : tr.population("RR"))
        CHECK(v < 1e-6);
}

TEST_CASE("two atoms without interaction match the two-atom Dicke ladder")
{
    const oracle::ChirpedPulse p{two_pi * 1.5, 0.4, 0.5, two_pi * 5.0, 1.0};
    SuperatomModel dicke = oracle::two_level(2.0);
    dicke.params.include_double = true;
    FullEnsembleModel full;
    full.params = FullEnsembleParams::uniform(2, 0.0, 0.0, 0.0);
    const Trajectory a = evolve_schrodinger(dicke, p.schedule(), oracle::ground(3));
    const Trajectory b = evolve_schrodinger(full, p.schedule(), oracle::ground(4));
    for (std::size_t n = 0; n < 3; ++n)
        CHECK(std::abs(a.final_distribution[n] - b.final_distribution[n]) < 1e-10);
}

TEST_CASE("full ensemble with strong pair shifts matches the blockaded superatom")
{
    const auto schedules = oracle::random_chirped_schedules(5, 3);
    for (int n : {2, 4})
        for (const auto& p : schedules)
            CHECK(oracle::full_vs_superatom(n, p, 1e4, 1e-4).max_difference < 1e-3);
}

TEST_CASE("adiabatic sweeps complete the transfer")
{
    IntegratorOptions opts;
    opts.step = 1e-4;
    for (const auto& p : oracle::adiabatic_schedules(17, 3, 0.05)) {
        const Trajectory tr = evolve_schrodinger(oracle::two_level(), p.schedule(), oracle::ground(2), opts);
        CHECK(tr.final_population("R") >= 0.99);
        CHECK(tr.adiabaticity.size() == tr.times.size());
    }
}

TEST_CASE("trajectory bookkeeping")
{
    const PulseSchedule s = two_level_schedule(PulseShape::constant(3.0), 0.0, 0.0, 1.0);
    IntegratorOptions opts;
    opts.dense_output_stride = 300;
    const Trajectory tr = evolve_schrodinger(oracle::two_level(), s, oracle::ground(2), opts);
    CHECK(tr.times.size() == 8);  // 0, 300, ..., 1800, 2000
    CHECK(tr.times.back() == doctest::Approx(1.0));
    CHECK(tr.final_distribution.total() == doctest::Approx(1.0));
    CHECK_THROWS_AS(tr.population("RR"), DomainError);
}

TEST_CASE("invalid inputs")
{
    const PulseSchedule s = two_level_schedule(PulseShape::constant(1.0), 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(evolve_schrodinger(oracle::two_level(), s, oracle::ground(3)), DomainError);
    Vector unnormalized = Vector::Ones(2);
    CHECK_THROWS_AS(evolve_schrodinger(oracle::two_level(), s, unnormalized), DomainError);
    IntegratorOptions bad;
    bad.step = 0.0;
    CHECK_THROWS_AS(evolve_schrodinger(oracle::two_level(), s, oracle::ground(2), bad), DomainError);

    FullEnsembleModel full;
    full.params = FullEnsembleParams::uniform(2, 0.0, 0.0, 1.0);
    Matrix rho0 = Matrix::Zero(4, 4);
    rho0(0, 0) = 1.0;
    CHECK_THROWS_AS(evolve_lindblad(full, s, rho0), DomainError);
}

TEST_CASE("step guard rejects unstable steps")
{
    SuperatomModel m = oracle::two_level(3.0);
    m.params.include_double = true;
    m.params.blockade_shift = 1e4;
    const PulseSchedule s = two_level_schedule(PulseShape::constant(1.0), 0.0, 0.0, 0.1);
    CHECK_THROWS_AS(evolve_schrodinger(m, s, oracle::ground(3)), DomainError);
}

TEST_CASE("tight tolerance turns drift into a numeric failure")
{
    const PulseSchedule s = two_level_schedule(PulseShape::constant(two_pi * 50.0), 0.0, 0.0, 1.0);
    IntegratorOptions opts;
    opts.step = 0.004;
    opts.norm_tolerance = 1e-12;
    CHECK_THROWS_AS(evolve_schrodinger(oracle::two_level(), s, oracle::ground(2), opts), NumericFailure);
}
