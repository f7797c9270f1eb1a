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

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydarp/pulse.hpp"

namespace rydarp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Single-atom ladder g -> e -> r. All rates in rad/us.
struct LadderParams {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double gamma_e = 0.0;  // intermediate-state decay
    double gamma_r = 0.0;  // Rydberg dephasing

    void validate() const;
};

// Blockaded ensemble treated as a Dicke ladder |G>, |R> [, |RR>].
struct SuperatomParams {
    double n_atoms = 1.0;
    double omega_eff = 0.0;         // single-atom two-photon Rabi frequency
    double delta_two_photon = 0.0;
    double blockade_shift = 0.0;    // V of the doubly excited level
    bool include_double = false;

    void validate() const;
    double collective_rabi() const;
};

// Explicit N-atom ensemble truncated at two Rydberg excitations.
struct FullEnsembleParams {
    int n_atoms = 1;
    double omega_eff = 0.0;
    double delta_two_photon = 0.0;
    Eigen::MatrixXd pair_shifts;  // symmetric, diagonal ignored

    static FullEnsembleParams uniform(int n_atoms, double omega_eff, double delta, double shift);
    void validate() const;
};

inline constexpr int max_full_ensemble_atoms = 8;

struct LabeledOperator {
    std::vector<std::string> basis;
    Matrix matrix;

    Eigen::Index dimension() const { return matrix.rows(); }
    double hermitian_defect() const;  // max |H - H^dagger|
    Eigen::Index index_of(const std::string& label) const;
};

struct EffectiveCoupling {
    double omega_eff;
    double delta_two_photon;
    // False when |delta1| < 5 max(omega1, omega2): the reduction is still
    // evaluated but should not be trusted quantitatively.
    bool elimination_valid;
};

EffectiveCoupling effective_two_level(const LadderParams& p);

// theta = atan2(omega_n, delta) / 2; continuous in delta for omega_n > 0.
double mixing_angle(double omega_n, double delta);

struct DressedStates {
    Vector plus;   // sin(theta)|G> + cos(theta)|R>
    Vector minus;  // cos(theta)|G> - sin(theta)|R>
    double lambda_plus;
    double lambda_minus;
    double theta;  // angle used in the superpositions
};

// Eigenstates of the two-level block of hamiltonian_superatom. The |R>
// diagonal entry is -delta, so the angle in the superpositions is
// mixing_angle(omega_n, -delta).
DressedStates dressed_states(double omega_n, double delta);

LabeledOperator hamiltonian_superatom(const SuperatomParams& p, double omega_n, double delta);

LabeledOperator hamiltonian_ladder3(const LadderParams& p);
LabeledOperator hamiltonian_ladder3(const PulseSchedule& schedule, double t);

LabeledOperator hamiltonian_full_n(const FullEnsembleParams& p);

double estimate_atom_number(double omega_n, double omega_eff);

}  // namespace rydarp
