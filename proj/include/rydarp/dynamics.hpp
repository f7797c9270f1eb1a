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

#include <string>
#include <variant>
#include <vector>

#include "rydarp/core.hpp"
#include "rydarp/photon.hpp"
#include "rydarp/pulse.hpp"

namespace rydarp {

// Blockaded ensemble with the intermediate level adiabatically eliminated.
// The collective drive at time t comes from the schedule through
// effective_rabi_and_delta; omega_eff and delta_two_photon in `params` are
// ignored here.
//
// With `intermediate_decay` set, each Rydberg excitation scatters through its
// admixture of |e> at rate gamma_e * (omega2 / (2 delta2))^2 and falls back to
// the ground state. `light_shift` adds the differential second-order shift
// -omega2^2/(4 delta2) - omega1^2/(4 delta1) per excitation.
struct SuperatomModel {
    SuperatomParams params;
    double gamma_e = 0.0;
    double gamma_r = 0.0;  // pure dephasing of each Rydberg excitation
    bool intermediate_decay = false;
    bool light_shift = false;
};

// Single atom on the full g-e-r ladder. |e> decays at gamma_e to |g>, or to an
// extra "loss" level when decay_to_loss is set; |r> dephases at gamma_r.
struct Ladder3Model {
    LadderParams params;
    bool decay_to_loss = false;
};

// Explicit N-atom ensemble; per-atom drive from the schedule. Pure-state only.
struct FullEnsembleModel {
    FullEnsembleParams params;
};

using ModelSpec = std::variant<SuperatomModel, Ladder3Model, FullEnsembleModel>;

std::vector<std::string> model_basis(const ModelSpec& model);
// Number of Rydberg excitations carried by each basis state.
std::vector<int> model_excitations(const ModelSpec& model);
bool model_is_dissipative(const ModelSpec& model);
LabeledOperator model_hamiltonian(const ModelSpec& model, const PulseSchedule& schedule, double t);

struct IntegratorOptions {
    double step = 0.0005;          // us; fixed RK4 step
    double norm_tolerance = 1e-7;  // allowed norm/trace drift over the run
    int dense_output_stride = 1;   // integration steps per stored sample

    void validate() const;
};

struct Trajectory {
    std::vector<std::string> basis;
    std::vector<double> times;
    std::vector<std::vector<double>> populations;  // [state][sample]
    std::vector<std::vector<cplx>> amplitudes;     // pure-state runs only
    std::vector<double> adiabaticity;              // r(t) at the sample times
    ExcitationDistribution final_distribution;
    double max_norm_drift = 0.0;
    double min_eigenvalue = 0.0;  // density-matrix runs only

    const std::vector<double>& population(const std::string& label) const;
    double final_population(const std::string& label) const;
};

// Static collapse operator L (already scaled by sqrt(rate)).
struct CollapseOperator {
    Matrix op;
};

// i dpsi/dt = H(t) psi with classic fixed-step RK4 over [0, duration]. No
// renormalization is applied; drift beyond opts.norm_tolerance throws
// NumericFailure.
Trajectory evolve_schrodinger(const ModelSpec& model, const PulseSchedule& schedule, const Vector& psi0,
                              const IntegratorOptions& opts = {});

// Lindblad master equation with the model's own decay channels plus `extra`.
// Throws NumericFailure on trace drift beyond the tolerance or on an
// eigenvalue below -1e-8 at an output sample.
Trajectory evolve_lindblad(const ModelSpec& model, const PulseSchedule& schedule, const Matrix& rho0,
                           const std::vector<CollapseOperator>& extra = {},
                           const IntegratorOptions& opts = {});

// Starts from the all-ground state and picks the density-matrix path only
// when the model has decay channels.
Trajectory evolve_from_ground(const ModelSpec& model, const PulseSchedule& schedule,
                              const IntegratorOptions& opts = {});

// Adiabatic transfer probability of a linear sweep, 1 - exp(-pi W^2 / (2|alpha|)).
double landau_zener_probability(double omega_n, double alpha);

// Schedule whose effective single-atom drive is omega(t) = shape(t) and whose
// two-photon detuning is delta_center + rate (t - duration/2) over the whole
// window. Handy for driving the superatom directly.
PulseSchedule two_level_schedule(const PulseShape& omega, double delta_center, double rate, double duration);

}  // namespace rydarp
