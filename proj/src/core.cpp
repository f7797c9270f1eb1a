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

#include "rydarp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rydarp/errors.hpp"

namespace rydarp {

void LadderParams::validate() const
{
    if (omega1 < 0.0 || omega2 < 0.0)
        throw DomainError("ladder Rabi frequencies must be non-negative");
    if (gamma_e < 0.0 || gamma_r < 0.0)
        throw DomainError("ladder decay rates must be non-negative");
}

void SuperatomParams::validate() const
{
    if (!(n_atoms >= 1.0))
        throw DomainError("superatom needs n_atoms >= 1");
    if (!std::isfinite(blockade_shift))
        throw DomainError("blockade shift must be finite");
}

double SuperatomParams::collective_rabi() const { return std::sqrt(n_atoms) * omega_eff; }

FullEnsembleParams FullEnsembleParams::uniform(int n_atoms, double omega_eff, double delta, double shift)
{
    FullEnsembleParams p;
    p.n_atoms = n_atoms;
    p.omega_eff = omega_eff;
    p.delta_two_photon = delta;
    p.pair_shifts = Eigen::MatrixXd::Constant(n_atoms, n_atoms, shift);
    p.pair_shifts.diagonal().setZero();
    return p;
}

void FullEnsembleParams::validate() const
{
    if (n_atoms < 1)
        throw DomainError("full ensemble needs at least one atom");
    if (n_atoms > max_full_ensemble_atoms)
        throw DomainError("full ensemble limited to " + std::to_string(max_full_ensemble_atoms) +
                          " atoms, got " + std::to_string(n_atoms));
    if (pair_shifts.rows() != n_atoms || pair_shifts.cols() != n_atoms)
        throw DomainError("pair_shifts must be n_atoms x n_atoms");
    for (int i = 0; i < n_atoms; ++i)
        for (int j = i + 1; j < n_atoms; ++j) {
            if (pair_shifts(i, j) != pair_shifts(j, i))
                throw DomainError("pair_shifts must be symmetric");
            if (!std::isfinite(pair_shifts(i, j)))
                throw DomainError("pair shifts must be finite");
        }
}

double LabeledOperator::hermitian_defect() const
{
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::Index LabeledOperator::index_of(const std::string& label) const
{
    const auto it = std::find(basis.begin(), basis.end(), label);
    if (it == basis.end())
        throw DomainError("no basis state labelled '" + label + "'");
    return static_cast<Eigen::Index>(it - basis.begin());
}

EffectiveCoupling effective_two_level(const LadderParams& p)
{
    if (p.delta1 == 0.0)
        throw DomainError("adiabatic elimination undefined for delta1 = 0");
    const bool valid = std::abs(p.delta1) >= 5.0 * std::max(p.omega1, p.omega2);
    return {p.omega1 * p.omega2 / (2.0 * p.delta1), p.delta1 + p.delta2, valid};
}

double mixing_angle(double omega_n, double delta)
{
    if (omega_n == 0.0 && delta == 0.0)
        throw DomainError("mixing angle undefined for omega_n = delta = 0");
    return 0.5 * std::atan2(omega_n, delta);
}

DressedStates dressed_states(double omega_n, double delta)
{
    const double theta = mixing_angle(omega_n, -delta);
    const double s = std::sin(theta);
    const double c = std::cos(theta);

    DressedStates d;
    d.theta = theta;
    d.plus = Vector(2);
    d.plus << s, c;
    d.minus = Vector(2);
    d.minus << c, -s;
    // Rayleigh quotients of H = [[0, W/2], [W/2, -delta]].
    d.lambda_plus = omega_n * s * c - delta * c * c;
    d.lambda_minus = -omega_n * s * c - delta * s * s;
    return d;
}

LabeledOperator hamiltonian_superatom(const SuperatomParams& p, double omega_n, double delta)
{
    p.validate();
    LabeledOperator h;
    const Eigen::Index dim = p.include_double ? 3 : 2;
    h.matrix = Matrix::Zero(dim, dim);
    h.basis = {"G", "R"};
    h.matrix(0, 1) = h.matrix(1, 0) = 0.5 * omega_n;
    h.matrix(1, 1) = -delta;
    if (p.include_double) {
        h.basis.emplace_back("RR");
        const double upper = std::sqrt(2.0 * (p.n_atoms - 1.0) / p.n_atoms) * 0.5 * omega_n;
        h.matrix(1, 2) = h.matrix(2, 1) = upper;
        h.matrix(2, 2) = -2.0 * delta + p.blockade_shift;
    }
    return h;
}

LabeledOperator hamiltonian_ladder3(const LadderParams& p)
{
    LabeledOperator h;
    h.basis = {"g", "e", "r"};
    h.matrix = Matrix::Zero(3, 3);
    h.matrix(0, 1) = h.matrix(1, 0) = 0.5 * p.omega1;
    h.matrix(1, 2) = h.matrix(2, 1) = 0.5 * p.omega2;
    h.matrix(1, 1) = -p.delta1;
    h.matrix(2, 2) = -(p.delta1 + p.delta2);
    return h;
}

LabeledOperator hamiltonian_ladder3(const PulseSchedule& schedule, double t)
{
    const LaserSample s = schedule.at(t);
    LadderParams p;
    p.omega1 = s.omega1;
    p.omega2 = s.omega2;
    p.delta1 = s.delta1;
    p.delta2 = s.delta2;
    return hamiltonian_ladder3(p);
}

LabeledOperator hamiltonian_full_n(const FullEnsembleParams& p)
{
    p.validate();
    const int n = p.n_atoms;
    const int dim = 1 + n + n * (n - 1) / 2;

    LabeledOperator h;
    h.matrix = Matrix::Zero(dim, dim);
    h.basis.reserve(dim);
    h.basis.emplace_back("G");
    for (int i = 0; i < n; ++i)
        h.basis.push_back("r" + std::to_string(i));

    const double half_rabi = 0.5 * p.omega_eff;
    for (int i = 0; i < n; ++i) {
        h.matrix(0, 1 + i) = h.matrix(1 + i, 0) = half_rabi;
        h.matrix(1 + i, 1 + i) = -p.delta_two_photon;
    }

    int pair = 1 + n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++pair) {
            h.basis.push_back("r" + std::to_string(i) + "r" + std::to_string(j));
            h.matrix(pair, pair) = -2.0 * p.delta_two_photon + p.pair_shifts(i, j);
            h.matrix(pair, 1 + i) = h.matrix(1 + i, pair) = half_rabi;
            h.matrix(pair, 1 + j) = h.matrix(1 + j, pair) = half_rabi;
        }
    }
    return h;
}

double estimate_atom_number(double omega_n, double omega_eff)
{
    if (omega_eff == 0.0)
        throw DomainError("atom-number estimate needs a nonzero single-atom Rabi frequency");
    return (omega_n * omega_n) / (omega_eff * omega_eff);
}

}  // namespace rydarp
