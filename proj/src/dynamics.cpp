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

#include "rydarp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

constexpr double positivity_floor = -1e-8;
constexpr std::size_t max_density_dimension = 6;

// Decay of basis state `from` into `to` at `rate`; from == to is pure
// dephasing of that state.
struct Jump {
    Eigen::Index from;
    Eigen::Index to;
    double rate;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// H(t) = sum_k c_k(t) M_k with the M_k taken from the public builders, plus
// the model's time-dependent decay channels.
class Evaluator {
public:
    Evaluator(const ModelSpec& model, const PulseSchedule& schedule)
        : model_(model), schedule_(schedule)
    {
        schedule_.validate();
        std::visit(overloaded{[&](const SuperatomModel& m) { init(m); },
                              [&](const Ladder3Model& m) { init(m); },
                              [&](const FullEnsembleModel& m) { init(m); }},
                   model_);
        dim_ = static_cast<Eigen::Index>(basis_.size());
    }

    Eigen::Index dim() const { return dim_; }
    double duration() const { return schedule_.duration; }
    const std::vector<std::string>& basis() const { return basis_; }

    void hamiltonian(double t, Matrix& h) const
    {
        coefficients(t, coef_);
        h = constant_;
        for (std::size_t k = 0; k < terms_.size(); ++k)
            if (coef_[k] != 0.0)
                h.noalias() += coef_[k] * terms_[k];
    }

    void jumps(double t, std::vector<Jump>& out) const
    {
        out.clear();
        if (const auto* m = std::get_if<SuperatomModel>(&model_)) {
            if (m->intermediate_decay && m->gamma_e > 0.0) {
                const LaserSample s = schedule_.at(t);
                if (s.delta2 == 0.0)
                    throw DomainError("intermediate-state scattering undefined for delta2 = 0");
                const double admixture = s.omega2 / (2.0 * s.delta2);
                const double rate = m->gamma_e * admixture * admixture;
                out.push_back({1, 0, rate});
                if (m->params.include_double)
                    out.push_back({2, 1, 2.0 * rate});
            }
            if (m->gamma_r > 0.0) {
                out.push_back({1, 1, m->gamma_r});
                if (m->params.include_double)
                    out.push_back({2, 2, 2.0 * m->gamma_r});
            }
        } else if (const auto* m = std::get_if<Ladder3Model>(&model_)) {
            if (m->params.gamma_e > 0.0)
                out.push_back({1, m->decay_to_loss ? 3 : 0, m->params.gamma_e});
            if (m->params.gamma_r > 0.0)
                out.push_back({2, 2, m->params.gamma_r});
        }
    }

    // Collective drive seen by the adiabaticity criterion; NaN when the
    // elimination is undefined.
    CollectiveDrive drive(double t) const
    {
        t = std::clamp(t, 0.0, schedule_.duration);
        const LaserSample s = schedule_.at(t);
        if (s.delta1 == 0.0) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            return {nan, nan};
        }
        CollectiveDrive d = effective_rabi_and_delta(schedule_, drive_atoms_, t);
        d.delta -= light_shift(s);
        return d;
    }

private:
    void init(const SuperatomModel& m)
    {
        m.params.validate();
        SuperatomParams p = m.params;
        const LabeledOperator h0 = hamiltonian_superatom(p, 0.0, 0.0);
        basis_ = h0.basis;
        constant_ = h0.matrix;
        terms_.push_back(hamiltonian_superatom(p, 1.0, 0.0).matrix - constant_);
        terms_.push_back(hamiltonian_superatom(p, 0.0, 1.0).matrix - constant_);
        drive_atoms_ = p.n_atoms;
    }

    void init(const Ladder3Model& m)
    {
        m.params.validate();
        LadderParams unit{};
        const LabeledOperator zero = hamiltonian_ladder3(unit);
        basis_ = zero.basis;
        auto term = [&](auto set) {
            LadderParams q{};
            set(q);
            return Matrix(hamiltonian_ladder3(q).matrix);
        };
        terms_ = {term([](LadderParams& q) { q.omega1 = 1.0; }), term([](LadderParams& q) { q.omega2 = 1.0; }),
                  term([](LadderParams& q) { q.delta1 = 1.0; }), term([](LadderParams& q) { q.delta2 = 1.0; })};
        constant_ = zero.matrix;
        if (m.decay_to_loss) {
            basis_.emplace_back("loss");
            auto grow = [](Matrix& a) {
                Matrix b = Matrix::Zero(4, 4);
                b.topLeftCorner(3, 3) = a;
                a = b;
            };
            grow(constant_);
            for (Matrix& t : terms_)
                grow(t);
        }
        drive_atoms_ = 1.0;
    }

    void init(const FullEnsembleModel& m)
    {
        FullEnsembleParams p = m.params;
        p.omega_eff = 0.0;
        p.delta_two_photon = 0.0;
        const LabeledOperator h0 = hamiltonian_full_n(p);
        basis_ = h0.basis;
        constant_ = h0.matrix;
        p.omega_eff = 1.0;
        terms_.push_back(hamiltonian_full_n(p).matrix - constant_);
        p.omega_eff = 0.0;
        p.delta_two_photon = 1.0;
        terms_.push_back(hamiltonian_full_n(p).matrix - constant_);
        drive_atoms_ = static_cast<double>(m.params.n_atoms);
    }

    double light_shift(const LaserSample& s) const
    {
        const auto* m = std::get_if<SuperatomModel>(&model_);
        if (m == nullptr || !m->light_shift)
            return 0.0;
        if (s.delta2 == 0.0 || s.delta1 == 0.0)
            throw DomainError("light shift undefined for zero single-photon detuning");
        // Rydberg level shifted by -omega2^2/(4 delta2), ground by omega1^2/(4 delta1).
        return -s.omega2 * s.omega2 / (4.0 * s.delta2) - s.omega1 * s.omega1 / (4.0 * s.delta1);
    }

    void coefficients(double t, std::vector<double>& c) const
    {
        const LaserSample s = schedule_.at(t);
        c.resize(terms_.size());
        if (std::holds_alternative<Ladder3Model>(model_)) {
            c = {s.omega1, s.omega2, s.delta1, s.delta2};
            return;
        }
        if (s.delta1 == 0.0)
            throw DomainError("adiabatic elimination undefined for delta1 = 0");
        const double omega = s.omega1 * s.omega2 / (2.0 * s.delta1);
        const double rabi = std::holds_alternative<SuperatomModel>(model_) ? std::sqrt(drive_atoms_) * omega : omega;
        // The |R> diagonal is -delta, so a positive shift of |R> lowers delta.
        c = {rabi, s.delta1 + s.delta2 - light_shift(s)};
    }

    ModelSpec model_;
    PulseSchedule schedule_;
    std::vector<std::string> basis_;
    Matrix constant_;
    std::vector<Matrix> terms_;
    double drive_atoms_ = 1.0;
    Eigen::Index dim_ = 0;
    mutable std::vector<double> coef_;
};

struct Grid {
    long steps;
    double h;
};

Grid make_grid(double duration, const IntegratorOptions& opts)
{
    opts.validate();
    const long steps = std::max(1L, std::lround(duration / opts.step));
    return {steps, duration / static_cast<double>(steps)};
}

bool is_sample_step(long i, long steps, int stride) { return i % stride == 0 || i == steps; }

std::vector<int> excitation_counts(const std::vector<std::string>& basis)
{
    std::vector<int> n(basis.size(), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::string& b = basis[i];
        if (b == "R" || b == "r")
            n[i] = 1;
        else if (b == "RR")
            n[i] = 2;
        else if (b.size() > 1 && b[0] == 'r')
            n[i] = static_cast<int>(std::count(b.begin(), b.end(), 'r'));
    }
    return n;
}

ExcitationDistribution distribution_from(const std::vector<int>& excitations, const Eigen::VectorXd& pops)
{
    ExcitationDistribution d;
    d.p.fill(0.0);
    for (Eigen::Index i = 0; i < pops.size(); ++i)
        d.p[static_cast<std::size_t>(excitations[static_cast<std::size_t>(i)])] += std::max(0.0, pops[i]);
    return d.normalized();
}

void record_adiabaticity(const Evaluator& ev, double t, double h, Trajectory& traj)
{
    // One-sided differences at the schedule ends.
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(ev.duration(), t + h);
    const CollectiveDrive here = ev.drive(t);
    const CollectiveDrive before = ev.drive(lo);
    const CollectiveDrive after = ev.drive(hi);
    const double width = hi - lo;
    traj.adiabaticity.push_back(adiabaticity_ratio(here.omega_n, here.delta, (after.omega_n - before.omega_n) / width,
                                                   (after.delta - before.delta) / width));
}

// RK4 is stable for |lambda h| below about 2.8. The Gershgorin bound of H at
// the start, middle and end of the schedule stands in for the spectrum.
void check_step(const Evaluator& ev, double h, bool differences)
{
    double worst = 0.0;
    Matrix hm;
    for (double t : {0.0, 0.5 * ev.duration(), ev.duration()}) {
        ev.hamiltonian(t, hm);
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < hm.rows(); ++i) {
            const double radius = hm.row(i).cwiseAbs().sum() - std::abs(hm(i, i));
            hi = std::max(hi, hm(i, i).real() + radius);
            lo = std::min(lo, hm(i, i).real() - radius);
        }
        worst = std::max(worst, differences ? hi - lo : std::max(std::abs(hi), std::abs(lo)));
    }
    if (worst * h > 2.5)
        throw DomainError("integrator step " + std::to_string(h) + " us too large for energy scale " +
                          std::to_string(worst) + " rad/us; reduce the step below " + std::to_string(2.5 / worst));
}

}  // namespace

std::vector<std::string> model_basis(const ModelSpec& model)
{
    return std::visit(overloaded{[](const SuperatomModel& m) { return hamiltonian_superatom(m.params, 0.0, 0.0).basis; },
                                 [](const Ladder3Model& m) {
                                     auto b = hamiltonian_ladder3(LadderParams{}).basis;
                                     if (m.decay_to_loss)
                                         b.emplace_back("loss");
                                     return b;
                                 },
                                 [](const FullEnsembleModel& m) { return hamiltonian_full_n(m.params).basis; }},
                      model);
}

std::vector<int> model_excitations(const ModelSpec& model) { return excitation_counts(model_basis(model)); }

bool model_is_dissipative(const ModelSpec& model)
{
    return std::visit(overloaded{[](const SuperatomModel& m) {
                                     return (m.intermediate_decay && m.gamma_e > 0.0) || m.gamma_r > 0.0;
                                 },
                                 [](const Ladder3Model& m) { return m.params.gamma_e > 0.0 || m.params.gamma_r > 0.0; },
                                 [](const FullEnsembleModel&) { return false; }},
                      model);
}

LabeledOperator model_hamiltonian(const ModelSpec& model, const PulseSchedule& schedule, double t)
{
    Evaluator ev(model, schedule);
    LabeledOperator op;
    op.basis = ev.basis();
    ev.hamiltonian(t, op.matrix);
    return op;
}

void IntegratorOptions::validate() const
{
    if (!(step > 0.0))
        throw DomainError("integrator step must be positive");
    if (!(norm_tolerance > 0.0))
        throw DomainError("norm tolerance must be positive");
    if (dense_output_stride < 1)
        throw DomainError("dense output stride must be >= 1");
}

const std::vector<double>& Trajectory::population(const std::string& label) const
{
    const auto it = std::find(basis.begin(), basis.end(), label);
    if (it == basis.end())
        throw DomainError("trajectory has no state labelled '" + label + "'");
    return populations[static_cast<std::size_t>(it - basis.begin())];
}

double Trajectory::final_population(const std::string& label) const { return population(label).back(); }

Trajectory evolve_schrodinger(const ModelSpec& model, const PulseSchedule& schedule, const Vector& psi0,
                              const IntegratorOptions& opts)
{
    const Evaluator ev(model, schedule);
    const Eigen::Index dim = ev.dim();
    if (psi0.size() != dim)
        throw DomainError("initial state dimension does not match the model basis");
    const double norm0 = psi0.squaredNorm();
    if (std::abs(norm0 - 1.0) > 1e-10)
        throw DomainError("initial state must be normalized");

    const Grid grid = make_grid(schedule.duration, opts);
    const double h = grid.h;
    check_step(ev, h, false);
    const cplx minus_i(0.0, -1.0);

    Trajectory traj;
    traj.basis = ev.basis();
    traj.populations.assign(static_cast<std::size_t>(dim), {});
    traj.amplitudes.assign(static_cast<std::size_t>(dim), {});

    Vector psi = psi0;
    Vector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    Matrix h_start, h_mid, h_end;
    ev.hamiltonian(0.0, h_start);

    auto sample = [&](double t) {
        traj.times.push_back(t);
        for (Eigen::Index i = 0; i < dim; ++i) {
            traj.populations[static_cast<std::size_t>(i)].push_back(std::norm(psi[i]));
            traj.amplitudes[static_cast<std::size_t>(i)].push_back(psi[i]);
        }
        record_adiabaticity(ev, t, h, traj);
        const double drift = std::abs(psi.squaredNorm() - 1.0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > opts.norm_tolerance)
            throw NumericFailure("norm drift " + sci(drift) + " exceeds tolerance at t = " +
                                     std::to_string(t) + " us",
                                 drift);
    };

    sample(0.0);
    for (long i = 0; i < grid.steps; ++i) {
        const double t = h * static_cast<double>(i);
        ev.hamiltonian(t + 0.5 * h, h_mid);
        ev.hamiltonian(std::min(t + h, schedule.duration), h_end);

        k1.noalias() = minus_i * (h_start * psi);
        tmp = psi + 0.5 * h * k1;
        k2.noalias() = minus_i * (h_mid * tmp);
        tmp = psi + 0.5 * h * k2;
        k3.noalias() = minus_i * (h_mid * tmp);
        tmp = psi + h * k3;
        k4.noalias() = minus_i * (h_end * tmp);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        std::swap(h_start, h_end);
        if (is_sample_step(i + 1, grid.steps, opts.dense_output_stride))
            sample(h * static_cast<double>(i + 1));
    }

    traj.final_distribution = distribution_from(excitation_counts(traj.basis), psi.cwiseAbs2());
    return traj;
}

namespace {

void lindblad_rhs(const Matrix& h, const std::vector<Jump>& jumps, const std::vector<CollapseOperator>& extra,
                  const std::vector<Matrix>& extra_norm, const Matrix& rho, Matrix& out, Matrix& scratch)
{
    const cplx minus_i(0.0, -1.0);
    scratch.noalias() = h * rho;
    out = minus_i * (scratch - scratch.adjoint());  // -i [H, rho] for Hermitian rho
    const Eigen::Index dim = rho.rows();
    for (const Jump& j : jumps) {
        if (j.rate == 0.0)
            continue;
        const double half = 0.5 * j.rate;
        out(j.to, j.to) += j.rate * rho(j.from, j.from);
        for (Eigen::Index k = 0; k < dim; ++k) {
            out(j.from, k) -= half * rho(j.from, k);
            out(k, j.from) -= half * rho(k, j.from);
        }
    }
    for (std::size_t k = 0; k < extra.size(); ++k) {
        const Matrix& l = extra[k].op;
        scratch.noalias() = l * rho;
        out.noalias() += scratch * l.adjoint();
        scratch.noalias() = extra_norm[k] * rho;
        out -= 0.5 * (scratch + scratch.adjoint());
    }
}

double min_eigenvalue(const Matrix& rho)
{
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace

Trajectory evolve_lindblad(const ModelSpec& model, const PulseSchedule& schedule, const Matrix& rho0,
                           const std::vector<CollapseOperator>& extra, const IntegratorOptions& opts)
{
    if (std::holds_alternative<FullEnsembleModel>(model))
        throw DomainError("density-matrix evolution supports the superatom and ladder tiers only");
    const Evaluator ev(model, schedule);
    const Eigen::Index dim = ev.dim();
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw DomainError("initial density matrix dimension does not match the model basis");
    if (static_cast<std::size_t>(dim) > max_density_dimension)
        throw DomainError("density-matrix evolution limited to 36 matrix entries");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("initial density matrix must be Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-10)
        throw DomainError("initial density matrix must have unit trace");
    if (min_eigenvalue(rho0) < -1e-12)
        throw DomainError("initial density matrix must be positive semidefinite");

    std::vector<Matrix> extra_norm;
    for (const CollapseOperator& c : extra) {
        if (c.op.rows() != dim || c.op.cols() != dim)
            throw DomainError("collapse operator dimension does not match the model basis");
        extra_norm.push_back(c.op.adjoint() * c.op);
    }

    const Grid grid = make_grid(schedule.duration, opts);
    const double h = grid.h;
    check_step(ev, h, true);

    Trajectory traj;
    traj.basis = ev.basis();
    traj.populations.assign(static_cast<std::size_t>(dim), {});
    traj.min_eigenvalue = std::numeric_limits<double>::infinity();

    Matrix rho = rho0;
    Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim), scratch(dim, dim);
    Matrix h_start, h_mid, h_end;
    std::vector<Jump> j_start, j_mid, j_end;
    ev.hamiltonian(0.0, h_start);
    ev.jumps(0.0, j_start);

    auto sample = [&](double t) {
        traj.times.push_back(t);
        for (Eigen::Index i = 0; i < dim; ++i)
            traj.populations[static_cast<std::size_t>(i)].push_back(rho(i, i).real());
        record_adiabaticity(ev, t, h, traj);
        const double drift = std::abs(rho.trace().real() - 1.0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > opts.norm_tolerance)
            throw NumericFailure("trace drift " + sci(drift) + " exceeds tolerance at t = " +
                                     std::to_string(t) + " us",
                                 drift);
        const double lowest = min_eigenvalue(rho);
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, lowest);
        if (lowest < positivity_floor)
            throw NumericFailure("density matrix lost positivity (eigenvalue " + sci(lowest) +
                                     ") at t = " + std::to_string(t) + " us",
                                 lowest);
    };

    sample(0.0);
    for (long i = 0; i < grid.steps; ++i) {
        const double t = h * static_cast<double>(i);
        const double t_end = std::min(t + h, schedule.duration);
        ev.hamiltonian(t + 0.5 * h, h_mid);
        ev.jumps(t + 0.5 * h, j_mid);
        ev.hamiltonian(t_end, h_end);
        ev.jumps(t_end, j_end);

        lindblad_rhs(h_start, j_start, extra, extra_norm, rho, k1, scratch);
        tmp = rho + 0.5 * h * k1;
        lindblad_rhs(h_mid, j_mid, extra, extra_norm, tmp, k2, scratch);
        tmp = rho + 0.5 * h * k2;
        lindblad_rhs(h_mid, j_mid, extra, extra_norm, tmp, k3, scratch);
        tmp = rho + h * k3;
        lindblad_rhs(h_end, j_end, extra, extra_norm, tmp, k4, scratch);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        std::swap(h_start, h_end);
        std::swap(j_start, j_end);
        if (is_sample_step(i + 1, grid.steps, opts.dense_output_stride))
            sample(h * static_cast<double>(i + 1));
    }

    traj.final_distribution = distribution_from(excitation_counts(traj.basis), rho.diagonal().real());
    return traj;
}

Trajectory evolve_from_ground(const ModelSpec& model, const PulseSchedule& schedule, const IntegratorOptions& opts)
{
    const auto dim = static_cast<Eigen::Index>(model_basis(model).size());
    if (model_is_dissipative(model)) {
        Matrix rho0 = Matrix::Zero(dim, dim);
        rho0(0, 0) = 1.0;
        return evolve_lindblad(model, schedule, rho0, {}, opts);
    }
    Vector psi0 = Vector::Zero(dim);
    psi0[0] = 1.0;
    return evolve_schrodinger(model, schedule, psi0, opts);
}

double landau_zener_probability(double omega_n, double alpha)
{
    if (alpha == 0.0)
        throw DomainError("Landau-Zener probability undefined for a zero sweep rate");
    return -std::expm1(-std::numbers::pi * omega_n * omega_n / (2.0 * std::abs(alpha)));
}

PulseSchedule two_level_schedule(const PulseShape& omega, double delta_center, double rate, double duration)
{
    // omega1 = 2 and delta1 = 1 make omega1 omega2 / (2 delta1) = omega2.
    PulseSchedule s;
    s.omega1_shape = PulseShape::constant(2.0);
    s.omega2_shape = omega;
    s.delta1 = 1.0;
    s.chirp = {delta_center - 1.0, rate, 0.0, duration};
    s.duration = duration;
    return s;
}

}  // namespace rydarp
