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

#include "rydarp/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

using ModelFn = double (*)(std::span<const double>, double);
using GradFn = void (*)(std::span<const double>, double, std::span<double>);

struct Problem {
    FitModel model;
    ModelFn value;
    GradFn gradient;
    std::vector<double> lower;  // per-parameter bounds (+-inf when free)
    std::vector<double> upper;
};

void damped_rabi_gradient(std::span<const double> p, double x, std::span<double> g)
{
    const double x2 = x * x;
    const double eb = std::exp(-p[1] * x2);
    const double ec = std::exp(-p[2] * x2);
    const double cs = std::cos(p[3] * x);
    const double sn = std::sin(p[3] * x);
    const double bracket = 1.0 - ec * cs;
    g[0] = eb * bracket;
    g[1] = -x2 * p[0] * eb * bracket;
    g[2] = p[0] * eb * x2 * ec * cs;
    g[3] = p[0] * eb * ec * x * sn;
}

void asymmetric_gaussian_gradient(std::span<const double> p, double x, std::span<double> g)
{
    const double u = x - p[1];
    const bool left = x < p[1];
    const double s = left ? p[2] : p[3];
    const double e = std::exp(-u * u / (2.0 * s * s));
    g[0] = e;
    g[1] = p[0] * e * u / (s * s);
    g[2] = left ? p[0] * e * u * u / (s * s * s) : 0.0;
    g[3] = left ? 0.0 : p[0] * e * u * u / (s * s * s);
}

struct Linearization {
    Eigen::VectorXd residual;
    Eigen::MatrixXd jacobian;  // d model / d p, weighted
};

double weight(const ScanCurve& c, std::size_t i) { return c.sigma.empty() ? 1.0 : 1.0 / c.sigma[i]; }

double cost_of(const ScanCurve& c, const Problem& pr, const std::vector<double>& p)
{
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double r = (c.y[i] - pr.value(p, c.x[i])) * weight(c, i);
        s += r * r;
    }
    return s;
}

Linearization linearize(const ScanCurve& c, const Problem& pr, const std::vector<double>& p)
{
    const auto n = static_cast<Eigen::Index>(c.size());
    const auto k = static_cast<Eigen::Index>(p.size());
    Linearization lin{Eigen::VectorXd(n), Eigen::MatrixXd(n, k)};
    std::vector<double> g(p.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double w = weight(c, ui);
        lin.residual[i] = (c.y[ui] - pr.value(p, c.x[ui])) * w;
        pr.gradient(p, c.x[ui], g);
        for (Eigen::Index j = 0; j < k; ++j)
            lin.jacobian(i, j) = g[static_cast<std::size_t>(j)] * w;
    }
    return lin;
}

// Descent direction of the cost with components pinned at an active lower
// bound removed.
Eigen::VectorXd projected_gradient(const Problem& pr, const std::vector<double>& p, const Eigen::VectorXd& jtr)
{
    Eigen::VectorXd g = jtr;
    for (std::size_t j = 0; j < p.size(); ++j)
        if ((p[j] <= pr.lower[j] && jtr[static_cast<Eigen::Index>(j)] < 0.0) ||
            (p[j] >= pr.upper[j] && jtr[static_cast<Eigen::Index>(j)] > 0.0))
            g[static_cast<Eigen::Index>(j)] = 0.0;
    return g;
}

void project(const Problem& pr, std::vector<double>& p)
{
    for (std::size_t j = 0; j < p.size(); ++j)
        p[j] = std::clamp(p[j], pr.lower[j], pr.upper[j]);
}

// First-order optimality, absolute for near-zero residuals and relative to
// |J| |r| otherwise so that sigma-weighted problems are judged the same way.
bool stationary(double gradient, double jacobian, double residual)
{
    return gradient < 1e-8 * (1.0 + residual) || gradient <= 1e-8 * jacobian * residual;
}

FitResult gauss_newton(const ScanCurve& c, const Problem& pr, std::vector<double> p)
{
    project(pr, p);
    const auto k = static_cast<Eigen::Index>(p.size());
    FitResult out;
    out.model = pr.model;
    out.x_min = c.x.front();
    out.x_max = c.x.back();

    double cost = cost_of(c, pr, p);
    double lambda = 1e-6;
    int stalls = 0;
    int it = 0;
    Eigen::VectorXd grad;
    for (; it < max_fit_iterations; ++it) {
        const Linearization lin = linearize(c, pr, p);
        const Eigen::VectorXd jtr = lin.jacobian.transpose() * lin.residual;
        grad = projected_gradient(pr, p, jtr);
        if (stationary(grad.norm(), lin.jacobian.norm(), std::sqrt(cost)))
            break;

        // Parameters held at their bound drop out of the linear solve.
        std::vector<Eigen::Index> free;
        for (Eigen::Index j = 0; j < k; ++j)
            if (grad[j] != 0.0 || (p[static_cast<std::size_t>(j)] > pr.lower[static_cast<std::size_t>(j)] &&
                                   p[static_cast<std::size_t>(j)] < pr.upper[static_cast<std::size_t>(j)]))
                free.push_back(j);
        const auto nf = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd jf(lin.jacobian.rows(), nf);
        for (Eigen::Index j = 0; j < nf; ++j)
            jf.col(j) = lin.jacobian.col(free[static_cast<std::size_t>(j)]);
        const Eigen::MatrixXd jtj = jf.transpose() * jf;
        const Eigen::VectorXd rhs = jf.transpose() * lin.residual;

        bool accepted = false;
        while (!accepted && lambda < 1e10) {
            Eigen::MatrixXd a = jtj;
            const double scale = std::max(jtj.diagonal().maxCoeff(), std::numeric_limits<double>::min());
            for (Eigen::Index j = 0; j < nf; ++j)
                a(j, j) += lambda * std::max(jtj(j, j), 1e-12 * scale);
            const Eigen::VectorXd step = a.ldlt().solve(rhs);
            if (!step.allFinite()) {
                lambda *= 100.0;
                continue;
            }
            double s = 1.0;
            for (int halving = 0; halving < 30; ++halving, s *= 0.5) {
                std::vector<double> trial = p;
                for (Eigen::Index j = 0; j < nf; ++j)
                    trial[static_cast<std::size_t>(free[static_cast<std::size_t>(j)])] += s * step[j];
                project(pr, trial);
                const double trial_cost = cost_of(c, pr, trial);
                if (trial_cost < cost) {
                    const double gain = cost - trial_cost;
                    stalls = gain <= 1e-15 * cost ? stalls + 1 : 0;
                    p = std::move(trial);
                    cost = trial_cost;
                    accepted = true;
                    break;
                }
            }
            if (accepted)
                lambda = std::max(lambda * 0.1, 1e-12);
            else
                lambda *= 100.0;
        }
        if (!accepted || stalls >= 5)
            break;
    }

    const Linearization lin = linearize(c, pr, p);
    grad = projected_gradient(pr, p, lin.jacobian.transpose() * lin.residual);
    out.params = p;
    out.iterations = it;
    out.residual_norm = std::sqrt(cost);
    out.gradient_norm = grad.norm();
    out.converged = stationary(out.gradient_norm, lin.jacobian.norm(), out.residual_norm);

    const Eigen::MatrixXd jtj = lin.jacobian.transpose() * lin.jacobian;
    const auto decomposition = jtj.completeOrthogonalDecomposition();
    out.degenerate = decomposition.rank() < k;
    const auto n = static_cast<double>(c.size());
    const double dof = std::max(1.0, n - static_cast<double>(k));
    const double variance = c.sigma.empty() ? cost / dof : 1.0;
    out.covariance = decomposition.pseudoInverse() * variance;
    return out;
}

FitResult degenerate_result(const ScanCurve& c, FitModel model, std::vector<double> params)
{
    FitResult r;
    r.model = model;
    r.params = std::move(params);
    r.x_min = c.x.front();
    r.x_max = c.x.back();
    r.degenerate = true;
    r.converged = false;
    r.covariance = Eigen::MatrixXd::Zero(4, 4);
    return r;
}

// Strongest lines of the periodogram |sum (y - mean) exp(-i w x)|^2.
std::vector<double> spectral_peaks(const ScanCurve& c, std::size_t count)
{
    const double range = c.x.back() - c.x.front();
    double min_dx = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < c.size(); ++i)
        min_dx = std::min(min_dx, c.x[i] - c.x[i - 1]);
    const double mean = std::accumulate(c.y.begin(), c.y.end(), 0.0) / static_cast<double>(c.size());

    const double w_lo = std::numbers::pi / range;
    const double w_hi = std::numbers::pi / min_dx;
    constexpr int grid = 2000;
    std::vector<double> w(grid), power(grid);
    for (int g = 0; g < grid; ++g) {
        w[g] = w_lo + (w_hi - w_lo) * g / (grid - 1);
        std::complex<double> s{};
        for (std::size_t i = 0; i < c.size(); ++i)
            s += (c.y[i] - mean) * std::polar(1.0, -w[g] * c.x[i]);
        power[g] = std::norm(s);
    }
    std::vector<std::pair<double, double>> peaks;
    for (int g = 1; g + 1 < grid; ++g)
        if (power[g] >= power[g - 1] && power[g] >= power[g + 1])
            peaks.emplace_back(power[g], w[g]);
    std::sort(peaks.begin(), peaks.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<double> out;
    for (std::size_t i = 0; i < peaks.size() && out.size() < count; ++i)
        out.push_back(peaks[i].second);
    if (out.empty())
        out.push_back(w_lo);
    return out;
}

// Least-squares slope of log(v) against x^2, clamped to a decay rate >= 0.
double log_envelope_rate(const std::vector<double>& xs, const std::vector<double>& vs)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(vs[i] > 0.0))
            continue;
        const double u = xs[i] * xs[i];
        const double l = std::log(vs[i]);
        sx += u;
        sy += l;
        sxx += u * u;
        sxy += u * l;
        ++n;
    }
    if (n < 3)
        return 0.0;
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0)
        return 0.0;
    return std::max(0.0, -(n * sxy - sx * sy) / denom);
}

// Envelope estimates for b (trend) and c (oscillation) given a trial d.
std::pair<double, double> envelope_rates(const ScanCurve& c, double d)
{
    const double period = 2.0 * std::numbers::pi / d;
    std::vector<double> xs, trend, swing;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double s = 0.0;
        double peak = 0.0;
        int n = 0;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (std::abs(c.x[j] - c.x[i]) <= 0.5 * period) {
                s += c.y[j];
                ++n;
            }
        const double avg = s / n;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (std::abs(c.x[j] - c.x[i]) <= 0.5 * period)
                peak = std::max(peak, std::abs(c.y[j] - avg));
        xs.push_back(c.x[i]);
        trend.push_back(avg);
        swing.push_back(avg > 0.0 ? peak / avg : 0.0);
    }
    // The running mean is only a clean trend once a full period fits inside.
    std::vector<double> xs_far, trend_far;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] - c.x.front() >= 0.5 * period && c.x.back() - xs[i] >= 0.5 * period) {
            xs_far.push_back(xs[i]);
            trend_far.push_back(trend[i]);
        }
    return {log_envelope_rate(xs_far, trend_far), log_envelope_rate(xs, swing)};
}

// The frequency is capped at the Nyquist limit of the sampling grid; faster
// solutions only alias the data.
Problem damped_rabi_problem(const ScanCurve& c)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    double min_dx = inf;
    for (std::size_t i = 1; i < c.size(); ++i)
        min_dx = std::min(min_dx, c.x[i] - c.x[i - 1]);
    return {FitModel::damped_rabi, damped_rabi_model, damped_rabi_gradient, {-inf, 0.0, 0.0, 0.0},
            {inf, inf, inf, std::numbers::pi / min_dx}};
}

const Problem& asymmetric_gaussian_problem()
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    static const Problem p{FitModel::asymmetric_gaussian, asymmetric_gaussian_model, asymmetric_gaussian_gradient,
                           {-inf, -inf, 1e-12, 1e-12}, {inf, inf, inf, inf}};
    return p;
}

bool better(const FitResult& a, const FitResult& b)
{
    return a.residual_norm < b.residual_norm * (1.0 - 1e-12);
}

double golden_maximum(const std::function<double(double)>& f, double lo, double hi)
{
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 100 && b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Crossing of f = level between `inside` (f >= level) and `outside`.
double bisect_crossing(const std::function<double(double)>& f, double inside, double outside, double level)
{
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (inside + outside);
        if (f(mid) >= level)
            inside = mid;
        else
            outside = mid;
    }
    return 0.5 * (inside + outside);
}

double secondary_minimum(const std::vector<double>& v, std::size_t peak)
{
    double lowest = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = peak + 1; i + 1 < v.size(); ++i)
        if (v[i] < v[i - 1] && v[i] <= v[i + 1] && !(v[i] >= lowest))
            lowest = v[i];
    return lowest;
}

}  // namespace

void ScanCurve::validate() const
{
    if (x.size() != y.size())
        throw DomainError("scan curve x and y lengths differ");
    if (!sigma.empty() && sigma.size() != x.size())
        throw DomainError("scan curve sigma length differs from x");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw DomainError("scan curve x must be strictly increasing");
    for (double v : y)
        if (!(v >= 0.0))
            throw DomainError("scan curve y must be non-negative");
    for (double s : sigma)
        if (!(s > 0.0))
            throw DomainError("scan curve sigma must be positive");
}

std::string to_string(FitModel m)
{
    return m == FitModel::damped_rabi ? "damped-rabi" : "asymmetric-gaussian";
}

double damped_rabi_model(std::span<const double> p, double x)
{
    const double x2 = x * x;
    return p[0] * std::exp(-p[1] * x2) * (1.0 - std::exp(-p[2] * x2) * std::cos(p[3] * x));
}

double asymmetric_gaussian_model(std::span<const double> p, double x)
{
    const double s = x < p[1] ? p[2] : p[3];
    const double u = x - p[1];
    return p[0] * std::exp(-u * u / (2.0 * s * s));
}

double FitResult::evaluate(double x) const
{
    return model == FitModel::damped_rabi ? damped_rabi_model(params, x) : asymmetric_gaussian_model(params, x);
}

FitResult fit_damped_rabi(const ScanCurve& curve, std::optional<std::array<double, 4>> init)
{
    curve.validate();
    if (curve.size() < 8)
        throw DomainError("damped-Rabi fit needs at least 8 points");
    const double ymax = *std::max_element(curve.y.begin(), curve.y.end());
    if (ymax == 0.0)
        return degenerate_result(curve, FitModel::damped_rabi, {0.0, 0.0, 0.0, 0.0});

    const Problem pr = damped_rabi_problem(curve);
    if (init) {
        std::vector<double> start(init->begin(), init->end());
        start[3] = std::abs(start[3]);
        return gauss_newton(curve, pr, start);
    }

    const double range = curve.x.back() - curve.x.front();
    const double scale = 1.0 / (range * range);
    std::optional<FitResult> best;
    for (double d : spectral_peaks(curve, 3)) {
        const auto [b_est, c_est] = envelope_rates(curve, d);
        for (double b : {b_est, 0.0})
            for (double c : {c_est, 0.3 * scale, 3.0 * scale, 30.0 * scale}) {
                FitResult r = gauss_newton(curve, pr, {ymax, b, c, d});
                if (!best || better(r, *best))
                    best = std::move(r);
            }
    }
    return *best;
}

FitResult fit_asymmetric_gaussian(const ScanCurve& curve, std::optional<std::array<double, 4>> init)
{
    curve.validate();
    if (curve.size() < 8)
        throw DomainError("asymmetric-Gaussian fit needs at least 8 points");
    const auto top = std::max_element(curve.y.begin(), curve.y.end());
    if (*top == 0.0)
        return degenerate_result(curve, FitModel::asymmetric_gaussian, {0.0, curve.x.front(), 1.0, 1.0});

    const Problem& pr = asymmetric_gaussian_problem();
    if (init)
        return gauss_newton(curve, pr, {init->begin(), init->end()});

    const auto i0 = static_cast<std::size_t>(top - curve.y.begin());
    const double h = *top;
    const double x0 = curve.x[i0];
    const double range = curve.x.back() - curve.x.front();
    constexpr double hwhm_to_sigma = 1.0 / 1.1774100225154747;  // sqrt(2 ln 2)
    double left = 0.25 * range, right = 0.25 * range;
    for (std::size_t i = i0; i-- > 0;)
        if (curve.y[i] < 0.5 * h) {
            left = (x0 - curve.x[i]) * hwhm_to_sigma;
            break;
        }
    for (std::size_t i = i0; i < curve.size(); ++i)
        if (curve.y[i] < 0.5 * h) {
            right = (curve.x[i] - x0) * hwhm_to_sigma;
            break;
        }

    std::optional<FitResult> best;
    for (double f : {1.0, 0.6, 1.6}) {
        FitResult r = gauss_newton(curve, pr, {h, x0, left * f, right * f});
        if (!best || better(r, *best))
            best = std::move(r);
    }
    return *best;
}

PeakMetrics peak_metrics(const std::function<double(double)>& f, double x_min, double x_max)
{
    if (!(x_max > x_min))
        throw DomainError("peak search needs a non-empty domain");
    constexpr int grid = 2000;
    const double dx = (x_max - x_min) / (grid - 1);
    auto at = [&](int i) { return i == grid - 1 ? x_max : x_min + dx * i; };

    std::vector<double> v(grid);
    int best = 0;
    for (int i = 0; i < grid; ++i) {
        v[i] = f(at(i));
        if (v[i] > v[best])
            best = i;
    }

    PeakMetrics m;
    m.edge_peak = best == 0 || best == grid - 1;
    m.position = at(best);
    if (!m.edge_peak) {
        const double refined = golden_maximum(f, at(best - 1), at(best + 1));
        if (f(refined) >= v[best])
            m.position = refined;
    }
    m.value = f(m.position);

    const double level = 0.8 * m.value;
    int lo = best;
    while (lo > 0 && v[lo - 1] >= level)
        --lo;
    int hi = best;
    while (hi < grid - 1 && v[hi + 1] >= level)
        ++hi;
    m.left = lo == 0 ? x_min : bisect_crossing(f, std::min(at(lo), m.position), at(lo - 1), level);
    m.right = hi == grid - 1 ? x_max : bisect_crossing(f, std::max(at(hi), m.position), at(hi + 1), level);
    m.plateau = hi == grid - 1 && !m.edge_peak;
    m.width80 = m.right - m.left;
    m.secondary_minimum = secondary_minimum(v, static_cast<std::size_t>(best));
    return m;
}

PeakMetrics peak_metrics(const FitResult& fit)
{
    return peak_metrics([&fit](double x) { return fit.evaluate(x); }, fit.x_min, fit.x_max);
}

PeakMetrics peak_metrics(const ScanCurve& curve)
{
    curve.validate();
    if (curve.size() < 2)
        throw DomainError("peak search needs at least two samples");
    const auto top = std::max_element(curve.y.begin(), curve.y.end());
    const auto best = static_cast<std::size_t>(top - curve.y.begin());
    const std::size_t last = curve.size() - 1;

    PeakMetrics m;
    m.position = curve.x[best];
    m.value = *top;
    m.edge_peak = best == 0 || best == last;
    const double level = 0.8 * m.value;
    auto cross = [&](std::size_t in, std::size_t out) {
        const double t = (curve.y[in] - level) / (curve.y[in] - curve.y[out]);
        return curve.x[in] + t * (curve.x[out] - curve.x[in]);
    };
    std::size_t lo = best;
    while (lo > 0 && curve.y[lo - 1] >= level)
        --lo;
    std::size_t hi = best;
    while (hi < last && curve.y[hi + 1] >= level)
        ++hi;
    m.left = lo == 0 ? curve.x.front() : cross(lo, lo - 1);
    m.right = hi == last ? curve.x.back() : cross(hi, hi + 1);
    m.plateau = hi == last && !m.edge_peak;
    m.width80 = m.right - m.left;
    m.secondary_minimum = secondary_minimum(curve.y, best);
    return m;
}

double robustness_ratio(double width_a, double width_b)
{
    if (!(width_b > 0.0))
        throw DomainError("robustness ratio needs a positive reference width");
    return width_a / width_b;
}

double effective_excitation_size(double w1, double w2)
{
    if (!(w1 > 0.0) || !(w2 > 0.0))
        throw DomainError("beam waists must be positive");
    return std::sqrt(0.5 * std::numbers::pi / (1.0 / (w1 * w1) + 1.0 / (w2 * w2)));
}

}  // namespace rydarp
