// Copyright 2026 The orthosup authors
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

/// @file analysis.hpp
/// Bloch-sphere averages, the closed-form Kraus-operator solver, the
/// orthogonality-necessity probe, and the clone-superpose-delete pipeline.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orthosup/circuit.hpp"
#include "orthosup/errors.hpp"
#include "orthosup/machines.hpp"
#include "orthosup/qcore.hpp"

namespace orthosup {

enum class IntegrationMethod { Quadrature, MonteCarlo };

/// How to average over the sphere: Gauss-Legendre in cos(theta) crossed with
/// a uniform trapezoid in phi, or seeded uniform sampling.
struct IntegrationSpec {
    IntegrationMethod method = IntegrationMethod::Quadrature;
    int n_theta = 64;
    int n_phi = 64;
    long long n_samples = 1000000;
    std::uint64_t seed = 0;
};

struct AverageReport {
    std::string machine_id;
    double numeric_average = 0.0;
    double closed_form = 0.0;
    double abs_error = 0.0;
    /// Sample standard error of the mean; 0 for quadrature.
    double std_error = 0.0;
};

struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights on [-1, 1], by Newton iteration on the Legendre
/// polynomial from the usual asymptotic starting guesses.
inline GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) {
        throw InvariantViolation("gauss_legendre: need at least one node");
    }
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace detail {

inline void check_spec(const IntegrationSpec& spec) {
    if (spec.n_theta < 1 || spec.n_phi < 1 || spec.n_samples < 1) {
        throw InvariantViolation("IntegrationSpec: counts must be >= 1");
    }
}

/// (1 / 4 pi) times the integral of f(theta, phi) over the sphere.
template <typename F>
double sphere_average_quadrature(F&& f, int n_theta, int n_phi) {
    const GaussLegendreRule rule = gauss_legendre(n_theta);
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(rule.nodes[i]);
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            ring += f(theta, two_pi * j / n_phi);
        }
        total += rule.weights[i] * ring;
    }
    return total / (2.0 * n_phi);
}

/// Mean and standard error of f over uniform sphere samples.
template <typename F>
std::pair<double, double> sphere_average_monte_carlo(F&& f, long long n_samples,
                                                     std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long long k = 0; k < n_samples; ++k) {
        const double theta = std::acos(2.0 * uniform() - 1.0);
        const double phi = two_pi * uniform();
        const double v = f(theta, phi);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n_samples;
    if (n_samples < 2) {
        return {mean, 0.0};
    }
    const double var =
        std::max(0.0, (sum_sq / n_samples - mean * mean) * n_samples / (n_samples - 1.0));
    return {mean, std::sqrt(var / n_samples)};
}

template <typename F>
AverageReport average_over_sphere(std::string machine_id, double closed_form, F&& f,
                                  const IntegrationSpec& spec) {
    check_spec(spec);
    AverageReport report;
    report.machine_id = std::move(machine_id);
    report.closed_form = closed_form;
    if (spec.method == IntegrationMethod::Quadrature) {
        report.numeric_average = sphere_average_quadrature(f, spec.n_theta, spec.n_phi);
    } else {
        const auto [mean, se] = sphere_average_monte_carlo(f, spec.n_samples, spec.seed);
        report.numeric_average = mean;
        report.std_error = se;
    }
    report.abs_error = std::abs(report.numeric_average - report.closed_form);
    return report;
}

} // namespace detail

/// Average success probability of a pure machine over uniformly distributed
/// input states; the closed form is 1 / (2 (1 + |alpha| |beta|)), which never
/// drops below 1/3.
inline AverageReport average_pure_machine(MachineKind kind, const MachineCoeffs& coeffs,
                                          const IntegrationSpec& spec) {
    const PureMachine machine = build_pure_machine(kind, coeffs);
    const double ab = std::abs(coeffs.alpha()) * std::abs(coeffs.beta());
    return detail::average_over_sphere(
        to_string(kind), 1.0 / (2.0 * (1.0 + ab)),
        [&machine](double theta, double phi) {
            const QubitState psi = bloch_to_state(BlochAngles(theta, phi), Convention::Main);
            return pure_success_probability(machine, orthogonal_complement(psi));
        },
        spec);
}

/// Average success probability of the reference machine on exactly
/// orthogonal qubit pairs, over uniformly distributed input directions.
/// The closed form is 1/6 for every machine state s.
inline AverageReport average_general_orthogonal(const BlochVector& s,
                                                const IntegrationSpec& spec) {
    return detail::average_over_sphere(
        "general", 1.0 / 6.0,
        [&s](double theta, double phi) {
            const QubitState psi = bloch_to_state(BlochAngles(theta, phi), Convention::Main);
            return orthogonal_qubit_probability(bloch_vector(psi), s);
        },
        spec);
}

/// The two closed-form branches of the single-Kraus-operator ansatz
/// delta(theta, phi) = a(phi) sin(theta/2) + b(phi) cos(theta/2).
enum class EtaBranch { EtaEqPhi, EtaEqMinusPhi };

inline const char* to_string(EtaBranch branch) {
    return branch == EtaBranch::EtaEqPhi ? "eta-eq-phi" : "eta-eq-minus-phi";
}

struct SolverResult {
    EtaBranch branch;
    DenseOperator kraus;
    /// Largest admissible overall scale, 1 / sqrt(max eigenvalue of the
    /// unscaled K^dag K).
    double c_max;
    /// Max defining-equation deviation over the verification grid.
    double residual;
};

/// Reconstruct the 2x4 Kraus operator from the chosen branch's closed-form
/// entry relations, scale it to saturation, and fix the leftover global
/// phase by making the largest-modulus entry real positive. The residual
/// checks K(psi (x) psi_perp) = delta (alpha psi + beta e^{i eta} psi_perp)
/// on a 32x32 grid of APPENDIX-parameterized states.
inline SolverResult solve_kraus(const MachineCoeffs& coeffs, EtaBranch branch) {
    const ComplexScalar a = coeffs.alpha();
    const ComplexScalar b = coeffs.beta();
    if (std::abs(a) < 1e-15 || std::abs(b) < 1e-15) {
        throw DegenerateCoefficient("solve_kraus: both coefficients must be nonzero");
    }
    const ComplexScalar ratio = b / a;
    DenseOperator k(2, 4);
    if (branch == EtaBranch::EtaEqPhi) {
        // Surviving entries: K(0,0) = z', K(0,2) = K(1,3) = (beta/alpha) z',
        // K(1,2) = z'; the free parameter z' is set to alpha.
        const ComplexScalar zp = a;
        k.at(0, 0) = zp;
        k.at(0, 2) = ratio * zp;
        k.at(1, 2) = zp;
        k.at(1, 3) = ratio * zp;
    } else {
        // Surviving entries: K(0,1) = K(1,3) = y, K(0,0) = K(1,1) =
        // -(beta/alpha) y; the free parameter y is set to alpha.
        const ComplexScalar y = a;
        k.at(0, 0) = -ratio * y;
        k.at(0, 1) = y;
        k.at(1, 1) = -ratio * y;
        k.at(1, 3) = y;
    }

    const auto eigs = hermitian_eigenvalues(multiply(adjoint(k), k));
    const double c_max = 1.0 / std::sqrt(eigs.back());

    std::size_t arg_max = 0;
    double mod_max = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double m = std::abs(k.at(i / 4, i % 4));
        if (m > mod_max) {
            mod_max = m;
            arg_max = i;
        }
    }
    const ComplexScalar twist = std::polar(1.0, -std::arg(k.at(arg_max / 4, arg_max % 4)));
    for (std::size_t i = 0; i < 8; ++i) {
        k.at(i / 4, i % 4) *= c_max * twist;
    }

    // delta recomputed from the final entries so scale and phase cancel.
    double residual = 0.0;
    for (int i = 0; i < 32; ++i) {
        const double theta = (i + 0.5) * pi / 32.0;
        const double sin_h = std::sin(0.5 * theta);
        const double cos_h = std::cos(0.5 * theta);
        for (int j = 0; j < 32; ++j) {
            const double phi = two_pi * j / 32.0;
            const ComplexScalar ph = std::polar(1.0, phi);
            const QubitState psi(sin_h, cos_h * ph);
            const QubitState perp(cos_h, -sin_h * ph);
            const StateVector raw =
                apply_operator(k, tensor_product(to_state_vector(psi), to_state_vector(perp)));
            ComplexScalar delta;
            ComplexScalar eta_phase;
            if (branch == EtaBranch::EtaEqPhi) {
                delta = (k.at(0, 0) / a) * cos_h;
                eta_phase = ph;
            } else {
                delta = -(k.at(0, 1) / a) * ph * sin_h;
                eta_phase = std::conj(ph);
            }
            const ComplexScalar f_perp = b * eta_phase * delta;
            const ComplexScalar f_psi = a * delta;
            const StateVector target({f_psi * psi.a0() + f_perp * perp.a0(),
                                      f_psi * psi.a1() + f_perp * perp.a1()});
            const StateVector diff({raw[0] - target[0], raw[1] - target[1]});
            residual = std::max(residual, norm(diff));
        }
    }
    return SolverResult{branch, std::move(k), c_max, residual};
}

/// Deviation of the output's |c_psi / c_phi| from |alpha / beta| when the
/// machine is (mis)fed a nonorthogonal pair. Zero-norm outputs count as
/// compliant only when the pair was orthogonal after all; a vanishing phi
/// component makes the deviation infinite.
inline double nonorthogonal_residual(const PureMachine& machine, const QubitState& psi,
                                     const QubitState& phi) {
    const ComplexScalar beta = machine.coeffs().beta();
    if (std::abs(beta) < 1e-15) {
        throw DegenerateCoefficient("nonorthogonal_residual: beta must be nonzero");
    }
    const ComplexScalar det = psi.a0() * phi.a1() - psi.a1() * phi.a0();
    if (std::abs(det) <= 1e-10) {
        throw DegenerateBasis("nonorthogonal_residual: inputs are (nearly) parallel");
    }
    const StateVector raw = apply_operator(
        machine.kraus(), tensor_product(to_state_vector(psi), to_state_vector(phi)));
    if (norm(raw) < 1e-15) {
        return std::abs(inner_product(psi, phi)) <= 1e-10
                   ? 0.0
                   : std::numeric_limits<double>::infinity();
    }
    // Cramer solve of [psi phi] (c_psi, c_phi)^T = raw.
    const ComplexScalar c_psi = (raw[0] * phi.a1() - raw[1] * phi.a0()) / det;
    const ComplexScalar c_phi = (psi.a0() * raw[1] - psi.a1() * raw[0]) / det;
    if (std::abs(c_phi) <= 1e-14 * (std::abs(c_psi) + std::abs(c_phi))) {
        return std::numeric_limits<double>::infinity();
    }
    const double target = std::abs(machine.coeffs().alpha() / beta);
    return std::abs(std::abs(c_psi / c_phi) - target);
}

struct CloneDeleteReport {
    long long n_copies = 1;
    /// |<phi|psi>|^n_copies, evaluated in log space.
    double overlap_decay = 1.0;
    DensityMatrix mixed_output;
    QubitState target;
    double fidelity = 0.0;
};

/// The clone-superpose-delete pipeline: clone psi n_copies times, feed one
/// copy and phi to a would-be superposer whose flag states are orthogonal
/// (overlap `machine_overlap`, 0 by default), delete the clones, and compare
/// the surviving mixed state against the intended pure target
/// normalize(alpha phi + beta psi).
inline CloneDeleteReport clone_delete_demo(const QubitState& phi, const QubitState& psi,
                                           const MachineCoeffs& coeffs, long long n_copies,
                                           double machine_overlap = 0.0) {
    if (n_copies < 1) {
        throw InvariantViolation("clone_delete_demo: n_copies must be >= 1");
    }
    if (!(machine_overlap >= -1.0 && machine_overlap <= 1.0)) {
        throw InvariantViolation("clone_delete_demo: machine_overlap must be in [-1, 1]");
    }
    const ComplexScalar a = coeffs.alpha();
    const ComplexScalar b = coeffs.beta();

    const ComplexScalar t0 = a * phi.a0() + b * psi.a0();
    const ComplexScalar t1 = a * phi.a1() + b * psi.a1();
    const double t_norm = std::sqrt(std::norm(t0) + std::norm(t1));
    if (t_norm <= 1e-10) {
        throw DegenerateTarget("clone_delete_demo: alpha phi + beta psi vanishes");
    }
    const QubitState target(t0 / t_norm, t1 / t_norm);

    const ComplexScalar phi_psi = inner_product(phi, psi);
    const double overlap = std::abs(phi_psi);
    double decay;
    if (overlap <= 0.0) {
        decay = 0.0;
    } else {
        decay = std::exp(static_cast<double>(n_copies) * std::log(std::min(overlap, 1.0)));
    }

    // rho = |alpha|^2 P_phi + |beta|^2 P_psi
    //     + m (conj(alpha) beta |psi><phi| + alpha conj(beta) |phi><psi|),
    // normalized by its trace; m = 0 keeps the first two terms exactly.
    std::array<ComplexScalar, 2> pv{phi.a0(), phi.a1()};
    std::array<ComplexScalar, 2> sv{psi.a0(), psi.a1()};
    std::vector<ComplexScalar> rho(4, ComplexScalar{0.0, 0.0});
    const double a2 = std::norm(a);
    const double b2 = std::norm(b);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            rho[r * 2 + c] = a2 * pv[r] * std::conj(pv[c]) + b2 * sv[r] * std::conj(sv[c]);
        }
    }
    if (machine_overlap != 0.0) {
        const ComplexScalar cross = std::conj(a) * b * machine_overlap;
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                const ComplexScalar term = cross * sv[r] * std::conj(pv[c]);
                rho[r * 2 + c] += term + std::conj(cross * sv[c] * std::conj(pv[r]));
            }
        }
        const double trace = (rho[0] + rho[3]).real();
        if (trace <= 1e-12) {
            throw DegenerateTarget("clone_delete_demo: output trace vanishes");
        }
        for (auto& e : rho) {
            e /= trace;
        }
    }
    DensityMatrix mixed(2, std::move(rho));
    const double fid = fidelity_pure_mixed(mixed, to_state_vector(target));
    return CloneDeleteReport{n_copies, decay, std::move(mixed), target, fid};
}

} // namespace orthosup
