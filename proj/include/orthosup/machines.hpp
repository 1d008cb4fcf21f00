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

/// @file machines.hpp
/// The two probabilistic pure-output superposition machines K1/K2 and the
/// reference partial-information machine they are compared against.
///
/// Both pure machines act on a joint two-qubit state |psi> (x) |psi_perp>
/// through a single 2x4 Kraus operator and, on success, emit a state of the
/// form alpha |psi> + beta e^{i eta} |psi_perp> up to a global phase. K1
/// succeeds with probability C^2 |<0|psi_perp>|^2 and K2 with
/// C^2 |<1|psi_perp>|^2, where C = 1/sqrt(1 + |alpha beta|); the two
/// probabilities always add up to C^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "orthosup/errors.hpp"
#include "orthosup/qcore.hpp"

namespace orthosup {

enum class MachineKind { K1, K2 };

inline const char* to_string(MachineKind kind) {
    return kind == MachineKind::K1 ? "k1" : "k2";
}

/// Target superposition weights with |alpha|^2 + |beta|^2 = 1. Construction
/// renormalizes inputs within 1e-9 of unit norm and rejects anything else.
class MachineCoeffs {
  public:
    MachineCoeffs(ComplexScalar alpha, ComplexScalar beta) : alpha_(alpha), beta_(beta) {
        if (!detail::is_finite(alpha) || !detail::is_finite(beta)) {
            throw InvariantViolation("MachineCoeffs: coefficients must be finite");
        }
        const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
        if (n < 1e-12) {
            throw ZeroVector("MachineCoeffs: coefficients are (near-)zero");
        }
        if (std::abs(n - 1.0) > 1e-9) {
            throw InvariantViolation("MachineCoeffs: |alpha|^2 + |beta|^2 = " +
                                     std::to_string(n * n) + ", expected 1");
        }
        alpha_ /= n;
        beta_ /= n;
    }

    static MachineCoeffs balanced() {
        const double r = 1.0 / std::sqrt(2.0);
        return MachineCoeffs(r, r);
    }

    ComplexScalar alpha() const { return alpha_; }
    ComplexScalar beta() const { return beta_; }

  private:
    ComplexScalar alpha_;
    ComplexScalar beta_;
};

/// A single-Kraus-operator machine: kind, weights, the 2x4 operator, and the
/// saturating constant C = 1/sqrt(1 + |alpha beta|).
class PureMachine {
  public:
    PureMachine(MachineKind kind, MachineCoeffs coeffs, DenseOperator kraus, double c_norm)
        : kind_(kind), coeffs_(coeffs), kraus_(std::move(kraus)), c_norm_(c_norm) {
        if (kraus_.rows() != 2 || kraus_.cols() != 4) {
            throw DimensionMismatch("PureMachine: Kraus operator must be 2x4");
        }
        const ComplexScalar ab = coeffs_.alpha() * coeffs_.beta();
        if (std::abs(c_norm_ - 1.0 / std::sqrt(1.0 + std::abs(ab))) > default_tolerance) {
            throw InvariantViolation("PureMachine: c_norm does not match the coefficients");
        }
        const auto eigs = hermitian_eigenvalues(multiply(adjoint(kraus_), kraus_));
        if (std::abs(eigs.back() - 1.0) > 1e-10) {
            throw InvariantViolation("PureMachine: largest eigenvalue of K^dag K is " +
                                     std::to_string(eigs.back()) + ", expected 1");
        }
    }

    MachineKind kind() const { return kind_; }
    const MachineCoeffs& coeffs() const { return coeffs_; }
    const DenseOperator& kraus() const { return kraus_; }
    double c_norm() const { return c_norm_; }

  private:
    MachineKind kind_;
    MachineCoeffs coeffs_;
    DenseOperator kraus_;
    double c_norm_;
};

/// Assemble the saturated Kraus operator for the requested machine:
///   K1 = C [[alpha, 0, beta, 0], [0, 0, alpha, beta]]
///   K2 = C [[-beta, alpha, 0, 0], [0, -beta, 0, alpha]]
inline PureMachine build_pure_machine(MachineKind kind, const MachineCoeffs& coeffs) {
    const ComplexScalar a = coeffs.alpha();
    const ComplexScalar b = coeffs.beta();
    const double c = 1.0 / std::sqrt(1.0 + std::abs(a * b));
    DenseOperator k(2, 4);
    if (kind == MachineKind::K1) {
        k.at(0, 0) = c * a;
        k.at(0, 2) = c * b;
        k.at(1, 2) = c * a;
        k.at(1, 3) = c * b;
    } else {
        k.at(0, 0) = -c * b;
        k.at(0, 1) = c * a;
        k.at(1, 1) = -c * b;
        k.at(1, 3) = c * a;
    }
    return PureMachine(kind, coeffs, std::move(k), c);
}

/// One post-selected machine run. `state` and `eta` are absent for
/// zero-probability outcomes; `eta` is additionally absent when alpha or
/// beta vanishes, since the relative phase is then undefined.
struct SuperposeOutcome {
    StateVector raw;
    double success_prob = 0.0;
    std::optional<QubitState> state;
    std::optional<double> eta;
};

namespace detail {

/// arg of the phase multiplying beta in alpha |psi> + beta e^{i eta} |psi_perp>,
/// read off an unnormalized output vector.
inline std::optional<double> relative_phase(const QubitState& psi, const QubitState& psi_perp,
                                            const StateVector& raw, const MachineCoeffs& coeffs) {
    if (std::abs(coeffs.alpha()) < 1e-15 || std::abs(coeffs.beta()) < 1e-15) {
        return std::nullopt;
    }
    const ComplexScalar on_psi = inner_product(to_state_vector(psi), raw);
    const ComplexScalar on_perp = inner_product(to_state_vector(psi_perp), raw);
    if (std::abs(on_psi) < 1e-300 || std::abs(on_perp) < 1e-300) {
        return std::nullopt;
    }
    return std::arg(on_perp * coeffs.alpha() / (coeffs.beta() * on_psi));
}

} // namespace detail

/// Run a pure machine on |psi> (x) |psi_perp>. The inputs must be orthogonal
/// within `ortho_tol`; nonorthogonal_residual in analysis.hpp probes what
/// happens when they are not.
inline SuperposeOutcome superpose_pure(const PureMachine& machine, const QubitState& psi,
                                       const QubitState& psi_perp, double ortho_tol = 1e-10) {
    const double overlap = std::abs(inner_product(psi, psi_perp));
    if (overlap > ortho_tol) {
        throw NotOrthogonal("superpose_pure: |<psi|psi_perp>| = " + std::to_string(overlap));
    }
    const StateVector joint = tensor_product(to_state_vector(psi), to_state_vector(psi_perp));
    StateVector raw = apply_operator(machine.kraus(), joint);
    const double n = norm(raw);
    SuperposeOutcome out;
    out.success_prob = n * n;
    if (out.success_prob > 1e-20) {
        const StateVector unit = normalize(raw);
        out.state = QubitState(unit[0], unit[1]);
        out.eta = detail::relative_phase(psi, psi_perp, raw, machine.coeffs());
    }
    out.raw = std::move(raw);
    return out;
}

/// Success probability without running the machine:
/// P = C^2 |<0|psi_perp>|^2 for K1, C^2 |<1|psi_perp>|^2 for K2.
inline double pure_success_probability(const PureMachine& machine, const QubitState& psi_perp) {
    const double c2 = machine.c_norm() * machine.c_norm();
    const double amp2 = machine.kind() == MachineKind::K1 ? std::norm(psi_perp.a0())
                                                          : std::norm(psi_perp.a1());
    return c2 * amp2;
}

/// (alpha, beta) -> (beta, -alpha). Satisfies
/// K1^{alpha,beta}(psi (x) psi_perp) = K2^{dual}(psi_perp (x) psi).
inline MachineCoeffs duality_map(const MachineCoeffs& coeffs) {
    return MachineCoeffs(coeffs.beta(), -coeffs.alpha());
}

/// The partial-information reference machine: it knows the overlaps of the
/// inputs with a fixed state |chi>.
struct GeneralMachineSpec {
    QubitState chi;
    MachineCoeffs coeffs;
};

/// Unnormalized output
///   alpha (<chi|phi>/|<chi|phi>|) |psi> + beta (<chi|psi>/|<chi|psi>|) |phi>.
inline StateVector general_output_state(const GeneralMachineSpec& spec, const QubitState& psi,
                                        const QubitState& phi) {
    const ComplexScalar chi_psi = inner_product(spec.chi, psi);
    const ComplexScalar chi_phi = inner_product(spec.chi, phi);
    if (std::abs(chi_psi) <= 1e-10 || std::abs(chi_phi) <= 1e-10) {
        throw DegenerateOverlap("general_output_state: an overlap with chi vanishes");
    }
    const ComplexScalar f_psi = spec.coeffs.alpha() * (chi_phi / std::abs(chi_phi));
    const ComplexScalar f_phi = spec.coeffs.beta() * (chi_psi / std::abs(chi_psi));
    return StateVector({f_psi * psi.a0() + f_phi * phi.a0(), f_psi * psi.a1() + f_phi * phi.a1()});
}

/// P = c1 c2 / (c1 + c2) * N^2 with c1 = |<chi|psi>|^2, c2 = |<chi|phi>|^2 and
/// N^2 = 1 + 2 Re(conj(alpha) beta Tr(P_chi P_psi P_phi) / sqrt(c1 c2)).
inline double general_success_probability(const GeneralMachineSpec& spec, const QubitState& psi,
                                          const QubitState& phi) {
    const ComplexScalar chi_psi = inner_product(spec.chi, psi);
    const ComplexScalar chi_phi = inner_product(spec.chi, phi);
    const double c1 = std::norm(chi_psi);
    const double c2 = std::norm(chi_phi);
    if (c1 + c2 <= 1e-14) {
        throw DegenerateOverlap("general_success_probability: both overlaps with chi vanish");
    }
    // Tr(P_chi P_psi P_phi) = <chi|psi><psi|phi><phi|chi>.
    const ComplexScalar tr = chi_psi * inner_product(psi, phi) * std::conj(chi_phi);
    const double geo = std::sqrt(c1 * c2);
    const ComplexScalar cross = geo > 1e-200 ? tr / geo : ComplexScalar{0.0, 0.0};
    const double n2 =
        1.0 + 2.0 * (std::conj(spec.coeffs.alpha()) * spec.coeffs.beta() * cross).real();
    const double p = c1 * c2 / (c1 + c2) * n2;
    return std::clamp(p, 0.0, 1.0);
}

/// Reference-machine success probability for exactly orthogonal qubit inputs
/// with Bloch vectors n and -n and machine state s: P = (1 - (n.s)^2) / 4.
inline double orthogonal_qubit_probability(const BlochVector& n, const BlochVector& s) {
    const double d = std::clamp(dot(n, s), -1.0, 1.0);
    return 0.25 * (1.0 - d * d);
}

} // namespace orthosup
