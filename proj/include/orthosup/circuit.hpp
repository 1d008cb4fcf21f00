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

/// @file circuit.hpp
/// The three-qubit circuit machine that superposes with unit total success
/// probability. An ancilla beta |0> + alpha |1> drives a controlled-SWAP of
/// the two input wires followed by a controlled-X on wire 1; measuring the
/// ancilla in the X basis (outcome mu) and wire 1 in the Z basis (outcome n)
/// leaves wire 2 in alpha |psi> + beta e^{i eta_{mu,n}} |psi_perp> for every
/// one of the four outcomes.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "orthosup/errors.hpp"
#include "orthosup/machines.hpp"
#include "orthosup/qcore.hpp"

namespace orthosup {

/// mu is the X-basis result on the ancilla (+1 or -1); n is the Z-basis
/// result on the second input wire (0 or 1).
struct MeasurementOutcome {
    int mu;
    int n;
};

/// The four outcomes in their fixed enumeration order.
inline constexpr std::array<MeasurementOutcome, 4> outcome_order{
    MeasurementOutcome{+1, 0}, MeasurementOutcome{+1, 1}, MeasurementOutcome{-1, 0},
    MeasurementOutcome{-1, 1}};

/// One measurement branch. `post_state` is absent on zero-probability
/// branches; `eta` additionally requires both coefficients nonzero.
struct CircuitResult {
    MeasurementOutcome outcome;
    double probability = 0.0;
    std::optional<QubitState> post_state;
    std::optional<double> eta;
};

namespace detail {

/// Basis order: index = ancilla * 4 + wire1 * 2 + wire2 (ancilla most
/// significant, matching the top-to-bottom wire order). Wire 1 carries
/// |psi> in, wire 2 carries |psi_perp> in and the superposition out.
inline DenseOperator circuit_unitary() {
    DenseOperator cswap(8, 8);
    DenseOperator cx1(8, 8);
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t q1 = 0; q1 < 2; ++q1) {
            for (std::size_t q2 = 0; q2 < 2; ++q2) {
                const std::size_t col = a * 4 + q1 * 2 + q2;
                const std::size_t swapped = a == 0 ? col : a * 4 + q2 * 2 + q1;
                cswap.at(swapped, col) = 1.0;
                const std::size_t flipped = a == 0 ? col : a * 4 + (1 - q1) * 2 + q2;
                cx1.at(flipped, col) = 1.0;
            }
        }
    }
    return multiply(cx1, cswap);
}

/// Projective amplitudes of |mu> on the ancilla (X basis).
inline std::array<ComplexScalar, 2> mu_amplitudes(int mu) {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, mu > 0 ? r : -r};
}

} // namespace detail

/// The circuit, its unitary, and the four Kraus operators
/// A_{mu,n} = (P_mu (x) P_n (x) I) U in outcome_order.
class CircuitMachine {
  public:
    CircuitMachine(MachineCoeffs coeffs, DenseOperator unitary,
                   std::array<DenseOperator, 4> kraus_set)
        : coeffs_(coeffs), unitary_(std::move(unitary)), kraus_set_(std::move(kraus_set)) {
        DenseOperator uu = multiply(adjoint(unitary_), unitary_);
        for (std::size_t i = 0; i < 8; ++i) {
            uu.at(i, i) -= 1.0;
        }
        if (max_abs(uu) > default_tolerance) {
            throw InvariantViolation("CircuitMachine: unitary is not unitary");
        }
        DenseOperator sum(8, 8);
        for (const auto& a : kraus_set_) {
            const DenseOperator aa = multiply(adjoint(a), a);
            for (std::size_t r = 0; r < 8; ++r) {
                for (std::size_t c = 0; c < 8; ++c) {
                    sum.at(r, c) += aa.at(r, c);
                }
            }
        }
        for (std::size_t i = 0; i < 8; ++i) {
            sum.at(i, i) -= 1.0;
        }
        if (max_abs(sum) > default_tolerance) {
            throw InvariantViolation("CircuitMachine: Kraus set is not complete");
        }
    }

    const MachineCoeffs& coeffs() const { return coeffs_; }
    const DenseOperator& unitary() const { return unitary_; }
    const std::array<DenseOperator, 4>& kraus_set() const { return kraus_set_; }

  private:
    MachineCoeffs coeffs_;
    DenseOperator unitary_;
    std::array<DenseOperator, 4> kraus_set_;
};

/// The ancilla carrying the weights: beta |0> + alpha |1>.
inline QubitState ancilla_state(const MachineCoeffs& coeffs) {
    return QubitState(coeffs.beta(), coeffs.alpha());
}

inline CircuitMachine build_circuit(const MachineCoeffs& coeffs) {
    DenseOperator u = detail::circuit_unitary();
    std::array<DenseOperator, 4> kraus{DenseOperator(8, 8), DenseOperator(8, 8),
                                       DenseOperator(8, 8), DenseOperator(8, 8)};
    const DenseOperator id2 = DenseOperator::identity(2);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto mu = detail::mu_amplitudes(outcome_order[i].mu);
        const StateVector mu_vec({mu[0], mu[1]});
        const int n = outcome_order[i].n;
        const StateVector n_vec({n == 0 ? 1.0 : 0.0, n == 0 ? 0.0 : 1.0});
        const DenseOperator proj = kron(kron(projector(mu_vec), projector(n_vec)), id2);
        kraus[i] = multiply(proj, u);
    }
    return CircuitMachine(coeffs, std::move(u), std::move(kraus));
}

/// Apply all four Kraus operators to |anc> (x) |psi> (x) |psi_perp> and read
/// each branch's probability and the state left on the unmeasured wire.
/// psi_perp is orthogonal_complement(psi); the reported eta values refer to
/// that phase-fixed partner.
inline std::array<CircuitResult, 4> run_circuit_enumerate(const CircuitMachine& machine,
                                                          const QubitState& psi) {
    const QubitState perp = orthogonal_complement(psi);
    const StateVector input =
        tensor_product(to_state_vector(ancilla_state(machine.coeffs())),
                       tensor_product(to_state_vector(psi), to_state_vector(perp)));
    std::array<CircuitResult, 4> results;
    for (std::size_t i = 0; i < 4; ++i) {
        const MeasurementOutcome outcome = outcome_order[i];
        const StateVector projected = apply_operator(machine.kraus_set()[i], input);
        // projected = |mu> (x) |n> (x) |w>; contract the measured wires.
        const auto mu = detail::mu_amplitudes(outcome.mu);
        std::vector<ComplexScalar> w(2, ComplexScalar{0.0, 0.0});
        for (std::size_t a = 0; a < 2; ++a) {
            const ComplexScalar f = std::conj(mu[a]);
            for (std::size_t k = 0; k < 2; ++k) {
                w[k] += f * projected[a * 4 + static_cast<std::size_t>(outcome.n) * 2 + k];
            }
        }
        StateVector leftover(std::move(w));
        CircuitResult& res = results[i];
        res.outcome = outcome;
        const double n = norm(leftover);
        res.probability = n * n;
        if (res.probability > 1e-20) {
            const StateVector unit = normalize(leftover);
            res.post_state = QubitState(unit[0], unit[1]);
            res.eta = detail::relative_phase(psi, perp, leftover, machine.coeffs());
        }
    }
    return results;
}

/// Draw one outcome by inverse CDF over the exact branch probabilities.
/// Identical seeds give identical outcomes.
inline CircuitResult sample_circuit(const CircuitMachine& machine, const QubitState& psi,
                                    std::uint64_t seed) {
    const auto results = run_circuit_enumerate(machine, psi);
    std::mt19937_64 gen(seed);
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    std::size_t fallback = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (results[i].probability > 0.0) {
            fallback = i;
        }
        acc += results[i].probability;
        if (u < acc) {
            return results[i];
        }
    }
    // u landed beyond the accumulated total (rounding); take the last
    // nonzero-probability branch.
    return results[fallback];
}

/// Max-norm deviation of sum_j A_j^dag A_j from the identity.
inline double verify_completeness(const CircuitMachine& machine) {
    DenseOperator sum(8, 8);
    for (const auto& a : machine.kraus_set()) {
        const DenseOperator aa = multiply(adjoint(a), a);
        for (std::size_t r = 0; r < 8; ++r) {
            for (std::size_t c = 0; c < 8; ++c) {
                sum.at(r, c) += aa.at(r, c);
            }
        }
    }
    for (std::size_t i = 0; i < 8; ++i) {
        sum.at(i, i) -= 1.0;
    }
    return max_abs(sum);
}

/// One row of the outcome table: the phase multiplying beta and the branch
/// probability, as closed functions of the APPENDIX angles.
struct TableOneRow {
    MeasurementOutcome outcome;
    ComplexScalar phase;
    double probability;
};

/// Evaluate the four-outcome table for psi = (sin(theta/2), cos(theta/2)
/// e^{i phi}) with its fixed partner psi_perp = (cos(theta/2), -sin(theta/2)
/// e^{i phi}). Phases come from mu <n|psi> / <n|X|psi_perp>; at a pole where
/// that ratio is 0/0 its theta-independent limit is used. Neither column
/// depends on the weights, so the coeffs argument only names the machine the
/// table belongs to.
inline std::array<TableOneRow, 4> table_one(const MachineCoeffs& /*coeffs*/, double theta,
                                            double phi) {
    const BlochAngles angles(theta, phi);
    const QubitState psi = bloch_to_state(angles, Convention::Appendix);
    const ComplexScalar phase = std::polar(1.0, phi);
    const double half = 0.5 * theta;
    const QubitState perp(std::cos(half), -std::sin(half) * phase);
    // X |psi_perp> = (-sin(theta/2) e^{i phi}, cos(theta/2)).
    const std::array<ComplexScalar, 2> x_perp{perp.a1(), perp.a0()};
    const std::array<ComplexScalar, 2> psi_amp{psi.a0(), psi.a1()};
    std::array<TableOneRow, 4> rows;
    for (std::size_t i = 0; i < 4; ++i) {
        const MeasurementOutcome outcome = outcome_order[i];
        const ComplexScalar denom = x_perp[static_cast<std::size_t>(outcome.n)];
        TableOneRow& row = rows[i];
        row.outcome = outcome;
        row.probability = 0.5 * std::norm(denom);
        if (std::abs(denom) > 1e-15) {
            row.phase = static_cast<double>(outcome.mu) *
                        psi_amp[static_cast<std::size_t>(outcome.n)] / denom;
        } else {
            row.phase = outcome.n == 0
                            ? -static_cast<double>(outcome.mu) * std::conj(phase)
                            : static_cast<double>(outcome.mu) * phase;
        }
    }
    return rows;
}

} // namespace orthosup
