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

// A short tour: run the probabilistic machine on |+>, |->, enumerate the
// four branches of the unit-probability circuit, and average both machines
// over the sphere.

#include <cmath>
#include <cstdio>

#include "orthosup/orthosup.hpp"

using namespace orthosup;

int main() {
    const MachineCoeffs coeffs = MachineCoeffs::balanced();
    const double r = 1.0 / std::sqrt(2.0);

    const PureMachine k1 = build_pure_machine(MachineKind::K1, coeffs);
    const auto out = superpose_pure(k1, QubitState(r, r), QubitState(r, -r));
    std::printf("K1 on |+>, |->:\n");
    std::printf("  success probability  %.15f\n", out.success_prob);
    if (out.state) {
        std::printf("  output state         (%.4f%+.4fi, %.4f%+.4fi)\n", out.state->a0().real(),
                    out.state->a0().imag(), out.state->a1().real(), out.state->a1().imag());
    }

    const CircuitMachine circuit = build_circuit(coeffs);
    const QubitState psi = bloch_to_state(BlochAngles(1.1, 0.7), Convention::Main);
    std::printf("\ncircuit branches on theta=1.1, phi=0.7:\n");
    double total = 0.0;
    for (const auto& res : run_circuit_enumerate(circuit, psi)) {
        std::printf("  mu=%+d n=%d  p=%.15f\n", res.outcome.mu, res.outcome.n, res.probability);
        total += res.probability;
    }
    std::printf("  total      %.15f\n", total);

    IntegrationSpec spec;
    const AverageReport pure = average_pure_machine(MachineKind::K1, coeffs, spec);
    const AverageReport general = average_general_orthogonal(BlochVector(0, 0, 1), spec);
    std::printf("\nsphere averages:\n");
    std::printf("  K1       numeric %.15f  closed %.15f\n", pure.numeric_average,
                pure.closed_form);
    std::printf("  general  numeric %.15f  closed %.15f\n", general.numeric_average,
                general.closed_form);
    std::printf("  ratio    %.15f\n", pure.closed_form / general.closed_form);
    return 0;
}
