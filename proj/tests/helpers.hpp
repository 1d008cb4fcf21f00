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

/// Shared test utilities: seeded generators for random states and weights,
/// plus independent oracles (power iteration, partial trace) that deliberately
/// avoid the library routines they cross-check.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "orthosup/orthosup.hpp"

namespace testutil {

using orthosup::ComplexScalar;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t raw() { return gen_(); }

    orthosup::QubitState state() {
        const double theta = std::acos(2.0 * uniform() - 1.0);
        const double half = 0.5 * theta;
        const ComplexScalar global = std::polar(1.0, uniform(0.0, orthosup::two_pi));
        const ComplexScalar rel = std::polar(1.0, uniform(0.0, orthosup::two_pi));
        return orthosup::QubitState(std::cos(half) * global, std::sin(half) * global * rel);
    }

    /// Weights with both moduli at least min_modulus and generic phases.
    orthosup::MachineCoeffs coeffs(double min_modulus = 0.0) {
        const double lo = min_modulus * min_modulus;
        const double a2 = uniform(lo, 1.0 - lo);
        const double am = std::sqrt(a2);
        const double bm = std::sqrt(1.0 - a2);
        return orthosup::MachineCoeffs(std::polar(am, uniform(0.0, orthosup::two_pi)),
                                       std::polar(bm, uniform(0.0, orthosup::two_pi)));
    }

    /// Haar-like random 2x2 unitary from two random states glued by phase.
    orthosup::DenseOperator unitary2() {
        const orthosup::QubitState col = state();
        const ComplexScalar det_phase = std::polar(1.0, uniform(0.0, orthosup::two_pi));
        orthosup::DenseOperator u(2, 2);
        u.at(0, 0) = col.a0();
        u.at(1, 0) = col.a1();
        u.at(0, 1) = -std::conj(col.a1()) * det_phase;
        u.at(1, 1) = std::conj(col.a0()) * det_phase;
        return u;
    }

  private:
    std::mt19937_64 gen_;
};

/// Largest eigenvalue of a Hermitian PSD matrix by plain power iteration;
/// independent of the library's Jacobi routine.
inline double power_largest_eigenvalue(const orthosup::DenseOperator& h, int iters = 20000) {
    const std::size_t n = h.rows();
    std::vector<ComplexScalar> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = ComplexScalar(1.0 + 0.13 * static_cast<double>(i),
                             0.37 - 0.11 * static_cast<double>(i));
    }
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<ComplexScalar> w(n, ComplexScalar{0.0, 0.0});
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                w[r] += h.at(r, c) * v[c];
            }
        }
        double nw = 0.0;
        for (const auto& x : w) {
            nw += std::norm(x);
        }
        nw = std::sqrt(nw);
        if (nw < 1e-300) {
            return 0.0;
        }
        double rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += (std::conj(v[i]) * w[i]).real();
        }
        double nv = 0.0;
        for (const auto& x : v) {
            nv += std::norm(x);
        }
        const double next = rayleigh / nv;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = w[i] / nw;
        }
        if (it > 4 && std::abs(next - lambda) < 1e-15 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

/// Componentwise max deviation between two vectors.
inline double max_component_dev(const orthosup::StateVector& a, const orthosup::StateVector& b) {
    double dev = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        dev = std::max(dev, std::abs(a[i] - b[i]));
    }
    return dev;
}

/// Max deviation after aligning b's global phase to a.
inline double dev_up_to_global_phase(const orthosup::StateVector& a,
                                     const orthosup::StateVector& b) {
    ComplexScalar overlap{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        overlap += std::conj(b[i]) * a[i];
    }
    const double mag = std::abs(overlap);
    const ComplexScalar phase = mag > 1e-300 ? overlap / mag : ComplexScalar{1.0, 0.0};
    double dev = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        dev = std::max(dev, std::abs(a[i] - phase * b[i]));
    }
    return dev;
}

inline double max_abs_dev(const orthosup::DenseOperator& a, const orthosup::DenseOperator& b) {
    double dev = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            dev = std::max(dev, std::abs(a.at(r, c) - b.at(r, c)));
        }
    }
    return dev;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

/// Run a shell command, capturing stdout and the exit code.
inline CommandResult run_command(const std::string& command) {
    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        throw std::runtime_error("popen failed for: " + command);
    }
    char buffer[4096];
    std::size_t got = 0;
    while ((got = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

/// Reduced density matrix of the first qubit of a two-qubit pure state
/// (second factor traced out), computed entry by entry as a brute-force
/// oracle.
inline std::vector<ComplexScalar> trace_out_second(const std::vector<ComplexScalar>& joint) {
    std::vector<ComplexScalar> rho(4, ComplexScalar{0.0, 0.0});
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t k = 0; k < 2; ++k) {
                rho[r * 2 + c] += joint[r * 2 + k] * std::conj(joint[c * 2 + k]);
            }
        }
    }
    return rho;
}

} // namespace testutil
