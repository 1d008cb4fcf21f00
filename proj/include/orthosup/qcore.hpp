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

/// @file qcore.hpp
/// States, small dense complex operators, and the Bloch-sphere
/// parameterizations shared by every other header.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "orthosup/errors.hpp"

namespace orthosup {

using ComplexScalar = std::complex<double>;

/// Default tolerance for algebraic identities.
inline constexpr double default_tolerance = 1e-12;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace detail {

inline bool is_finite(ComplexScalar z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace detail

/// The two angle parameterizations in use. MAIN maps (theta, phi) to
/// (cos(theta/2), sin(theta/2) e^{i phi}); APPENDIX swaps the roles of
/// the trigonometric factors: (sin(theta/2), cos(theta/2) e^{i phi}).
enum class Convention { Main, Appendix };

/// Spherical angles with theta in [0, pi] and phi in [0, 2 pi).
struct BlochAngles {
    double theta;
    double phi;

    BlochAngles(double theta_, double phi_) : theta(theta_), phi(phi_) {
        if (!(theta >= 0.0 && theta <= pi)) {
            throw InvariantViolation("BlochAngles: theta " + std::to_string(theta_) +
                                     " outside [0, pi]");
        }
        if (!(phi >= 0.0 && phi < two_pi)) {
            throw InvariantViolation("BlochAngles: phi " + std::to_string(phi_) +
                                     " outside [0, 2 pi)");
        }
    }
};

/// Unit vector on the Bloch sphere.
struct BlochVector {
    double nx;
    double ny;
    double nz;

    BlochVector(double nx_, double ny_, double nz_) : nx(nx_), ny(ny_), nz(nz_) {
        const double len2 = nx * nx + ny * ny + nz * nz;
        if (!std::isfinite(len2) || std::abs(len2 - 1.0) > 1e-12) {
            throw InvariantViolation("BlochVector: (nx, ny, nz) must be a unit vector");
        }
    }
};

inline double dot(const BlochVector& a, const BlochVector& b) {
    return a.nx * b.nx + a.ny * b.ny + a.nz * b.nz;
}

/// A normalized single-qubit pure state. Construction renormalizes inputs
/// whose norm is within 1e-9 of 1 and rejects anything else.
class QubitState {
  public:
    QubitState(ComplexScalar a0, ComplexScalar a1) : a0_(a0), a1_(a1) {
        if (!detail::is_finite(a0) || !detail::is_finite(a1)) {
            throw InvariantViolation("QubitState: amplitudes must be finite");
        }
        const double n = std::sqrt(std::norm(a0) + std::norm(a1));
        if (n < 1e-12) {
            throw ZeroVector("QubitState: amplitudes are (near-)zero");
        }
        if (std::abs(n - 1.0) > 1e-9) {
            throw InvariantViolation("QubitState: norm " + std::to_string(n) +
                                     " not within 1e-9 of 1");
        }
        a0_ /= n;
        a1_ /= n;
    }

    ComplexScalar a0() const { return a0_; }
    ComplexScalar a1() const { return a1_; }

  private:
    ComplexScalar a0_;
    ComplexScalar a1_;
};

/// Dense complex column vector of arbitrary (small) dimension.
class StateVector {
  public:
    StateVector() = default;

    explicit StateVector(std::vector<ComplexScalar> amps) : amps_(std::move(amps)) {
        for (const auto& a : amps_) {
            if (!detail::is_finite(a)) {
                throw InvariantViolation("StateVector: amplitudes must be finite");
            }
        }
    }

    std::size_t dim() const { return amps_.size(); }
    ComplexScalar operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<ComplexScalar>& amps() const { return amps_; }

  private:
    std::vector<ComplexScalar> amps_;
};

/// Dense row-major complex matrix.
class DenseOperator {
  public:
    DenseOperator(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, ComplexScalar{0.0, 0.0}) {
        if (rows_ == 0 || cols_ == 0) {
            throw InvariantViolation("DenseOperator: dimensions must be positive");
        }
    }

    DenseOperator(std::size_t rows, std::size_t cols, std::vector<ComplexScalar> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows_ == 0 || cols_ == 0) {
            throw InvariantViolation("DenseOperator: dimensions must be positive");
        }
        if (entries_.size() != rows_ * cols_) {
            throw DimensionMismatch("DenseOperator: entries length must be rows*cols");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    ComplexScalar at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    ComplexScalar& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const std::vector<ComplexScalar>& entries() const { return entries_; }

    static DenseOperator identity(std::size_t n) {
        DenseOperator id(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            id.at(i, i) = 1.0;
        }
        return id;
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<ComplexScalar> entries_;
};

inline StateVector to_state_vector(const QubitState& q) {
    return StateVector({q.a0(), q.a1()});
}

/// Parameterize a qubit state by Bloch angles under the given convention.
inline QubitState bloch_to_state(const BlochAngles& angles, Convention convention) {
    const double half = 0.5 * angles.theta;
    const ComplexScalar phase = std::polar(1.0, angles.phi);
    if (convention == Convention::Main) {
        return QubitState(std::cos(half), std::sin(half) * phase);
    }
    return QubitState(std::sin(half), std::cos(half) * phase);
}

/// Phase-fixed orthogonal partner: (x, y) -> (conj(y), -conj(x)).
inline QubitState orthogonal_complement(const QubitState& psi) {
    return QubitState(std::conj(psi.a1()), -std::conj(psi.a0()));
}

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
    std::vector<ComplexScalar> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector(std::move(amps));
}

inline StateVector apply_operator(const DenseOperator& op, const StateVector& v) {
    if (op.cols() != v.dim()) {
        throw DimensionMismatch("apply_operator: operator has " + std::to_string(op.cols()) +
                                " columns, vector has dimension " + std::to_string(v.dim()));
    }
    std::vector<ComplexScalar> out(op.rows(), ComplexScalar{0.0, 0.0});
    for (std::size_t r = 0; r < op.rows(); ++r) {
        ComplexScalar acc{0.0, 0.0};
        for (std::size_t c = 0; c < op.cols(); ++c) {
            acc += op.at(r, c) * v[c];
        }
        out[r] = acc;
    }
    return StateVector(std::move(out));
}

/// Conjugate-linear in the first argument.
inline ComplexScalar inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("inner_product: dimensions differ");
    }
    ComplexScalar acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline ComplexScalar inner_product(const QubitState& a, const QubitState& b) {
    return std::conj(a.a0()) * b.a0() + std::conj(a.a1()) * b.a1();
}

inline double norm(const StateVector& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        acc += std::norm(v[i]);
    }
    return std::sqrt(acc);
}

inline StateVector normalize(const StateVector& v) {
    const double n = norm(v);
    if (n <= 1e-14) {
        throw ZeroVector("normalize: vector norm " + std::to_string(n) + " is too small");
    }
    std::vector<ComplexScalar> amps(v.amps());
    for (auto& a : amps) {
        a /= n;
    }
    return StateVector(std::move(amps));
}

inline DenseOperator multiply(const DenseOperator& a, const DenseOperator& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("multiply: inner dimensions differ");
    }
    DenseOperator out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const ComplexScalar ark = a.at(r, k);
            if (ark == ComplexScalar{0.0, 0.0}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out.at(r, c) += ark * b.at(k, c);
            }
        }
    }
    return out;
}

inline DenseOperator adjoint(const DenseOperator& a) {
    DenseOperator out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out.at(c, r) = std::conj(a.at(r, c));
        }
    }
    return out;
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ra = 0; ra < a.rows(); ++ra) {
        for (std::size_t ca = 0; ca < a.cols(); ++ca) {
            const ComplexScalar f = a.at(ra, ca);
            for (std::size_t rb = 0; rb < b.rows(); ++rb) {
                for (std::size_t cb = 0; cb < b.cols(); ++cb) {
                    out.at(ra * b.rows() + rb, ca * b.cols() + cb) = f * b.at(rb, cb);
                }
            }
        }
    }
    return out;
}

/// Outer product |v><v|.
inline DenseOperator projector(const StateVector& v) {
    DenseOperator out(v.dim(), v.dim());
    for (std::size_t r = 0; r < v.dim(); ++r) {
        for (std::size_t c = 0; c < v.dim(); ++c) {
            out.at(r, c) = v[r] * std::conj(v[c]);
        }
    }
    return out;
}

inline double max_abs(const DenseOperator& a) {
    double m = 0.0;
    for (const auto& e : a.entries()) {
        m = std::max(m, std::abs(e));
    }
    return m;
}

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi with complex
/// rotations; intended for the small dimensions (<= 8) used here.
inline std::vector<double> hermitian_eigenvalues(const DenseOperator& op,
                                                 double hermiticity_tol = 1e-10) {
    const std::size_t n = op.rows();
    if (op.cols() != n) {
        throw DimensionMismatch("hermitian_eigenvalues: matrix must be square");
    }
    const double scale = std::max(1.0, max_abs(op));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
            if (std::abs(op.at(r, c) - std::conj(op.at(c, r))) > hermiticity_tol * scale) {
                throw InvariantViolation("hermitian_eigenvalues: matrix is not Hermitian");
            }
        }
    }

    std::vector<ComplexScalar> a(op.entries());
    auto at = [&](std::size_t r, std::size_t c) -> ComplexScalar& { return a[r * n + c]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off2 += std::norm(at(p, q));
            }
        }
        if (std::sqrt(off2) <= 1e-15 * scale) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const ComplexScalar apq = at(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) {
                    continue;
                }
                const ComplexScalar phase = apq / mag;
                const double app = at(p, p).real();
                const double aqq = at(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t =
                    (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary G: G(p,p)=G(q,q)=c, G(p,q)=-s*phase, G(q,p)=s*conj(phase).
                for (std::size_t k = 0; k < n; ++k) {
                    const ComplexScalar akp = at(k, p);
                    const ComplexScalar akq = at(k, q);
                    at(k, p) = c * akp + s * std::conj(phase) * akq;
                    at(k, q) = -s * phase * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const ComplexScalar apk = at(p, k);
                    const ComplexScalar aqk = at(q, k);
                    at(p, k) = c * apk + s * phase * aqk;
                    at(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eigs(n);
    for (std::size_t i = 0; i < n; ++i) {
        eigs[i] = at(i, i).real();
    }
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
  public:
    DensityMatrix(std::size_t dim, std::vector<ComplexScalar> entries,
                  double tol = default_tolerance)
        : mat_(dim, dim, std::move(entries)) {
        ComplexScalar trace{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) {
            trace += mat_.at(i, i);
        }
        if (std::abs(trace - ComplexScalar{1.0, 0.0}) > tol) {
            throw InvariantViolation("DensityMatrix: trace must be 1");
        }
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = r; c < dim; ++c) {
                if (std::abs(mat_.at(r, c) - std::conj(mat_.at(c, r))) > tol) {
                    throw InvariantViolation("DensityMatrix: matrix must be Hermitian");
                }
            }
        }
        const auto eigs = hermitian_eigenvalues(mat_, tol);
        if (eigs.front() < -1e-10) {
            throw InvariantViolation("DensityMatrix: negative eigenvalue " +
                                     std::to_string(eigs.front()));
        }
    }

    std::size_t dim() const { return mat_.rows(); }
    ComplexScalar at(std::size_t r, std::size_t c) const { return mat_.at(r, c); }
    const DenseOperator& op() const { return mat_; }

  private:
    DenseOperator mat_;
};

/// <psi| rho |psi> for a pure state against a density matrix.
inline double fidelity_pure_mixed(const DensityMatrix& rho, const StateVector& psi) {
    if (rho.dim() != psi.dim()) {
        throw DimensionMismatch("fidelity_pure_mixed: dimensions differ");
    }
    return inner_product(psi, apply_operator(rho.op(), psi)).real();
}

/// Bloch vector of a qubit state: (2 Re(conj(x) y), 2 Im(conj(x) y), |x|^2 - |y|^2).
inline BlochVector bloch_vector(const QubitState& q) {
    const ComplexScalar cross = std::conj(q.a0()) * q.a1();
    return BlochVector(2.0 * cross.real(), 2.0 * cross.imag(),
                       std::norm(q.a0()) - std::norm(q.a1()));
}

/// Inverse of bloch_vector under the MAIN convention.
inline QubitState state_from_bloch(const BlochVector& v) {
    const double theta = std::acos(std::clamp(v.nz, -1.0, 1.0));
    double phi = std::atan2(v.ny, v.nx);
    if (phi < 0.0) {
        phi += two_pi;
    }
    if (phi >= two_pi) {
        phi = 0.0;
    }
    return bloch_to_state(BlochAngles(theta, phi), Convention::Main);
}

} // namespace orthosup
