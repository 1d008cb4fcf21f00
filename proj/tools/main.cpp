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

/// Command-line front end. Every command prints one run record with the
/// layout {config, results, timing_ms, version}; JSON and CSV are stable
/// interfaces, text is for human eyes only. Exit codes: 0 success, 1 bad
/// input or I/O failure, 2 legitimate zero-probability outcome.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthosup/orthosup.hpp"

namespace {

using nlohmann::ordered_json;
using namespace orthosup;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json cplx(ComplexScalar z) {
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json state_json(const QubitState& s) {
    return ordered_json::array({cplx(s.a0()), cplx(s.a1())});
}

ordered_json vec_json(const StateVector& v) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) {
        arr.push_back(cplx(v[i]));
    }
    return arr;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i) {
            out += header[i];
            out += i + 1 < header.size() ? "," : "\n";
        }
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out += row[i];
                out += i + 1 < row.size() ? "," : "\n";
            }
        }
        return out;
    }
};

void flatten_text(const ordered_json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            flatten_text(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    out += prefix + " = " + j.dump() + "\n";
}

/// Options shared by (nearly) all subcommands; Option handles record which
/// flags the user actually passed.
struct CommonOpts {
    double alpha_mod = 0.0;
    double beta_mod = 0.0;
    double arg_alpha = 0.0;
    double arg_beta = 0.0;
    bool balanced = false;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;

    std::string state_name = "plus";
    double theta = 0.0;
    double phi = 0.0;
    std::string convention = "main";
    std::vector<double> amps;
    CLI::Option* state_opt = nullptr;
    CLI::Option* theta_opt = nullptr;
    CLI::Option* amps_opt = nullptr;

    std::string format = "json";
    std::string out_path;
    double tolerance = 1e-12;
    CLI::Option* tol_opt = nullptr;

    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void add_coeff_flags(CLI::App* cmd, CommonOpts& o) {
    o.alpha_opt = cmd->add_option("--alpha", o.alpha_mod, "|alpha| in [0, 1]");
    o.beta_opt = cmd->add_option(
        "--beta", o.beta_mod, "|beta|; must agree with --alpha within 1e-3 and is renormalized");
    cmd->add_option("--arg-alpha", o.arg_alpha, "phase of alpha in radians");
    cmd->add_option("--arg-beta", o.arg_beta, "phase of beta in radians");
    cmd->add_flag("--balanced", o.balanced, "alpha = beta = 1/sqrt(2) (the default)");
}

void add_state_flags(CLI::App* cmd, CommonOpts& o) {
    o.state_opt = cmd->add_option("--state", o.state_name, "named input state")
                      ->check(CLI::IsMember({"ket0", "ket1", "plus", "minus"}));
    o.theta_opt = cmd->add_option("--theta", o.theta, "polar angle in [0, pi]");
    cmd->add_option("--phi", o.phi, "azimuthal angle, wrapped into [0, 2 pi)")
        ->needs(o.theta_opt);
    cmd->add_option("--convention", o.convention, "Bloch parameterization for --theta/--phi")
        ->check(CLI::IsMember({"main", "appendix"}));
    o.amps_opt =
        cmd->add_option("--amps", o.amps, "explicit amplitudes: re0 im0 re1 im1")->expected(4);
}

void add_io_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--out", o.out_path, "write the output to this file instead of stdout");
    o.tol_opt = cmd->add_option(
        "--tolerance", o.tolerance,
        "tolerance for reported checks; overrides ORTHOSUP_TOLERANCE and the 1e-12 default");
}

double resolve_tolerance(const CommonOpts& o) {
    double value = 1e-12;
    if (o.tol_opt->count() > 0) {
        value = o.tolerance;
    } else if (const char* env = std::getenv("ORTHOSUP_TOLERANCE")) {
        char* end = nullptr;
        value = std::strtod(env, &end);
        if (end == env || *end != '\0') {
            throw InvariantViolation("ORTHOSUP_TOLERANCE is not a number: " + std::string(env));
        }
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvariantViolation("tolerance must be a positive finite number");
    }
    return value;
}

MachineCoeffs resolve_coeffs(const CommonOpts& o) {
    const bool a_set = o.alpha_opt->count() > 0;
    const bool b_set = o.beta_opt->count() > 0;
    if (o.balanced && (a_set || b_set)) {
        throw InvariantViolation("--balanced excludes --alpha/--beta");
    }
    if (!a_set && !b_set) {
        return MachineCoeffs(std::polar(1.0 / std::sqrt(2.0), o.arg_alpha),
                             std::polar(1.0 / std::sqrt(2.0), o.arg_beta));
    }
    double am = a_set ? o.alpha_mod : 0.0;
    double bm = b_set ? o.beta_mod : 0.0;
    if ((a_set && !(am >= 0.0)) || (b_set && !(bm >= 0.0))) {
        throw InvariantViolation("coefficient moduli must be nonnegative");
    }
    if (a_set && b_set) {
        const double n2 = am * am + bm * bm;
        if (std::abs(n2 - 1.0) > 1e-3) {
            throw InvariantViolation("|alpha|^2 + |beta|^2 = " + fmt17(n2) +
                                     ", expected 1 within 1e-3");
        }
        const double n = std::sqrt(n2);
        am /= n;
        bm /= n;
    } else if (a_set) {
        if (am > 1.0) {
            throw InvariantViolation("|alpha| = " + fmt17(am) + " exceeds 1");
        }
        bm = std::sqrt(std::max(0.0, 1.0 - am * am));
    } else {
        if (bm > 1.0) {
            throw InvariantViolation("|beta| = " + fmt17(bm) + " exceeds 1");
        }
        am = std::sqrt(std::max(0.0, 1.0 - bm * bm));
    }
    return MachineCoeffs(std::polar(am, o.arg_alpha), std::polar(bm, o.arg_beta));
}

double wrap_phi(double phi) {
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) {
        w += two_pi;
    }
    if (w >= two_pi) {
        w = 0.0;
    }
    return w;
}

Convention resolve_convention(const CommonOpts& o) {
    return o.convention == "appendix" ? Convention::Appendix : Convention::Main;
}

QubitState resolve_state(const CommonOpts& o) {
    const int sources = (o.state_opt->count() > 0 ? 1 : 0) + (o.theta_opt->count() > 0 ? 1 : 0) +
                        (o.amps_opt->count() > 0 ? 1 : 0);
    if (sources > 1) {
        throw InvariantViolation("choose one of --state, --theta/--phi, --amps");
    }
    if (o.amps_opt->count() > 0) {
        return QubitState(ComplexScalar{o.amps[0], o.amps[1]}, ComplexScalar{o.amps[2], o.amps[3]});
    }
    if (o.theta_opt->count() > 0) {
        return bloch_to_state(BlochAngles(o.theta, wrap_phi(o.phi)), resolve_convention(o));
    }
    const double r = 1.0 / std::sqrt(2.0);
    if (o.state_name == "ket0") {
        return QubitState(1.0, 0.0);
    }
    if (o.state_name == "ket1") {
        return QubitState(0.0, 1.0);
    }
    if (o.state_name == "minus") {
        return QubitState(r, -r);
    }
    return QubitState(r, r);
}

ordered_json base_config(const char* command, const CommonOpts& o, double tolerance) {
    ordered_json config;
    config["command"] = command;
    config["format"] = o.format;
    config["tolerance"] = tolerance;
    if (!o.out_path.empty()) {
        config["out"] = o.out_path;
    }
    return config;
}

void write_output(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        throw InvariantViolation("cannot open output path: " + out_path);
    }
    file << payload;
    file.flush();
    if (!file.good()) {
        throw InvariantViolation("failed writing output path: " + out_path);
    }
}

void emit(const ordered_json& record, const Csv& csv, const CommonOpts& o) {
    std::string payload;
    if (o.format == "json") {
        payload = record.dump(2) + "\n";
    } else if (o.format == "csv") {
        payload = csv.str();
    } else {
        flatten_text(record, "", payload);
    }
    write_output(payload, o.out_path);
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

std::vector<std::string> complex_cells(ComplexScalar z) {
    return {fmt17(z.real()), fmt17(z.imag())};
}

void append_cells(std::vector<std::string>& row, const std::vector<std::string>& cells) {
    row.insert(row.end(), cells.begin(), cells.end());
}

struct SuperposeOpts {
    CommonOpts common;
    std::string machine = "k1";
};

int run_superpose(const SuperposeOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    const MachineCoeffs coeffs = resolve_coeffs(o.common);
    const QubitState psi = resolve_state(o.common);
    const MachineKind kind = o.machine == "k2" ? MachineKind::K2 : MachineKind::K1;

    const auto start = std::chrono::steady_clock::now();
    const PureMachine machine = build_pure_machine(kind, coeffs);
    const QubitState perp = orthogonal_complement(psi);
    const SuperposeOutcome outcome = superpose_pure(machine, psi, perp);
    const std::int64_t ms = elapsed_ms(start);

    ordered_json config = base_config("superpose", o.common, tolerance);
    config["machine"] = o.machine;
    config["alpha"] = cplx(coeffs.alpha());
    config["beta"] = cplx(coeffs.beta());
    config["convention"] = o.common.convention;
    config["psi"] = state_json(psi);
    config["psi_perp"] = state_json(perp);

    ordered_json results;
    results["c_norm"] = machine.c_norm();
    results["raw"] = vec_json(outcome.raw);
    results["success_probability"] = outcome.success_prob;
    results["state"] = outcome.state ? state_json(*outcome.state) : ordered_json(nullptr);
    results["eta"] = outcome.eta ? ordered_json(*outcome.eta) : ordered_json(nullptr);
    const bool zero = !outcome.state.has_value();
    results["zero_probability"] = zero;

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = std::move(results);
    record["timing_ms"] = ms;
    record["version"] = version_string;

    Csv csv;
    csv.header = {"machine",     "c_norm",      "success_probability", "raw_0_re",
                  "raw_0_im",    "raw_1_re",    "raw_1_im",            "state_0_re",
                  "state_0_im",  "state_1_re",  "state_1_im",          "eta",
                  "zero_probability"};
    std::vector<std::string> row{o.machine, fmt17(machine.c_norm()), fmt17(outcome.success_prob)};
    append_cells(row, complex_cells(outcome.raw[0]));
    append_cells(row, complex_cells(outcome.raw[1]));
    if (outcome.state) {
        append_cells(row, complex_cells(outcome.state->a0()));
        append_cells(row, complex_cells(outcome.state->a1()));
    } else {
        row.insert(row.end(), 4, "");
    }
    row.push_back(outcome.eta ? fmt17(*outcome.eta) : "");
    row.push_back(zero ? "1" : "0");
    csv.rows.push_back(std::move(row));

    emit(record, csv, o.common);
    return zero ? 2 : 0;
}

struct CircuitOpts {
    CommonOpts common;
    std::string mode = "enumerate";
};

int run_circuit(const CircuitOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    const MachineCoeffs coeffs = resolve_coeffs(o.common);
    const QubitState psi = resolve_state(o.common);
    const bool sampling = o.mode == "sample";
    if (sampling && o.common.seed_opt->count() == 0) {
        throw InvariantViolation("circuit --mode sample requires --seed");
    }

    const auto start = std::chrono::steady_clock::now();
    const CircuitMachine machine = build_circuit(coeffs);
    const auto results = run_circuit_enumerate(machine, psi);
    std::optional<CircuitResult> drawn;
    if (sampling) {
        drawn = sample_circuit(machine, psi, o.common.seed);
    }
    const std::int64_t ms = elapsed_ms(start);

    ordered_json config = base_config("circuit", o.common, tolerance);
    config["mode"] = o.mode;
    config["alpha"] = cplx(coeffs.alpha());
    config["beta"] = cplx(coeffs.beta());
    config["convention"] = o.common.convention;
    config["psi"] = state_json(psi);
    if (sampling) {
        config["seed"] = o.common.seed;
    }

    auto result_json = [](const CircuitResult& res) {
        ordered_json row;
        row["mu"] = res.outcome.mu;
        row["n"] = res.outcome.n;
        row["probability"] = res.probability;
        row["state"] = res.post_state ? state_json(*res.post_state) : ordered_json(nullptr);
        row["eta"] = res.eta ? ordered_json(*res.eta) : ordered_json(nullptr);
        return row;
    };
    auto result_cells = [](const CircuitResult& res) {
        std::vector<std::string> row{std::to_string(res.outcome.mu),
                                     std::to_string(res.outcome.n), fmt17(res.probability)};
        if (res.post_state) {
            append_cells(row, complex_cells(res.post_state->a0()));
            append_cells(row, complex_cells(res.post_state->a1()));
        } else {
            row.insert(row.end(), 4, "");
        }
        row.push_back(res.eta ? fmt17(*res.eta) : "");
        return row;
    };

    ordered_json payload;
    Csv csv;
    csv.header = {"mu",         "n",          "probability", "state_0_re", "state_0_im",
                  "state_1_re", "state_1_im", "eta"};
    if (sampling) {
        payload["mode"] = "sample";
        payload["seed"] = o.common.seed;
        payload["outcome"] = result_json(*drawn);
        csv.rows.push_back(result_cells(*drawn));
    } else {
        payload["mode"] = "enumerate";
        double total = 0.0;
        ordered_json rows = ordered_json::array();
        for (const auto& res : results) {
            rows.push_back(result_json(res));
            csv.rows.push_back(result_cells(res));
            total += res.probability;
        }
        payload["rows"] = std::move(rows);
        payload["probability_sum"] = total;
        payload["probability_sum_ok"] = std::abs(total - 1.0) <= tolerance;
    }

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = std::move(payload);
    record["timing_ms"] = ms;
    record["version"] = version_string;
    emit(record, csv, o.common);
    return 0;
}

struct AverageOpts {
    CommonOpts common;
    std::string machine = "k1";
    std::string method = "quadrature";
    int n_theta = 64;
    int n_phi = 64;
    long long n_samples = 1000000;
    double sx = 0.0;
    double sy = 0.0;
    double sz = 1.0;
};

IntegrationSpec integration_spec(const AverageOpts& o) {
    IntegrationSpec spec;
    spec.method = o.method == "monte-carlo" ? IntegrationMethod::MonteCarlo
                                            : IntegrationMethod::Quadrature;
    spec.n_theta = o.n_theta;
    spec.n_phi = o.n_phi;
    spec.n_samples = o.n_samples;
    spec.seed = o.common.seed;
    return spec;
}

BlochVector machine_axis(const AverageOpts& o) {
    const double n = std::sqrt(o.sx * o.sx + o.sy * o.sy + o.sz * o.sz);
    if (!(n > 1e-12) || !std::isfinite(n)) {
        throw InvariantViolation("machine axis --sx/--sy/--sz must be a nonzero vector");
    }
    return BlochVector(o.sx / n, o.sy / n, o.sz / n);
}

ordered_json report_json(const AverageReport& report, const std::string& method, bool ok) {
    ordered_json j;
    j["machine"] = report.machine_id;
    j["method"] = method;
    j["numeric_average"] = report.numeric_average;
    j["closed_form"] = report.closed_form;
    j["abs_error"] = report.abs_error;
    j["std_error"] = report.std_error;
    j["agreement_ok"] = ok;
    return j;
}

std::vector<std::string> report_cells(const AverageReport& report, const std::string& method,
                                      bool ok) {
    return {report.machine_id,       method,
            fmt17(report.numeric_average), fmt17(report.closed_form),
            fmt17(report.abs_error),  fmt17(report.std_error),
            ok ? "1" : "0"};
}

bool report_ok(const AverageReport& report, const IntegrationSpec& spec) {
    if (spec.method == IntegrationMethod::MonteCarlo) {
        return report.abs_error <= 5.0 * report.std_error;
    }
    return report.abs_error <= 1e-8;
}

void echo_integration(ordered_json& config, const AverageOpts& o) {
    config["method"] = o.method;
    if (o.method == "monte-carlo") {
        config["n_samples"] = o.n_samples;
        config["seed"] = o.common.seed;
    } else {
        config["n_theta"] = o.n_theta;
        config["n_phi"] = o.n_phi;
    }
}

AverageReport run_report(const AverageOpts& o, const std::string& machine,
                         const MachineCoeffs& coeffs, const IntegrationSpec& spec) {
    if (machine == "general") {
        return average_general_orthogonal(machine_axis(o), spec);
    }
    const MachineKind kind = machine == "k2" ? MachineKind::K2 : MachineKind::K1;
    return average_pure_machine(kind, coeffs, spec);
}

int run_average(const AverageOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    const MachineCoeffs coeffs = resolve_coeffs(o.common);
    const IntegrationSpec spec = integration_spec(o);

    const auto start = std::chrono::steady_clock::now();
    const AverageReport report = run_report(o, o.machine, coeffs, spec);
    const std::int64_t ms = elapsed_ms(start);
    const bool ok = report_ok(report, spec);

    ordered_json config = base_config("average", o.common, tolerance);
    config["machine"] = o.machine;
    if (o.machine == "general") {
        const BlochVector s = machine_axis(o);
        config["axis"] = ordered_json::array({s.nx, s.ny, s.nz});
    } else {
        config["alpha"] = cplx(coeffs.alpha());
        config["beta"] = cplx(coeffs.beta());
    }
    echo_integration(config, o);

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = report_json(report, o.method, ok);
    record["timing_ms"] = ms;
    record["version"] = version_string;

    Csv csv;
    csv.header = {"machine",   "method",    "numeric_average", "closed_form",
                  "abs_error", "std_error", "agreement_ok"};
    csv.rows.push_back(report_cells(report, o.method, ok));
    emit(record, csv, o.common);
    return 0;
}

int run_compare(const AverageOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    const MachineCoeffs coeffs = resolve_coeffs(o.common);
    const IntegrationSpec spec = integration_spec(o);

    const auto start = std::chrono::steady_clock::now();
    const AverageReport pure = run_report(o, o.machine, coeffs, spec);
    const AverageReport general = run_report(o, "general", coeffs, spec);
    const std::int64_t ms = elapsed_ms(start);
    const bool pure_ok = report_ok(pure, spec);
    const bool general_ok = report_ok(general, spec);
    const double ratio_closed = pure.closed_form / general.closed_form;
    const double ratio_numeric = pure.numeric_average / general.numeric_average;

    ordered_json config = base_config("compare", o.common, tolerance);
    config["machine"] = o.machine;
    config["alpha"] = cplx(coeffs.alpha());
    config["beta"] = cplx(coeffs.beta());
    const BlochVector s = machine_axis(o);
    config["axis"] = ordered_json::array({s.nx, s.ny, s.nz});
    echo_integration(config, o);

    ordered_json results;
    results["pure"] = report_json(pure, o.method, pure_ok);
    results["general"] = report_json(general, o.method, general_ok);
    results["ratio_closed_form"] = ratio_closed;
    results["ratio_numeric"] = ratio_numeric;

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = std::move(results);
    record["timing_ms"] = ms;
    record["version"] = version_string;

    Csv csv;
    csv.header = {"machine",   "method",    "numeric_average",   "closed_form",
                  "abs_error", "std_error", "agreement_ok",      "ratio_closed_form",
                  "ratio_numeric"};
    auto pure_row = report_cells(pure, o.method, pure_ok);
    pure_row.push_back(fmt17(ratio_closed));
    pure_row.push_back(fmt17(ratio_numeric));
    auto general_row = report_cells(general, o.method, general_ok);
    general_row.push_back(fmt17(ratio_closed));
    general_row.push_back(fmt17(ratio_numeric));
    csv.rows.push_back(std::move(pure_row));
    csv.rows.push_back(std::move(general_row));
    emit(record, csv, o.common);
    return 0;
}

struct SolveOpts {
    CommonOpts common;
    std::string branch = "eta-eq-phi";
};

int run_solve_kraus(const SolveOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    const MachineCoeffs coeffs = resolve_coeffs(o.common);
    const EtaBranch branch =
        o.branch == "eta-eq-minus-phi" ? EtaBranch::EtaEqMinusPhi : EtaBranch::EtaEqPhi;

    const auto start = std::chrono::steady_clock::now();
    const SolverResult solved = solve_kraus(coeffs, branch);
    const MachineKind kind = branch == EtaBranch::EtaEqPhi ? MachineKind::K1 : MachineKind::K2;
    const PureMachine built = build_pure_machine(kind, coeffs);

    // Deviation from the closed-form operator after aligning the one free
    // unimodular scale on the first sizable entry.
    ComplexScalar scale{1.0, 0.0};
    bool scale_set = false;
    double prop_dev = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const ComplexScalar ref = built.kraus().at(r, c);
            if (!scale_set && std::abs(ref) > 1e-14) {
                scale = solved.kraus.at(r, c) / ref;
                scale_set = true;
            }
        }
    }
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            prop_dev = std::max(
                prop_dev, std::abs(solved.kraus.at(r, c) - scale * built.kraus().at(r, c)));
        }
    }
    const std::int64_t ms = elapsed_ms(start);

    ordered_json config = base_config("solve-kraus", o.common, tolerance);
    config["branch"] = o.branch;
    config["alpha"] = cplx(coeffs.alpha());
    config["beta"] = cplx(coeffs.beta());

    ordered_json matrix = ordered_json::array();
    for (std::size_t r = 0; r < 2; ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < 4; ++c) {
            row.push_back(cplx(solved.kraus.at(r, c)));
        }
        matrix.push_back(std::move(row));
    }

    ordered_json results;
    results["branch"] = o.branch;
    results["matrix"] = std::move(matrix);
    results["c_max"] = solved.c_max;
    results["residual"] = solved.residual;
    results["residual_ok"] = solved.residual <= 1e-10;
    results["reference"] = to_string(kind);
    results["proportionality_dev"] = prop_dev;
    results["proportional"] = prop_dev <= 1e-10;

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = std::move(results);
    record["timing_ms"] = ms;
    record["version"] = version_string;

    Csv csv;
    csv.header = {"branch", "reference", "c_max", "residual", "residual_ok",
                  "proportionality_dev", "proportional"};
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            csv.header.push_back("k_" + std::to_string(r) + "_" + std::to_string(c) + "_re");
            csv.header.push_back("k_" + std::to_string(r) + "_" + std::to_string(c) + "_im");
        }
    }
    std::vector<std::string> row{o.branch,
                                 to_string(kind),
                                 fmt17(solved.c_max),
                                 fmt17(solved.residual),
                                 solved.residual <= 1e-10 ? "1" : "0",
                                 fmt17(prop_dev),
                                 prop_dev <= 1e-10 ? "1" : "0"};
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            append_cells(row, complex_cells(solved.kraus.at(r, c)));
        }
    }
    csv.rows.push_back(std::move(row));
    emit(record, csv, o.common);
    return 0;
}

struct CloneOpts {
    CommonOpts common;
    double overlap = 0.0;
    long long n_copies = 1;
    double machine_overlap = 0.0;
};

int run_clone_delete(const CloneOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    const MachineCoeffs coeffs = resolve_coeffs(o.common);
    if (!(o.overlap >= -1.0 && o.overlap <= 1.0)) {
        throw InvariantViolation("--overlap must lie in [-1, 1]");
    }
    const QubitState phi(1.0, 0.0);
    const QubitState psi(o.overlap, std::sqrt(std::max(0.0, 1.0 - o.overlap * o.overlap)));

    const auto start = std::chrono::steady_clock::now();
    const CloneDeleteReport report =
        clone_delete_demo(phi, psi, coeffs, o.n_copies, o.machine_overlap);
    const std::int64_t ms = elapsed_ms(start);

    ordered_json config = base_config("clone-delete", o.common, tolerance);
    config["alpha"] = cplx(coeffs.alpha());
    config["beta"] = cplx(coeffs.beta());
    config["overlap"] = o.overlap;
    config["n"] = o.n_copies;
    config["machine_overlap"] = o.machine_overlap;
    config["phi"] = state_json(phi);
    config["psi"] = state_json(psi);

    ordered_json rho = ordered_json::array();
    for (std::size_t r = 0; r < 2; ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < 2; ++c) {
            row.push_back(cplx(report.mixed_output.at(r, c)));
        }
        rho.push_back(std::move(row));
    }

    ordered_json results;
    results["n_copies"] = report.n_copies;
    results["overlap_decay"] = report.overlap_decay;
    results["mixed_output"] = std::move(rho);
    results["target"] = state_json(report.target);
    results["fidelity"] = report.fidelity;

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = std::move(results);
    record["timing_ms"] = ms;
    record["version"] = version_string;

    Csv csv;
    csv.header = {"n_copies",    "overlap",     "machine_overlap", "overlap_decay",
                  "fidelity",    "target_0_re", "target_0_im",     "target_1_re",
                  "target_1_im", "rho_0_0_re",  "rho_0_0_im",      "rho_0_1_re",
                  "rho_0_1_im",  "rho_1_0_re",  "rho_1_0_im",      "rho_1_1_re",
                  "rho_1_1_im"};
    std::vector<std::string> row{std::to_string(report.n_copies), fmt17(o.overlap),
                                 fmt17(o.machine_overlap), fmt17(report.overlap_decay),
                                 fmt17(report.fidelity)};
    append_cells(row, complex_cells(report.target.a0()));
    append_cells(row, complex_cells(report.target.a1()));
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            append_cells(row, complex_cells(report.mixed_output.at(r, c)));
        }
    }
    csv.rows.push_back(std::move(row));
    emit(record, csv, o.common);
    return 0;
}

struct SweepOpts {
    CommonOpts common;
    std::string var;
    int n_points = 0;
};

int run_sweep(const SweepOpts& o) {
    const double tolerance = resolve_tolerance(o.common);
    if (o.common.out_path.empty()) {
        throw InvariantViolation("sweep requires --out");
    }
    if (o.n_points < 1) {
        throw InvariantViolation("sweep requires --n >= 1");
    }
    const MachineCoeffs base_coeffs = resolve_coeffs(o.common);
    const double base_theta = o.common.theta_opt->count() > 0 ? o.common.theta : pi / 2.0;
    const double base_phi = wrap_phi(o.common.phi);
    const Convention convention = resolve_convention(o.common);
    const int n = o.n_points;

    const auto start = std::chrono::steady_clock::now();
    Csv csv;
    csv.header = {"index",     "theta",     "phi",          "alpha_modulus", "beta_modulus",
                  "p_k1",      "p_k2",      "p_pure_total", "p_plus_0",      "p_plus_1",
                  "p_minus_0", "p_minus_1", "p_circuit_total"};
    for (int i = 0; i < n; ++i) {
        double theta = base_theta;
        double phi = base_phi;
        MachineCoeffs coeffs = base_coeffs;
        if (o.var == "theta") {
            theta = n == 1 ? base_theta : pi * i / (n - 1.0);
        } else if (o.var == "phi") {
            phi = n == 1 ? base_phi : two_pi * i / n;
        } else {
            const double am = n == 1 ? std::abs(base_coeffs.alpha()) : i / (n - 1.0);
            coeffs = MachineCoeffs(std::polar(am, o.common.arg_alpha),
                                   std::polar(std::sqrt(std::max(0.0, 1.0 - am * am)),
                                              o.common.arg_beta));
        }
        const QubitState psi = bloch_to_state(BlochAngles(theta, phi), convention);
        const QubitState perp = orthogonal_complement(psi);
        const PureMachine k1 = build_pure_machine(MachineKind::K1, coeffs);
        const PureMachine k2 = build_pure_machine(MachineKind::K2, coeffs);
        const double p1 = pure_success_probability(k1, perp);
        const double p2 = pure_success_probability(k2, perp);
        const auto branches = run_circuit_enumerate(build_circuit(coeffs), psi);
        double total = 0.0;
        for (const auto& res : branches) {
            total += res.probability;
        }
        std::vector<std::string> row{std::to_string(i),
                                     fmt17(theta),
                                     fmt17(phi),
                                     fmt17(std::abs(coeffs.alpha())),
                                     fmt17(std::abs(coeffs.beta())),
                                     fmt17(p1),
                                     fmt17(p2),
                                     fmt17(p1 + p2),
                                     fmt17(branches[0].probability),
                                     fmt17(branches[1].probability),
                                     fmt17(branches[2].probability),
                                     fmt17(branches[3].probability),
                                     fmt17(total)};
        csv.rows.push_back(std::move(row));
    }
    const std::int64_t ms = elapsed_ms(start);
    write_output(csv.str(), o.common.out_path);

    ordered_json config = base_config("sweep", o.common, tolerance);
    config["var"] = o.var;
    config["n"] = n;
    config["alpha"] = cplx(base_coeffs.alpha());
    config["beta"] = cplx(base_coeffs.beta());
    config["theta"] = base_theta;
    config["phi"] = base_phi;
    config["convention"] = o.common.convention;

    ordered_json results;
    results["rows_written"] = n;
    results["out_path"] = o.common.out_path;

    ordered_json record;
    record["config"] = std::move(config);
    record["results"] = std::move(results);
    record["timing_ms"] = ms;
    record["version"] = version_string;
    // The CSV went to --out; the run record always lands on stdout.
    std::cout << record.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical playground for qubit superposition machines"};
    app.require_subcommand(1);

    SuperposeOpts sup_opts;
    CLI::App* sup = app.add_subcommand("superpose", "run one pure machine on psi and its complement");
    add_coeff_flags(sup, sup_opts.common);
    add_state_flags(sup, sup_opts.common);
    add_io_flags(sup, sup_opts.common);
    sup->add_option("--machine", sup_opts.machine, "which pure machine")
        ->check(CLI::IsMember({"k1", "k2"}));

    CircuitOpts cir_opts;
    CLI::App* cir = app.add_subcommand("circuit", "run the unit-probability circuit machine");
    add_coeff_flags(cir, cir_opts.common);
    add_state_flags(cir, cir_opts.common);
    add_io_flags(cir, cir_opts.common);
    cir->add_option("--mode", cir_opts.mode, "enumerate all outcomes or sample one")
        ->check(CLI::IsMember({"enumerate", "sample"}));
    cir_opts.common.seed_opt = cir->add_option("--seed", cir_opts.common.seed, "sampling seed");

    AverageOpts avg_opts;
    CLI::App* avg = app.add_subcommand("average", "average success probability over the sphere");
    add_coeff_flags(avg, avg_opts.common);
    add_io_flags(avg, avg_opts.common);
    avg->add_option("--machine", avg_opts.machine, "which machine to average")
        ->check(CLI::IsMember({"k1", "k2", "general"}));
    avg->add_option("--method", avg_opts.method, "integration method")
        ->check(CLI::IsMember({"quadrature", "monte-carlo"}));
    avg->add_option("--n-theta", avg_opts.n_theta, "quadrature nodes in cos(theta)");
    avg->add_option("--n-phi", avg_opts.n_phi, "quadrature nodes in phi");
    avg->add_option("--n-samples", avg_opts.n_samples, "Monte Carlo sample count");
    avg_opts.common.seed_opt = avg->add_option("--seed", avg_opts.common.seed, "Monte Carlo seed");
    avg->add_option("--sx", avg_opts.sx, "general-machine axis x");
    avg->add_option("--sy", avg_opts.sy, "general-machine axis y");
    avg->add_option("--sz", avg_opts.sz, "general-machine axis z");

    AverageOpts cmp_opts;
    CLI::App* cmp = app.add_subcommand("compare", "pure machine versus the general-purpose one");
    add_coeff_flags(cmp, cmp_opts.common);
    add_io_flags(cmp, cmp_opts.common);
    cmp->add_option("--machine", cmp_opts.machine, "pure machine on the left-hand side")
        ->check(CLI::IsMember({"k1", "k2"}));
    cmp->add_option("--method", cmp_opts.method, "integration method")
        ->check(CLI::IsMember({"quadrature", "monte-carlo"}));
    cmp->add_option("--n-theta", cmp_opts.n_theta, "quadrature nodes in cos(theta)");
    cmp->add_option("--n-phi", cmp_opts.n_phi, "quadrature nodes in phi");
    cmp->add_option("--n-samples", cmp_opts.n_samples, "Monte Carlo sample count");
    cmp_opts.common.seed_opt = cmp->add_option("--seed", cmp_opts.common.seed, "Monte Carlo seed");
    cmp->add_option("--sx", cmp_opts.sx, "general-machine axis x");
    cmp->add_option("--sy", cmp_opts.sy, "general-machine axis y");
    cmp->add_option("--sz", cmp_opts.sz, "general-machine axis z");

    SolveOpts slv_opts;
    CLI::App* slv = app.add_subcommand("solve-kraus", "closed-form single-Kraus-operator solver");
    add_coeff_flags(slv, slv_opts.common);
    add_io_flags(slv, slv_opts.common);
    slv->add_option("--branch", slv_opts.branch, "phase branch of the ansatz")
        ->check(CLI::IsMember({"eta-eq-phi", "eta-eq-minus-phi"}));

    CloneOpts cln_opts;
    CLI::App* cln = app.add_subcommand("clone-delete", "clone, superpose, delete pipeline");
    add_coeff_flags(cln, cln_opts.common);
    add_io_flags(cln, cln_opts.common);
    cln->add_option("--overlap", cln_opts.overlap, "<phi|psi> of the pair to superpose")
        ->required();
    cln->add_option("--n", cln_opts.n_copies, "number of clones");
    cln->add_option("--machine-overlap", cln_opts.machine_overlap,
                    "overlap of the deleting machine's flag states");

    SweepOpts swp_opts;
    CLI::App* swp = app.add_subcommand("sweep", "tabulate probabilities along one parameter");
    add_coeff_flags(swp, swp_opts.common);
    add_state_flags(swp, swp_opts.common);
    add_io_flags(swp, swp_opts.common);
    swp->add_option("--var", swp_opts.var, "grid variable")
        ->check(CLI::IsMember({"theta", "phi", "alpha"}))
        ->required();
    swp->add_option("--n", swp_opts.n_points, "number of grid points")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(sup)) {
            return run_superpose(sup_opts);
        }
        if (app.got_subcommand(cir)) {
            return run_circuit(cir_opts);
        }
        if (app.got_subcommand(avg)) {
            return run_average(avg_opts);
        }
        if (app.got_subcommand(cmp)) {
            return run_compare(cmp_opts);
        }
        if (app.got_subcommand(slv)) {
            return run_solve_kraus(slv_opts);
        }
        if (app.got_subcommand(cln)) {
            return run_clone_delete(cln_opts);
        }
        if (app.got_subcommand(swp)) {
            return run_sweep(swp_opts);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
