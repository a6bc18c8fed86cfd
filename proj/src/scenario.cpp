// Copyright 2026 The qme Authors
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

#include "qme/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace qme {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& data) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- descriptors ---

BathState BathSpec::build() const {
  if (pure_coeffs) return BathState::from_pure(*pure_coeffs);
  if (rho) {
    const int nn = static_cast<int>(std::llround(std::log2(static_cast<double>(rho->rows()))));
    return BathState::from_density(DensityMatrix(Dims(nn, 2), *rho));
  }
  if (preset == "ground") return BathState::ground(n);
  if (preset == "phi_plus") return BathState::bell_phi(0.0);
  if (preset == "phi_minus") return BathState::bell_phi(M_PI);
  if (preset == "psi_plus") return BathState::bell_psi(0.0);
  if (preset == "psi_minus") return BathState::bell_psi(M_PI);
  if (preset == "near_bell_phi") return BathState::near_bell_phi(phi, epsilon);
  if (preset == "near_bell_psi") return BathState::near_bell_psi(phi, epsilon);
  if (preset == "ghz") return BathState::ghz(n);
  if (preset == "w") return BathState::w_state(n);
  if (preset == "tms") return bath_from_squeezing(r, theta);
  if (preset == "gg_ee") return BathState::gg_ee_superposition(b_gg, b_ee);
  if (preset == "product") return BathState::product(product_qubits);
  throw SchemaError("/bath/preset", "unknown bath preset '" + preset + "'");
}

DensityMatrix InitialSpec::build(const Subsystems& subsystems) const {
  const Dims dims = dims_of(subsystems);
  auto two_qubits = [&]() {
    if (dims != Dims{2, 2})
      throw SchemaError("/initial_state", "preset '" + preset + "' needs two qubit subsystems");
  };
  if (preset == "phi_plus") { two_qubits(); return DensityMatrix::from_pure(dims, bell_phi_plus()); }
  if (preset == "phi_minus") { two_qubits(); return DensityMatrix::from_pure(dims, bell_phi_minus()); }
  if (preset == "psi_plus") { two_qubits(); return DensityMatrix::from_pure(dims, bell_psi_plus()); }
  if (preset == "psi_minus") { two_qubits(); return DensityMatrix::from_pure(dims, bell_psi_minus()); }
  if (preset == "theta") { two_qubits(); return DensityMatrix::from_pure(dims, theta_state(theta)); }
  if (preset == "psi_theta") { two_qubits(); return DensityMatrix::from_pure(dims, psi_theta_state(theta)); }
  if (preset == "vacuum" || preset == "ground") {
    std::vector<Index> idx;
    for (const auto& s : subsystems) idx.push_back(s.kind == SubsystemSpec::Kind::Qubit ? 1 : 0);
    return DensityMatrix::from_pure(dims, basis_ket(dims, idx));
  }
  if (preset == "excited") {
    for (const auto& s : subsystems)
      if (s.kind != SubsystemSpec::Kind::Qubit)
        throw SchemaError("/initial_state", "'excited' needs qubit subsystems");
    return DensityMatrix::from_pure(dims, basis_ket(dims, std::vector<Index>(dims.size(), 0)));
  }
  if (preset == "product") {
    if (kets.size() != subsystems.size())
      throw SchemaError("/initial_state/kets", "one local ket per subsystem required");
    Vector v = Vector::Ones(1);
    for (size_t i = 0; i < kets.size(); ++i) {
      if (kets[i].size() != dims[i])
        throw SchemaError("/initial_state/kets", "local ket dimension mismatch");
      v = kron_vec(v, kets[i]);
    }
    const double nn = v.norm();
    if (std::abs(nn - 1.0) > 1e-10)
      throw SchemaError("/initial_state/kets", "local kets must be normalized");
    return DensityMatrix::from_pure(dims, v);
  }
  throw SchemaError("/initial_state/preset", "unknown initial-state preset '" + preset + "'");
}

// --- config parsing ---

namespace {

const json& require_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw SchemaError(path + "/" + key, "missing required field");
  return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number()) throw SchemaError(path + "/" + key, "expected a number");
  return v.get<double>();
}

Complex parse_complex(const json& v, const std::string& path) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError(path, "expected a complex number as [re, im]");
  return Complex(v[0].get<double>(), v[1].get<double>());
}

BathSpec parse_bath(const json& j) {
  BathSpec spec;
  if (j.contains("pure_coeffs")) {
    const json& arr = j.at("pure_coeffs");
    if (!arr.is_array() || arr.empty()) throw SchemaError("/bath/pure_coeffs", "expected a nonempty array");
    Vector v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i)
      v(static_cast<Index>(i)) = parse_complex(arr[i], "/bath/pure_coeffs");
    spec.pure_coeffs = v;
    return spec;
  }
  if (j.contains("rho")) {
    const json& arr = j.at("rho");
    if (!arr.is_array() || arr.empty()) throw SchemaError("/bath/rho", "expected a matrix");
    const size_t d = arr.size();
    Matrix m(d, d);
    for (size_t i = 0; i < d; ++i) {
      if (!arr[i].is_array() || arr[i].size() != d) throw SchemaError("/bath/rho", "matrix must be square");
      for (size_t k = 0; k < d; ++k)
        m(static_cast<Index>(i), static_cast<Index>(k)) = parse_complex(arr[i][k], "/bath/rho");
    }
    spec.rho = m;
    return spec;
  }
  spec.preset = require_field(j, "preset", "/bath").get<std::string>();
  if (j.contains("n")) spec.n = j.at("n").get<int>();
  if (j.contains("phi")) spec.phi = require_number(j, "phi", "/bath");
  if (j.contains("epsilon")) spec.epsilon = require_number(j, "epsilon", "/bath");
  if (j.contains("r")) spec.r = require_number(j, "r", "/bath");
  if (j.contains("theta")) spec.theta = require_number(j, "theta", "/bath");
  if (j.contains("b_gg")) spec.b_gg = parse_complex(j.at("b_gg"), "/bath/b_gg");
  if (j.contains("b_ee")) spec.b_ee = parse_complex(j.at("b_ee"), "/bath/b_ee");
  if (j.contains("qubits")) {
    for (const auto& q : j.at("qubits"))
      spec.product_qubits.emplace_back(parse_complex(require_field(q, "alpha", "/bath/qubits"), "/bath/qubits"),
                                       parse_complex(require_field(q, "beta", "/bath/qubits"), "/bath/qubits"));
  }
  return spec;
}

InitialSpec parse_initial(const json& j, const std::string& path) {
  InitialSpec spec;
  if (j.contains("kets")) {
    spec.preset = "product";
    for (const auto& kj : j.at("kets")) {
      if (!kj.is_array() || kj.empty()) throw SchemaError(path + "/kets", "expected arrays of complex");
      Vector v(kj.size());
      for (size_t i = 0; i < kj.size(); ++i) v(static_cast<Index>(i)) = parse_complex(kj[i], path + "/kets");
      spec.kets.push_back(std::move(v));
    }
    return spec;
  }
  spec.preset = require_field(j, "preset", path).get<std::string>();
  if (j.contains("theta")) {
    spec.theta = require_number(j, "theta", path);
    if (spec.theta < 0.0 || spec.theta > M_PI / 2.0 + 1e-12)
      throw SchemaError(path + "/theta", "theta must lie in [0, pi/2]");
  }
  return spec;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // Recover the line number from the byte offset for the diagnostic.
    size_t line = 1;
    for (size_t i = 0; i < e.byte && i < json_text.size(); ++i)
      if (json_text[i] == '\n') ++line;
    throw SchemaError("/", "JSON parse error at line " + std::to_string(line) + ": " + e.what());
  }

  ScenarioConfig cfg;
  cfg.bath = parse_bath(require_field(j, "bath", ""));

  const json& subs = require_field(j, "subsystems", "");
  if (!subs.is_array() || subs.empty()) throw SchemaError("/subsystems", "expected a nonempty array");
  for (const auto& s : subs) {
    const std::string kind = require_field(s, "kind", "/subsystems").get<std::string>();
    if (kind == "qubit") {
      cfg.subsystems.push_back(SubsystemSpec::qubit());
    } else if (kind == "oscillator") {
      const int d = static_cast<int>(require_number(s, "dim", "/subsystems"));
      if (d < 2 || d > 64) throw SchemaError("/subsystems/dim", "oscillator dimension must be in [2, 64]");
      cfg.subsystems.push_back(SubsystemSpec::oscillator(d));
    } else {
      throw SchemaError("/subsystems/kind", "expected 'qubit' or 'oscillator'");
    }
  }
  if (product_dim(dims_of(cfg.subsystems)) > 32)
    throw SchemaError("/subsystems", "joint dimension above 32 is not supported by the generic runner");

  const json& rates = require_field(j, "rates", "");
  if (!rates.is_array() || rates.size() != cfg.subsystems.size())
    throw SchemaError("/rates", "expected one rate per subsystem");
  for (const auto& r : rates) {
    if (!r.is_number() || r.get<double>() < 0.0) throw SchemaError("/rates", "rates must be >= 0");
    cfg.rates.push_back(r.get<double>());
  }

  if (j.contains("interaction_dt")) {
    cfg.interaction_dt = require_number(j, "interaction_dt", "");
    if (!(cfg.interaction_dt > 0.0)) throw SchemaError("/interaction_dt", "must be positive");
  }

  cfg.initial_state = parse_initial(require_field(j, "initial_state", ""), "/initial_state");

  if (j.contains("integrator")) {
    const json& integ = j.at("integrator");
    IntegratorSpec is;
    is.dt = require_number(integ, "dt", "/integrator");
    is.t_end = require_number(integ, "t_end", "/integrator");
    if (integ.contains("stride")) is.stride = integ.at("stride").get<int>();
    if (!(is.dt > 0.0)) throw SchemaError("/integrator/dt", "must be positive");
    if (!(is.t_end >= 0.0)) throw SchemaError("/integrator/t_end", "must be >= 0");
    if (is.stride < 1) throw SchemaError("/integrator/stride", "must be >= 1");
    cfg.integrator = is;
  }

  const json& out = require_field(j, "outputs", "");
  cfg.outputs.path = out.contains("path") ? out.at("path").get<std::string>() : "output.csv";
  if (out.contains("observables")) {
    for (const auto& o : out.at("observables")) cfg.outputs.observables.push_back(o.get<std::string>());
  } else {
    cfg.outputs.observables = {"populations"};
  }
  if (out.contains("fidelity_target"))
    cfg.outputs.fidelity_target = parse_initial(out.at("fidelity_target"), "/outputs/fidelity_target");

  if (j.contains("sweep")) {
    SweepSpec sw;
    sw.parameter = require_field(j.at("sweep"), "parameter", "/sweep").get<std::string>();
    for (const auto& g : require_field(j.at("sweep"), "grid", "/sweep")) {
      if (!g.is_number()) throw SchemaError("/sweep/grid", "expected numbers");
      sw.grid.push_back(g.get<double>());
    }
    if (sw.grid.empty()) throw SchemaError("/sweep/grid", "grid is empty");
    static const std::vector<std::string> allowed = {"theta", "b_ee", "epsilon", "r"};
    if (std::find(allowed.begin(), allowed.end(), sw.parameter) == allowed.end())
      throw SchemaError("/sweep/parameter", "unknown sweep parameter '" + sw.parameter + "'");
    for (double g : sw.grid) {
      if (sw.parameter == "theta" && (g < 0.0 || g > M_PI / 2.0 + 1e-12))
        throw SchemaError("/sweep/grid", "theta values must lie in [0, pi/2]");
      if (sw.parameter == "b_ee" && std::abs(g) >= 1.0)
        throw SchemaError("/sweep/grid", "b_ee values must lie in (-1, 1)");
      if ((sw.parameter == "epsilon" || sw.parameter == "r") && g < 0.0)
        throw SchemaError("/sweep/grid", "values must be >= 0");
    }
    cfg.sweep = sw;
  }

  // Validate observables against the run mode.
  const bool is_sweep = cfg.sweep.has_value();
  const Dims dims = dims_of(cfg.subsystems);
  static const std::vector<std::string> traj_obs = {"populations", "log_negativity", "purity", "fidelity"};
  static const std::vector<std::string> sweep_obs = {"log_negativity", "purity", "fidelity",
                                                     "log_negativity_initial", "log_negativity_bath",
                                                     "pt_spectrum", "stationary_dim"};
  const auto& allowed_obs = is_sweep ? sweep_obs : traj_obs;
  for (const auto& o : cfg.outputs.observables) {
    if (std::find(allowed_obs.begin(), allowed_obs.end(), o) == allowed_obs.end())
      throw SchemaError("/outputs/observables", "unknown observable '" + o + "' for this run mode");
    if ((o == "log_negativity" || o == "log_negativity_initial" || o == "pt_spectrum") &&
        dims != Dims{2, 2})
      throw SchemaError("/outputs/observables", "'" + o + "' needs two qubit subsystems");
    if (o == "fidelity" && !cfg.outputs.fidelity_target)
      throw SchemaError("/outputs/observables", "'fidelity' needs outputs/fidelity_target");
  }
  if (!is_sweep && !cfg.integrator)
    throw SchemaError("/integrator", "required for trajectory runs (no sweep block)");

  // Materialize once now so bad states surface as schema errors.
  try {
    const BathState bath = cfg.bath.build();
    if (bath.n != static_cast<int>(cfg.subsystems.size()))
      throw SchemaError("/bath", "bath qubit count must match the subsystem count");
    cfg.initial_state.build(cfg.subsystems);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError("/bath", e.what());
  }

  cfg.canonical_json = j.dump();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("/", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// --- scenario execution ---

namespace {

double max_rate(const std::vector<double>& rates) {
  double m = 0.0;
  for (double r : rates) m = std::max(m, r);
  return m;
}

CouplingSpec coupling_for(const ScenarioConfig& cfg) {
  const double idt =
      cfg.interaction_dt > 0.0 ? cfg.interaction_dt : 0.01 / std::max(max_rate(cfg.rates), 1e-12);
  return CouplingSpec::from_rates(cfg.rates, idt);
}

Liouvillian liouvillian_for(const BathState& bath, const ScenarioConfig& cfg) {
  const CouplingSpec c = coupling_for(cfg);
  const CoefficientSet coeffs =
      bath.n == 2 ? coefficients_2q(bath, c) : coefficients_nq(bath, c);
  return build_liouvillian_nondiagonal(coeffs, cfg.subsystems);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_manifest(const std::string& out_dir, const std::string& config_hash,
                    const std::vector<std::string>& files, double seconds) {
  json m;
  m["config_hash"] = config_hash;
  m["version"] = kVersion;
  m["runtime_seconds"] = seconds;
  m["outputs"] = files;
  std::ofstream out(std::filesystem::path(out_dir) / "run_manifest.json");
  out << m.dump(2) << "\n";
}

std::vector<double> populations(const DensityMatrix& rho, const Subsystems& subsystems) {
  const Dims dims = dims_of(subsystems);
  std::vector<double> pops;
  for (int l = 0; l < static_cast<int>(subsystems.size()); ++l) {
    const Matrix c = embed(subsystems[l].lowering(), l, dims);
    pops.push_back(((c.adjoint() * c) * rho.mat()).trace().real());
  }
  return pops;
}

}  // namespace

RunOutputs run_scenario(const ScenarioConfig& cfg, const std::string& out_dir, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  const std::string csv_path = (std::filesystem::path(out_dir) / cfg.outputs.path).string();

  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  if (!cfg.sweep) {
    const BathState bath = cfg.bath.build();
    const Liouvillian liouv = liouvillian_for(bath, cfg);
    const DensityMatrix rho0 = cfg.initial_state.build(cfg.subsystems);
    const CouplingSpec c = coupling_for(cfg);
    if (!c.weak_coupling())
      std::fprintf(stderr, "warning: lambda*dt exceeds 0.1; weak-coupling assumption is strained\n");
    std::optional<DensityMatrix> target;
    if (cfg.outputs.fidelity_target) target = cfg.outputs.fidelity_target->build(cfg.subsystems);

    const Trajectory traj =
        evolve_me(liouv, rho0, cfg.integrator->dt, cfg.integrator->t_end, cfg.integrator->stride);

    header.push_back("time");
    for (const auto& o : cfg.outputs.observables) {
      if (o == "populations")
        for (size_t l = 0; l < cfg.subsystems.size(); ++l)
          header.push_back("pop_" + std::to_string(l + 1));
      else
        header.push_back(o);
    }
    for (size_t i = 0; i < traj.times.size(); ++i) {
      std::vector<std::string> row{format_double(traj.times[i])};
      const DensityMatrix& st = traj.states[i];
      for (const auto& o : cfg.outputs.observables) {
        if (o == "populations") {
          for (double p : populations(st, cfg.subsystems)) row.push_back(format_double(p));
        } else if (o == "log_negativity") {
          row.push_back(format_double(log_negativity(st)));
        } else if (o == "purity") {
          row.push_back(format_double(purity(st)));
        } else if (o == "fidelity") {
          row.push_back(format_double(state_fidelity(st, *target)));
        }
      }
      rows.push_back(std::move(row));
    }
  } else {
    const auto& sweep = *cfg.sweep;
    header.push_back(sweep.parameter);
    for (const auto& o : cfg.outputs.observables) {
      if (o == "pt_spectrum")
        for (int i = 1; i <= 4; ++i) header.push_back("pt_" + std::to_string(i));
      else
        header.push_back(o);
    }

    rows.resize(sweep.grid.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < sweep.grid.size(); i = next.fetch_add(1)) {
        const double val = sweep.grid[i];
        ScenarioConfig point = cfg;
        if (sweep.parameter == "theta") point.initial_state.theta = val;
        else if (sweep.parameter == "b_ee") {
          point.bath.b_ee = val;
          point.bath.b_gg = std::sqrt(1.0 - val * val);
        } else if (sweep.parameter == "epsilon") point.bath.epsilon = val;
        else if (sweep.parameter == "r") point.bath.r = val;

        const BathState bath = point.bath.build();
        const Liouvillian liouv = liouvillian_for(bath, point);
        const DensityMatrix rho0 = point.initial_state.build(point.subsystems);
        const SteadyStateResult ss = steady_states(liouv, rho0);
        if (!ss.selected)
          throw PhysicsError("sweep: no steady state selected at " + sweep.parameter + "=" +
                             format_double(val));
        const DensityMatrix& st = *ss.selected;

        std::vector<std::string> row{format_double(val)};
        for (const auto& o : point.outputs.observables) {
          if (o == "log_negativity") row.push_back(format_double(log_negativity(st)));
          else if (o == "purity") row.push_back(format_double(purity(st)));
          else if (o == "fidelity")
            row.push_back(format_double(
                state_fidelity(st, point.outputs.fidelity_target->build(point.subsystems))));
          else if (o == "log_negativity_initial") row.push_back(format_double(log_negativity(rho0)));
          else if (o == "log_negativity_bath")
            row.push_back(format_double(log_negativity(bath.rho_e)));
          else if (o == "pt_spectrum") {
            const RealVector pt = pt_spectrum(st);
            for (Index k = 0; k < pt.size(); ++k) row.push_back(format_double(pt(k)));
          } else if (o == "stationary_dim") {
            row.push_back(std::to_string(ss.dimension));
          }
        }
        rows[i] = std::move(row);
      }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(sweep.grid.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  write_csv(csv_path, header, rows);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RunOutputs out{{csv_path}};
  write_manifest(out_dir, fnv1a_hex(cfg.canonical_json), out.files, secs);
  return out;
}

// --- named experiments ---

std::vector<Fig2Curve> experiment_fig2(const std::vector<double>& r_grid) {
  std::vector<Fig2Curve> out;
  for (double r : r_grid) {
    const BathState bath = bath_from_squeezing(r, 0.0);
    const double big_gamma = effective_rate(bath, 1.0);

    // Jump operators in a small Fock truncation; the quadrature extraction
    // is exact for operators linear in the modes.
    const Subsystems osc{SubsystemSpec::oscillator(4), SubsystemSpec::oscillator(4)};
    const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
    const auto jumps = jump_ops_2q(bath, osc, c);
    const LinearJumpSet linear = jumps_to_quadrature(jumps, {4, 4});
    const DriftDiffusion dd = drift_diffusion(linear);

    const GaussianState target = tmsv_covariance(r, 0.0);
    const double dt = 0.002 / big_gamma;
    const auto traj = evolve_covariance(dd, GaussianState::vacuum(2), dt, 14.0 / big_gamma, 1);

    Fig2Curve curve;
    curve.r = r;
    curve.b_gg_abs = std::sqrt(bath.entry(3, 3).real());
    double prev_f = 0.0, prev_t = 0.0;
    const size_t stride = std::max<size_t>(1, traj.size() / 200);
    for (size_t i = 0; i < traj.size(); ++i) {
      const double f = gaussian_fidelity(traj[i].second, target);
      if (curve.time_to_098 < 0.0 && f >= 0.98 && i > 0) {
        const double w = (0.98 - prev_f) / (f - prev_f);
        curve.time_to_098 = prev_t + w * (traj[i].first - prev_t);
      }
      if (i % stride == 0 || i + 1 == traj.size()) curve.curve.emplace_back(traj[i].first, f);
      prev_f = f;
      prev_t = traj[i].first;
    }
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<Fig3Row> experiment_fig3(int n_points, double epsilon) {
  const Subsystems subs{SubsystemSpec::qubit(), SubsystemSpec::qubit()};
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  const Liouvillian liouv = build_liouvillian_nondiagonal(coefficients_2q(BathState::bell_phi(0.0), c), subs);
  const Liouvillian liouv_eps = build_liouvillian_nondiagonal(
      coefficients_2q(BathState::near_bell_phi(0.0, epsilon), c), subs);
  const SteadyStateResult near_bell = steady_states(liouv_eps);
  const double ln_near_bell = log_negativity(*near_bell.selected);

  std::vector<Fig3Row> rows;
  for (int i = 0; i < n_points; ++i) {
    const double theta = (M_PI / 2.0) * i / (n_points - 1);
    const DensityMatrix rho0 = DensityMatrix::from_pure({2, 2}, theta_state(theta));
    const SteadyStateResult ss = steady_states(liouv, rho0);
    Fig3Row row;
    row.theta = theta;
    row.ln_initial = log_negativity(rho0);
    row.ln_ss = log_negativity(*ss.selected);
    row.purity_ss = purity(*ss.selected);
    row.ln_ss_near_bell = ln_near_bell;
    rows.push_back(row);
  }
  return rows;
}

std::vector<Fig4Row> experiment_fig4(int n_points, double b_ee_max) {
  const Subsystems subs{SubsystemSpec::qubit(), SubsystemSpec::qubit()};
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  std::vector<Fig4Row> rows;
  for (int i = 0; i < n_points; ++i) {
    const double b_ee = -b_ee_max + 2.0 * b_ee_max * i / (n_points - 1);
    const BathState bath = BathState::gg_ee_superposition(std::sqrt(1.0 - b_ee * b_ee), b_ee);
    const Liouvillian liouv = build_liouvillian_nondiagonal(coefficients_2q(bath, c), subs);
    const SteadyStateResult ss = steady_states(liouv, DensityMatrix::from_pure({2, 2}, ket_gg()));
    Fig4Row row;
    row.b_ee = b_ee;
    row.ln_bath = log_negativity(bath.rho_e);
    row.ln_ss = log_negativity(*ss.selected);
    row.stationary_dim = ss.dimension;
    rows.push_back(row);
  }
  return rows;
}

namespace {

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Matrix werner_like(const Vector& bell) {
  return Matrix::Identity(4, 4) / 6.0 + projector(bell) / 3.0;
}

Matrix mix3(const Vector& bell, const Vector& k1, const Vector& k2) {
  return (projector(bell) + projector(k1) + projector(k2)) / 3.0;
}

RealVector sorted4(std::initializer_list<double> vals) {
  std::vector<double> v(vals);
  std::sort(v.begin(), v.end());
  RealVector out(4);
  for (int i = 0; i < 4; ++i) out(i) = v[static_cast<size_t>(i)];
  return out;
}

}  // namespace

std::vector<Table1Row> experiment_table1(double epsilon) {
  const Subsystems subs{SubsystemSpec::qubit(), SubsystemSpec::qubit()};
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);

  // PT spectra of the tabulated steady states.  The boundary Werner state
  // (1/6)I + (1/3)P has one vanishing eigenvalue; the one-third mixture of a
  // Bell projector with two opposite-parity basis states has (1/2, 1/6^3).
  const RealVector spec_bell = sorted4({-0.5, 0.5, 0.5, 0.5});
  const RealVector spec_werner = sorted4({0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const RealVector spec_mix3 = sorted4({0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0});
  const double mid = std::sqrt(1.0 + epsilon) / (2.0 + epsilon);
  const RealVector spec_eps =
      sorted4({-mid, mid, 1.0 / (2.0 + epsilon), (1.0 + epsilon) / (2.0 + epsilon)});

  struct Case {
    std::string bath_label;
    BathState bath;
    std::string initial_label;
    double theta;
    Vector initial;
    Matrix closed;
    RealVector pt_expected;
  };

  const Vector eps_phi_min = (ket_ee() - std::sqrt(1.0 + epsilon) * ket_gg()) / std::sqrt(2.0 + epsilon);
  const Vector eps_phi_plus = (ket_ee() + std::sqrt(1.0 + epsilon) * ket_gg()) / std::sqrt(2.0 + epsilon);
  const Vector eps_psi_min = (ket_eg() - std::sqrt(1.0 + epsilon) * ket_ge()) / std::sqrt(2.0 + epsilon);
  const Vector eps_psi_plus = (ket_eg() + std::sqrt(1.0 + epsilon) * ket_ge()) / std::sqrt(2.0 + epsilon);

  std::vector<Case> cases;
  // Bath in (|ee> + |gg>)/sqrt2
  cases.push_back({"Phi+", BathState::bell_phi(0.0), "Phi-", 0.0, bell_phi_minus(),
                   projector(bell_phi_minus()), spec_bell});
  cases.push_back({"Phi+", BathState::bell_phi(0.0), "ee", M_PI / 4.0, theta_state(M_PI / 4.0),
                   werner_like(bell_phi_minus()), spec_werner});
  cases.push_back({"Phi+", BathState::bell_phi(0.0), "Phi+", M_PI / 2.0, bell_phi_plus(),
                   mix3(bell_phi_plus(), ket_eg(), ket_ge()), spec_mix3});
  // Bath in (|ee> - |gg>)/sqrt2
  cases.push_back({"Phi-", BathState::bell_phi(M_PI), "Phi-", 0.0, bell_phi_minus(),
                   mix3(bell_phi_minus(), ket_eg(), ket_ge()), spec_mix3});
  cases.push_back({"Phi-", BathState::bell_phi(M_PI), "ee", M_PI / 4.0, theta_state(M_PI / 4.0),
                   werner_like(bell_phi_plus()), spec_werner});
  cases.push_back({"Phi-", BathState::bell_phi(M_PI), "Phi+", M_PI / 2.0, bell_phi_plus(),
                   projector(bell_phi_plus()), spec_bell});
  // Bath in (|eg> + |ge>)/sqrt2
  cases.push_back({"Psi+", BathState::bell_psi(0.0), "Psi-", 0.0, bell_psi_minus(),
                   projector(bell_psi_minus()), spec_bell});
  cases.push_back({"Psi+", BathState::bell_psi(0.0), "eg", M_PI / 4.0, psi_theta_state(M_PI / 4.0),
                   werner_like(bell_psi_minus()), spec_werner});
  cases.push_back({"Psi+", BathState::bell_psi(0.0), "Psi+", M_PI / 2.0, bell_psi_plus(),
                   mix3(bell_psi_plus(), ket_ee(), ket_gg()), spec_mix3});
  // Bath in (|eg> - |ge>)/sqrt2
  cases.push_back({"Psi-", BathState::bell_psi(M_PI), "Psi-", 0.0, bell_psi_minus(),
                   mix3(bell_psi_minus(), ket_ee(), ket_gg()), spec_mix3});
  cases.push_back({"Psi-", BathState::bell_psi(M_PI), "eg", M_PI / 4.0, psi_theta_state(M_PI / 4.0),
                   werner_like(bell_psi_plus()), spec_werner});
  cases.push_back({"Psi-", BathState::bell_psi(M_PI), "Psi+", M_PI / 2.0, bell_psi_plus(),
                   projector(bell_psi_plus()), spec_bell});
  // Near-Bell baths: unique steady states independent of theta
  cases.push_back({"Phi+(eps)", BathState::near_bell_phi(0.0, epsilon), "theta(pi/4)", M_PI / 4.0,
                   theta_state(M_PI / 4.0), projector(eps_phi_min), spec_eps});
  cases.push_back({"Phi-(eps)", BathState::near_bell_phi(M_PI, epsilon), "theta(pi/4)", M_PI / 4.0,
                   theta_state(M_PI / 4.0), projector(eps_phi_plus), spec_eps});
  cases.push_back({"Psi+(eps)", BathState::near_bell_psi(0.0, epsilon), "theta(pi/4)", M_PI / 4.0,
                   psi_theta_state(M_PI / 4.0), projector(eps_psi_min), spec_eps});
  cases.push_back({"Psi-(eps)", BathState::near_bell_psi(M_PI, epsilon), "theta(pi/4)", M_PI / 4.0,
                   psi_theta_state(M_PI / 4.0), projector(eps_psi_plus), spec_eps});

  std::vector<Table1Row> rows;
  for (const auto& cs : cases) {
    const Liouvillian liouv = build_liouvillian_nondiagonal(coefficients_2q(cs.bath, c), subs);
    const DensityMatrix rho0 = DensityMatrix::from_pure({2, 2}, cs.initial);
    const SteadyStateResult ss = steady_states(liouv, rho0);
    Table1Row row{cs.bath_label,
                  cs.initial_label,
                  cs.theta,
                  cs.bath,
                  cs.initial,
                  cs.bath_label.find("eps") != std::string::npos,
                  *ss.selected,
                  cs.closed,
                  (ss.selected->mat() - cs.closed).cwiseAbs().maxCoeff(),
                  pt_spectrum(*ss.selected),
                  cs.pt_expected,
                  log_negativity(*ss.selected),
                  purity(*ss.selected)};
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Deterministic uniform in [0, 1) from the standard-specified mt19937_64.
class DetRand {
 public:
  explicit DetRand(uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

DensityMatrix random_x_state(int n, uint64_t seed) {
  DetRand rng(seed);
  const Index dim = Index(1) << n;
  RealVector diag(dim);
  for (Index i = 0; i < dim; ++i) diag(i) = 0.05 + rng.uniform();
  diag /= diag.sum();
  Matrix rho = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) rho(i, i) = diag(i);
  for (Index i = 0; i < dim / 2; ++i) {
    const Index j = dim - 1 - i;  // bitwise complement partner
    const double mag = 0.9 * std::sqrt(diag(i) * diag(j)) * rng.uniform();
    const double phase = 2.0 * M_PI * rng.uniform();
    rho(i, j) = std::polar(mag, phase);
    rho(j, i) = std::conj(rho(i, j));
  }
  return DensityMatrix(Dims(n, 2), std::move(rho));
}

BathState diagonal_part_bath(const BathState& bath) {
  Matrix d = bath.rho_e.mat().diagonal().asDiagonal();
  return BathState::from_density(DensityMatrix(bath.rho_e.dims(), std::move(d)));
}

double liouvillian_difference(const BathState& a, const BathState& b, int n) {
  const CouplingSpec c = CouplingSpec::from_rates(std::vector<double>(n, 1.0), 0.01);
  const Subsystems subs(static_cast<size_t>(n), SubsystemSpec::qubit());
  const Liouvillian la = build_liouvillian_nondiagonal(
      n == 2 ? coefficients_2q(a, c) : coefficients_nq(a, c), subs);
  const Liouvillian lb = build_liouvillian_nondiagonal(
      n == 2 ? coefficients_2q(b, c) : coefficients_nq(b, c), subs);
  return (la.superop - lb.superop).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<XStateRow> experiment_xstate(int n) {
  if (n < 2 || n > 6) throw std::invalid_argument("experiment_xstate: n must be in [2, 6]");
  std::vector<XStateRow> rows;
  if (n == 2) {
    const BathState bell = BathState::bell_phi(0.0);
    rows.push_back({2, "bell_control", liouvillian_difference(bell, diagonal_part_bath(bell), 2)});
    return rows;
  }
  const BathState ghz = BathState::ghz(n);
  rows.push_back({n, "ghz", liouvillian_difference(ghz, diagonal_part_bath(ghz), n)});
  const BathState x = BathState::from_density(random_x_state(n, 12345 + static_cast<uint64_t>(n)));
  rows.push_back({n, "random_x", liouvillian_difference(x, diagonal_part_bath(x), n)});
  return rows;
}

RunOutputs run_preset(const std::string& name, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  auto path_of = [&](const std::string& f) { return (std::filesystem::path(out_dir) / f).string(); };
  RunOutputs out;

  if (name == "fig2") {
    const auto curves = experiment_fig2();
    std::vector<std::vector<std::string>> rows_a, rows_b;
    for (const auto& cv : curves) {
      for (const auto& [t, f] : cv.curve)
        rows_a.push_back({format_double(cv.r), format_double(t), format_double(f)});
      rows_b.push_back({format_double(cv.r), format_double(cv.b_gg_abs), format_double(cv.time_to_098)});
    }
    write_csv(path_of("fig2a.csv"), {"r", "time", "fidelity"}, rows_a);
    write_csv(path_of("fig2b.csv"), {"r", "b_gg_abs", "time_to_098"}, rows_b);
    out.files = {path_of("fig2a.csv"), path_of("fig2b.csv")};
  } else if (name == "fig3") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : experiment_fig3())
      rows.push_back({format_double(r.theta), format_double(r.ln_initial), format_double(r.ln_ss),
                      format_double(r.purity_ss), format_double(r.ln_ss_near_bell)});
    write_csv(path_of("fig3.csv"), {"theta", "ln_initial", "ln_ss", "purity_ss", "ln_ss_near_bell"},
              rows);
    out.files = {path_of("fig3.csv")};
  } else if (name == "fig4") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : experiment_fig4())
      rows.push_back({format_double(r.b_ee), format_double(r.ln_bath), format_double(r.ln_ss),
                      std::to_string(r.stationary_dim)});
    write_csv(path_of("fig4.csv"), {"b_ee", "ln_bath", "ln_ss", "stationary_dim"}, rows);
    out.files = {path_of("fig4.csv")};
  } else if (name == "table1") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : experiment_table1()) {
      std::vector<std::string> row{r.bath_label, r.initial_label, format_double(r.theta),
                                   format_double(r.max_elem_err)};
      for (int i = 0; i < 4; ++i) row.push_back(format_double(r.pt(i)));
      for (int i = 0; i < 4; ++i) row.push_back(format_double(r.pt_expected(i)));
      row.push_back(format_double(r.ln));
      row.push_back(format_double(r.purity));
      rows.push_back(std::move(row));
    }
    write_csv(path_of("table1.csv"),
              {"bath", "initial", "theta", "max_elem_err", "pt_1", "pt_2", "pt_3", "pt_4",
               "pt_exp_1", "pt_exp_2", "pt_exp_3", "pt_exp_4", "ln", "purity"},
              rows);
    out.files = {path_of("table1.csv")};
  } else if (name == "xstate") {
    std::vector<std::vector<std::string>> rows;
    for (int n : {2, 3, 4, 5})
      for (const auto& r : experiment_xstate(n))
        rows.push_back({std::to_string(r.n), r.label, format_double(r.liouvillian_diff)});
    write_csv(path_of("xstate.csv"), {"n", "bath", "liouvillian_diff"}, rows);
    out.files = {path_of("xstate.csv")};
  } else {
    throw SchemaError("/preset", "unknown preset '" + name + "'");
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out_dir, fnv1a_hex(json{{"preset", name}}.dump()), out.files, secs);
  return out;
}

}  // namespace qme
