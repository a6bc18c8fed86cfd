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

#pragma once

#include <map>
#include <string>

#include "qme/dynamics.hpp"
#include "qme/gaussian.hpp"
#include "qme/measures.hpp"

namespace qme {

inline constexpr const char* kVersion = "0.1.0";

// Config or input validation failure; maps to CLI exit code 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error("config error at " + (path.empty() ? "/" : path) + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Descriptor for a bath preparation; materialized per run (sweeps rebuild it).
struct BathSpec {
  std::string preset;  // ground | phi_plus | phi_minus | psi_plus | psi_minus |
                       // near_bell_phi | near_bell_psi | ghz | w | tms | gg_ee | product
  int n = 2;
  double phi = 0.0;
  double epsilon = 0.0;
  double r = 0.0;
  double theta = 0.0;
  Complex b_gg{0.0, 0.0}, b_ee{0.0, 0.0};
  std::vector<std::pair<Complex, Complex>> product_qubits;  // (alpha, beta) per qubit
  std::optional<Vector> pure_coeffs;                        // explicit ket
  std::optional<Matrix> rho;                                // explicit density matrix

  BathState build() const;
};

// Descriptor for the initial joint state of the subsystems.
struct InitialSpec {
  std::string preset;  // phi_plus | phi_minus | psi_plus | psi_minus | theta |
                       // psi_theta | vacuum | ground | excited | product
  double theta = 0.0;
  std::vector<Vector> kets;  // product of local kets

  DensityMatrix build(const Subsystems& subsystems) const;
};

struct IntegratorSpec {
  double dt = 0.0;
  double t_end = 0.0;
  int stride = 1;
};

struct OutputSpec {
  std::string path = "output.csv";
  std::vector<std::string> observables;
  std::optional<InitialSpec> fidelity_target;
};

struct SweepSpec {
  std::string parameter;  // theta | b_ee | epsilon | r
  std::vector<double> grid;
};

struct ScenarioConfig {
  BathSpec bath;
  Subsystems subsystems;
  std::vector<double> rates;
  double interaction_dt = 0.0;  // 0 -> derived as 0.01 / max rate
  InitialSpec initial_state;
  std::optional<IntegratorSpec> integrator;
  OutputSpec outputs;
  std::optional<SweepSpec> sweep;
  std::string canonical_json;  // for the run manifest hash
};

// Parse and validate a config document.  Throws SchemaError with a JSON
// pointer style path on any violation.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

struct RunOutputs {
  std::vector<std::string> files;  // paths written, CSV first
};

// Execute a config: time-series CSV without a sweep, steady-state table with
// one.  Sweep points run concurrently up to `jobs`; rows are emitted in grid
// order.  Writes a run_manifest.json next to the CSV.
RunOutputs run_scenario(const ScenarioConfig& config, const std::string& out_dir, int jobs = 1);

// --- named experiments ---

struct Fig2Curve {
  double r = 0.0;
  double b_gg_abs = 0.0;
  double time_to_098 = -1.0;                    // negative if never crossed
  std::vector<std::pair<double, double>> curve;  // (time, fidelity), downsampled
};
std::vector<Fig2Curve> experiment_fig2(const std::vector<double>& r_grid = {0.5, 1.0, 2.0, 3.0,
                                                                            4.0});

struct Fig3Row {
  double theta = 0.0;
  double ln_initial = 0.0;
  double ln_ss = 0.0;
  double purity_ss = 0.0;
  double ln_ss_near_bell = 0.0;  // unique steady state of the epsilon bath
};
std::vector<Fig3Row> experiment_fig3(int n_points = 181, double epsilon = 1e-3);

struct Fig4Row {
  double b_ee = 0.0;
  double ln_bath = 0.0;
  double ln_ss = 0.0;
  int stationary_dim = 0;
};
std::vector<Fig4Row> experiment_fig4(int n_points = 41, double b_ee_max = 0.69);

struct Table1Row {
  std::string bath_label;
  std::string initial_label;
  double theta = 0.0;
  BathState bath;              // environment preparation for this row
  Vector initial_ket;          // initial joint atomic state
  bool near_bell = false;      // epsilon-deformed bath rows
  DensityMatrix steady;        // from the spectral projection
  Matrix closed_form;          // tabulated steady state
  double max_elem_err = 0.0;   // |steady - closed_form| elementwise
  RealVector pt;               // ascending
  RealVector pt_expected;      // tabulated, ascending
  double ln = 0.0;
  double purity = 0.0;
};
std::vector<Table1Row> experiment_table1(double epsilon = 1e-3);

struct XStateRow {
  int n = 0;
  std::string label;
  double liouvillian_diff = 0.0;  // max |L(bath) - L(diagonal part)|
};
// Rows for bath size n: the n=2 Bell control, the GHZ state at n=3, and a
// deterministic pseudo-random X-state for n >= 3.
std::vector<XStateRow> experiment_xstate(int n);

// Preset driver used by the CLI: fig2 | fig3 | fig4 | table1 | xstate.
RunOutputs run_preset(const std::string& name, const std::string& out_dir);

// 17-significant-digit decimal formatting (round-trip exact for doubles).
std::string format_double(double v);

// FNV-1a 64-bit hash, hex encoded; used for config fingerprints.
std::string fnv1a_hex(const std::string& data);

}  // namespace qme
