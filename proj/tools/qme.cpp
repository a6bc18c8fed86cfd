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

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qme/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qme: master equations for systems driven by entangled qubit streams"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", preset_name;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "execute a scenario config (JSON)");
  run->add_option("config", config_path, "path to the config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "concurrent sweep workers")->check(CLI::PositiveNumber);

  auto* preset = app.add_subcommand("preset", "run a named experiment preset");
  preset->add_option("name", preset_name, "fig2 | fig3 | fig4 | table1 | xstate")->required();
  preset->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    qme::RunOutputs outputs;
    if (run->parsed()) {
      outputs = qme::run_scenario(qme::load_config(config_path), out_dir, jobs);
    } else {
      outputs = qme::run_preset(preset_name, out_dir);
    }
    for (const auto& f : outputs.files) std::printf("wrote %s\n", f.c_str());
    return 0;
  } catch (const qme::SchemaError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const qme::PhysicsError& e) {
    std::fprintf(stderr, "physics violation: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
