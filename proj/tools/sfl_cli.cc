// Copyright 2026 The SFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// sfl: command-line front end.
//
//   sfl run [--config FILE] [--<key> VALUE]... [--aa-auto] [--out-dir DIR]
//   sfl aa  [--config FILE] [--<key> VALUE]... [--repeats N] [--same-seed] [--out-dir DIR]
//   sfl verify-ledger DUMP
//
// Every config-file key is also a flag of the same name; flags win.

#include <cstdio>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "sfl/common/error.h"
#include "sfl/harness/config.h"
#include "sfl/harness/runner.h"
#include "sfl/ledger/dump.h"

namespace {

struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool aa_auto = false;
  std::string out_dir = "out";
};

void AddConfigFlags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_file, "key = value config file");
  cmd->add_option("--out-dir", flags.out_dir, "directory for all outputs")
      ->capture_default_str();
  for (const std::string& key : sfl::harness::ConfigKeys()) {
    if (key == "aa-auto") continue;
    cmd->add_option("--" + key, flags.values[key], "config key " + key)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }
  cmd->add_flag("--aa-auto", flags.aa_auto, "calibrate the threshold from repeated runs");
}

sfl::harness::RunConfig Resolve(CLI::App* cmd, const ConfigFlags& flags) {
  sfl::harness::RunConfig config;
  if (!flags.config_file.empty()) sfl::harness::ApplyConfigFile(config, flags.config_file);
  for (const auto& [key, value] : flags.values) {
    if (cmd->get_option("--" + key)->count() > 0) sfl::harness::SetConfigValue(config, key, value);
  }
  if (flags.aa_auto) config.aa_auto = true;
  config.Validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure federated learning simulator"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one task end to end");
  AddConfigFlags(run, run_flags);

  ConfigFlags aa_flags;
  std::size_t repeats = 10;
  bool same_seed = false;
  CLI::App* aa = app.add_subcommand("aa", "AA, HA and MA over repeated defense-off runs");
  AddConfigFlags(aa, aa_flags);
  aa->add_option("--repeats", repeats, "number of repeats")->capture_default_str();
  aa->add_flag("--same-seed", same_seed, "reuse the master seed for every repeat");

  std::string dump_path;
  CLI::App* verify = app.add_subcommand("verify-ledger", "replay and check a ledger dump");
  verify->add_option("dump", dump_path, "ledger.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto config = Resolve(run, run_flags);
      const auto result = sfl::harness::Run(config, run_flags.out_dir);
      std::printf("final_accuracy=%.6f rounds=%llu threshold=%.6f tip=%s\n",
                  result.summary.final_accuracy,
                  static_cast<unsigned long long>(result.summary.rounds), result.threshold,
                  sfl::ToHex(result.final_block_hash).c_str());
      return result.final_state.phase == sfl::contract::Phase::kFinalized ? 0 : 1;
    }
    if (aa->parsed()) {
      const auto config = Resolve(aa, aa_flags);
      const auto stats =
          sfl::harness::ComputeAaThreshold(config, repeats, aa_flags.out_dir, same_seed);
      std::printf("AA=%.17g HA=%.17g MA=%.17g quality_AA=%.17g\n", stats.aa, stats.ha, stats.ma,
                  stats.quality_aa);
      return 0;
    }
    const auto check = sfl::ledger::VerifyLedgerDump(dump_path);
    std::printf("%s: %zu blocks, %zu transactions: %s\n", check.ok ? "OK" : "FAIL", check.blocks,
                check.transactions, check.message.c_str());
    return check.ok ? 0 : 1;
  } catch (const sfl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
