#ifndef RISKQUAD_COMMANDS_HPP
#define RISKQUAD_COMMANDS_HPP

#include <cstdint>
#include <string>

#include "riskquad/config.hpp"

namespace riskquad {

/// Exit codes shared by all commands: 0 success, 1 verification mismatch,
/// 2 usage or data error.
struct CommandOptions {
  std::string config_path;
  std::string output_dir;  // overrides the config when nonempty
  std::uint64_t seed = 0;  // overrides the config when nonzero
  bool no_chart = false;
  bool fetch = false;
};

int cmd_optimize(const CommandOptions& opts);
int cmd_backtest(const CommandOptions& opts);
int cmd_sensitivity(const CommandOptions& opts);
int cmd_export_lp(const CommandOptions& opts);
int cmd_verify(std::uint64_t seed, std::size_t trials);

}  // namespace riskquad

#endif
