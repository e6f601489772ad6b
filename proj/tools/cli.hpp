#ifndef TOON_TOOLS_CLI_HPP
#define TOON_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "toon/stylize.hpp"

namespace toon::cli {

/// Everything a run can be configured with; serialised as one flat JSON object.
struct PipelineConfig {
  StylizeConfig stylize;
  int levels = 3;
  double temperature = 1.0;
  std::string smoothing = "none";  // none | ema
  double ema_alpha = 0.5;

  void validate() const;
};

void to_json(nlohmann::json& j, const PipelineConfig& cfg);
void from_json(const nlohmann::json& j, PipelineConfig& cfg);

/// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);

enum ExitCode : int { kOk = 0, kUsage = 1, kProcessing = 2 };

/// args excludes the program name. The run manifest is written to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toon::cli

#endif  // TOON_TOOLS_CLI_HPP
