#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace fourlin::cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitIo = 4;

// Each command reads its keys from cfg, rejects unknown ones, writes its
// outputs under out and the resolved config as resolved_<command>.ini.
int cmd_generate(Config& cfg, const std::filesystem::path& out);
int cmd_fit(Config& cfg, const std::filesystem::path& out);
int cmd_eval(Config& cfg, const std::filesystem::path& out);
// kind overrides sweep.kind when non-empty.
int cmd_sweep(Config& cfg, const std::filesystem::path& out, const std::string& kind);
int cmd_verify(Config& cfg, const std::filesystem::path& out);

}  // namespace fourlin::cli
