#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace ontokit::cli {

/// Exit codes: 0 pass / SAT / feasible, 1 substantive negative, 2 usage or
/// input error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

/// Default seed when neither --seed nor the environment sets one.
inline constexpr unsigned long long kDefaultSeed = 1;
inline constexpr const char* kSeedEnv = "ONTOKIT_SEED";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ontokit::cli
