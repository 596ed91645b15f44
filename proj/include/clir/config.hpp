#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "clir/aligner.hpp"
#include "clir/miner.hpp"
#include "clir/retrieval.hpp"
#include "clir/tm.hpp"

namespace clir {

/// Environment variable naming the default configuration file.
inline constexpr const char* kConfigEnv = "CLIR_CONFIG";

/// Flat key=value configuration shared by all subcommands. Values are
/// layered: built-in defaults, then a file, then command-line flags.
class RunConfig {
  public:
    /// Every known key with its built-in default.
    static RunConfig defaults();

    /// Reads `key = value` lines; `#` starts a comment line. Unknown keys
    /// and malformed lines throw ConfigError.
    void read(std::istream& in, std::string_view origin = "config");
    void load(const std::filesystem::path& path);

    /// Throws ConfigError for unknown keys.
    void set(std::string_view key, std::string value);

    bool known(std::string_view key) const;
    const std::string& get(std::string_view key) const;
    double get_double(std::string_view key) const;
    std::size_t get_size(std::string_view key) const;
    bool get_bool(std::string_view key) const;
    std::optional<double> get_optional_double(std::string_view key) const;

    const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

    /// `# key=value` lines, sorted by key, for embedding in artifacts.
    std::string header() const;

    AlignParams align_params() const;
    TrainConfig train_config() const;
    RetrievalParams retrieval_params() const;
    /// Miner settings without language models.
    MinerConfig miner_config() const;

  private:
    std::map<std::string, std::string, std::less<>> values_;
};

/// Value of CLIR_CONFIG, when set and non-empty.
std::optional<std::filesystem::path> config_path_from_env();

/// "en-fr" -> {"en", "fr"}. Throws ConfigError otherwise.
std::pair<std::string, std::string> parse_direction(std::string_view direction);

}  // namespace clir
