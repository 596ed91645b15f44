#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clir::detail {

/// Splits on every occurrence of `sep`, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char sep);

/// Splits on runs of blanks and tabs.
std::vector<std::string_view> split_ws(std::string_view line);

std::string_view trim(std::string_view s);

/// printf "%.<digits>g".
std::string format_g(double value, int digits);

/// printf "%.<decimals>f".
std::string format_f(double value, int decimals);

double parse_double(std::string_view text, std::string_view what);
std::size_t parse_size(std::string_view text, std::string_view what);

/// `#key=value` metadata line (no blank after '#').
std::optional<std::pair<std::string, std::string>> meta_line(std::string_view line);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace clir::detail
