#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace nsk::csv {

/// Shortest-safe decimal with 17 significant digits.
std::string format(double value);
std::string join(std::span<const double> values);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws Error(Config) when absent.
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

Table read(const std::filesystem::path& path);

}  // namespace nsk::csv
