#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace kcn::detail {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Collects the files written under one output root. Safe to use from
/// several threads as long as each writes distinct paths.
class BundleWriter {
public:
    explicit BundleWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write(const std::string& relative, std::string_view content);
    const std::filesystem::path& root() const { return root_; }
    std::vector<std::string> files() const;

private:
    std::filesystem::path root_;
    mutable std::mutex mutex_;
    std::vector<std::string> files_;
};

/// "%.3f" with negative zero printed as 0.000.
std::string fixed3(double v);
/// Shortest round-trip representation.
std::string num(double v);

}  // namespace kcn::detail
