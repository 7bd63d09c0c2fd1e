#pragma once

#include <string>
#include <vector>

namespace svpf {

inline constexpr const char* kCodeVersion = "1.0.0";

// Shortest round-trip-safe decimal form (17 significant digits).
std::string format_real(double value);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace svpf
