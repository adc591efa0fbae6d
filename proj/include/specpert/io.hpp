#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specpert/linalg.hpp"

namespace specpert::io {

// Numeric CSV: comma separated, blank lines and lines starting with '#'
// skipped. A first row that does not parse as numbers is treated as a header.
// Parse errors carry the 1-based line number; rows of unequal width are an
// error.
Matrix read_csv_matrix(const std::filesystem::path& path);
Matrix parse_csv_matrix(const std::string& text, const std::string& source = "<string>");

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Fixed "%.17g" formatting so equal values give equal bytes.
std::string format_csv(const CsvTable& table);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace specpert::io
