#pragma once

#include <string>
#include <vector>

#include "sparseal/harness.hpp"

namespace sparseal {

// Shortest decimal form that round-trips a double exactly ("%.17g" fallback).
std::string format_g17(double v);

// Column order is fixed; readers validate the header verbatim.
std::string csv_header();
std::string to_csv_row(const RunRecord& record);
std::string to_csv(const std::vector<RunRecord>& records);

void write_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv_file(const std::string& path);
std::vector<RunRecord> read_csv_text(const std::string& text);

// Same CSV with the wall_ms column blanked, for byte comparisons between
// reruns (wall time is the one legitimately nondeterministic column).
std::string strip_wall_ms(const std::string& csv_text);

}  // namespace sparseal
