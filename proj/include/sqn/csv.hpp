#pragma once

#include <string>
#include <vector>

#include "sqn/diagnostics.hpp"

namespace sqn {

/// Fixed benchmark schema; emitters must reproduce it bit-exactly.
std::string csv_header();

/// Serializes checkpoint rows: integers verbatim, reals with 17 significant
/// digits, absent optionals as empty cells.
std::string to_csv(const std::vector<RunRecord>& records);

void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace sqn
