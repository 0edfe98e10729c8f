// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace relaysched {

/// Shortest decimal text that parses back to the same double; independent
/// of the process locale. Non-finite values print as nan/inf/-inf.
std::string format_number(double value);
std::string format_number(std::uint64_t value);

/// Writes `# `-prefixed comment lines, then one header row, then rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  void comment_block(std::string_view text);
  void write_header();

  CsvWriter& field(double value);
  CsvWriter& field(std::uint64_t value);
  CsvWriter& field(std::string_view text);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::vector<std::string> columns_;
  std::size_t in_row_ = 0;
  bool header_written_ = false;
};

}  // namespace relaysched
