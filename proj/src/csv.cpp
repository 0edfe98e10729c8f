// Copyright 2026 The relaysched Authors
// SPDX-License-Identifier: Apache-2.0

#include "relaysched/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relaysched {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

std::string format_number(std::uint64_t value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(std::move(columns)) {}

void CsvWriter::comment_block(std::string_view text) {
  if (header_written_) throw std::logic_error("comments must precede the header row");
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) out_ << "# " << line << '\n';
}

void CsvWriter::write_header() {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns_[i];
  }
  out_ << '\n';
  header_written_ = true;
}

void CsvWriter::separator() {
  if (!header_written_) write_header();
  if (in_row_ >= columns_.size()) throw std::logic_error("too many fields in CSV row");
  if (in_row_) out_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_.size()) throw std::logic_error("CSV row has missing fields");
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace relaysched
