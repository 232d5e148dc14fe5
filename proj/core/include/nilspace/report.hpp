#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nilspace/cubespace.hpp"

namespace nilspace {

/// One `section:` block of a report; entries keep insertion order.
struct ReportSection {
  std::string title;
  Verdict status = Verdict::Pass;
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value);
  void add(std::string key, std::uint64_t value) { add(std::move(key), std::to_string(value)); }
  /// First value stored under `key`, or empty.
  std::string get(const std::string& key) const;
};

struct Report {
  std::vector<ReportSection> sections;

  std::size_t count(Verdict v) const;
  /// 0 all PASS, 1 any FAIL, 3 INDETERMINATE without FAIL.
  int exit_code() const;
  /// Machine mode is the deterministic body alone; human mode prefixes one
  /// header line carrying `timestamp`.
  std::string render(bool machine, const std::string& timestamp = {}) const;
};

/// Sections of a rendered report, keyed by title in order of appearance.
std::vector<ReportSection> parse_report(const std::string& text);

}  // namespace nilspace
