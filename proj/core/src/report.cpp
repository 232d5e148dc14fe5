#include "nilspace/report.hpp"

#include <sstream>

namespace nilspace {

namespace {

// values are single-line; embedded newlines would break the format
std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

Verdict verdict_from(const std::string& s) {
  if (s == "FAIL") return Verdict::Fail;
  if (s == "INDETERMINATE") return Verdict::Indeterminate;
  return Verdict::Pass;
}

}  // namespace

void ReportSection::add(std::string key, std::string value) {
  entries.emplace_back(std::move(key), one_line(std::move(value)));
}

std::string ReportSection::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return {};
}

std::size_t Report::count(Verdict v) const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.status == v;
  return n;
}

int Report::exit_code() const {
  if (count(Verdict::Fail)) return 1;
  if (count(Verdict::Indeterminate)) return 3;
  return 0;
}

std::string Report::render(bool machine, const std::string& timestamp) const {
  std::ostringstream out;
  if (!machine) out << "# nilspace-lab report " << timestamp << "\n";
  for (const auto& s : sections) {
    out << "section: " << one_line(s.title) << "\n";
    out << "status = " << to_string(s.status) << "\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
    out << "\n";
  }
  out << "section: summary\n";
  out << "pass = " << count(Verdict::Pass) << "\n";
  out << "fail = " << count(Verdict::Fail) << "\n";
  out << "indeterminate = " << count(Verdict::Indeterminate) << "\n";
  out << "exit = " << exit_code() << "\n";
  return out.str();
}

std::vector<ReportSection> parse_report(const std::string& text) {
  std::vector<ReportSection> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("section: ", 0) == 0) {
      out.emplace_back();
      out.back().title = line.substr(9);
      continue;
    }
    auto eq = line.find(" = ");
    if (eq == std::string::npos || out.empty()) continue;
    std::string key = line.substr(0, eq), value = line.substr(eq + 3);
    if (key == "status") out.back().status = verdict_from(value);
    else out.back().entries.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

}  // namespace nilspace
