#include "sobolev/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace sobolev {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void Report::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

void Report::add(std::string key, double value) { add(std::move(key), format_double(value)); }

void Report::add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }

void Report::add_verdict(std::string key, bool pass) { add(std::move(key), std::string(pass ? "pass" : "fail")); }

void Report::append(const Report& other, std::string_view prefix) {
  for (const auto& [k, v] : other.entries_) add(std::string(prefix) + k, v);
}

std::string Report::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return {};
}

void Report::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
}

std::string Report::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

Report parse_report(std::string_view text) {
  Report r;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    const std::size_t sep = line.find(": ");
    if (sep == std::string_view::npos) continue;
    r.add(std::string(line.substr(0, sep)), std::string(line.substr(sep + 2)));
  }
  return r;
}

}  // namespace sobolev
