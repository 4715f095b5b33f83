#pragma once

// Ordered key: value text report used for certificates, audits and run summaries.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sobolev {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double value);

class Report {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void add(std::string key, long long value);
  void add(std::string key, int value) { add(std::move(key), static_cast<long long>(value)); }
  void add_verdict(std::string key, bool pass);
  void append(const Report& other, std::string_view prefix = {});

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  /// First value stored under key, or empty string.
  std::string get(std::string_view key) const;

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parses "key: value" lines back into a report (the inverse of write).
Report parse_report(std::string_view text);

}  // namespace sobolev
