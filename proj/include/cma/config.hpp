#pragma once

// Flat sectioned key = value configuration. Grammar:
//   - '#' or ';' starts a comment (full line or trailing)
//   - '[section]' opens a section; keys before any section live in ""
//   - 'key = v1 v2 ...' assigns a whitespace-separated value list
// Numbers parse as doubles/ints on demand; lookups carry line diagnostics.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cma/core.hpp"

namespace cma::cli {

class RunConfig {
public:
  static RunConfig parse(const std::string& text);
  static RunConfig parse_file(const std::string& path);

  const std::string& text() const { return text_; }

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         std::optional<std::string> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  double require_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& section,
                                       const std::string& key) const;

private:
  struct Entry {
    std::vector<std::string> values;
    int line = 0;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void missing(const std::string& section, const std::string& key) const;

  std::string text_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace cma::cli
