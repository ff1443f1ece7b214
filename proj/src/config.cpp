#include "cma/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cma::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  cfg.text_ = text;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(errc::invalid_input,
             "config line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::invalid_input,
           "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      fail(errc::invalid_input, "config line " + std::to_string(lineno) + ": empty key");
    Entry e;
    e.line = lineno;
    std::istringstream vs(line.substr(eq + 1));
    std::string tok;
    while (vs >> tok) e.values.push_back(tok);
    cfg.sections_[section][key] = std::move(e);
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(errc::invalid_input, "config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

const RunConfig::Entry* RunConfig::find(const std::string& section,
                                        const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void RunConfig::missing(const std::string& section, const std::string& key) const {
  fail(errc::invalid_input, "config: missing [" + section + "] " + key);
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  std::optional<std::string> fallback) const {
  const Entry* e = find(section, key);
  if (!e) {
    if (fallback) return *fallback;
    missing(section, key);
  }
  if (e->values.size() != 1)
    fail(errc::invalid_input, "config line " + std::to_string(e->line) + ": [" + section +
                                  "] " + key + " expects a single value");
  return e->values[0];
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    return std::stod(get_string(section, key));
  } catch (const std::invalid_argument&) {
    fail(errc::invalid_input, "config line " + std::to_string(e->line) + ": [" + section +
                                  "] " + key + " is not a number");
  }
}

double RunConfig::require_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) missing(section, key);
  return get_double(section, key, 0.0);
}

int RunConfig::get_int(const std::string& section, const std::string& key, int fallback) const {
  const double v = get_double(section, key, double(fallback));
  return int(v);
}

std::vector<double> RunConfig::get_doubles(const std::string& section,
                                           const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) missing(section, key);
  std::vector<double> out;
  for (const std::string& v : e->values) {
    try {
      out.push_back(std::stod(v));
    } catch (const std::invalid_argument&) {
      fail(errc::invalid_input, "config line " + std::to_string(e->line) + ": [" + section +
                                    "] " + key + " holds a non-number");
    }
  }
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& section,
                                                const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) missing(section, key);
  return e->values;
}

}  // namespace cma::cli
