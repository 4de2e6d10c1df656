#include "knde/config.hpp"

#include <charconv>
#include <sstream>

namespace knde {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("invalid value '" + value + "' for option '" +
                              key + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, std::string value) {
  if (key == "command")
    command = std::move(value);
  else
    values[key] = std::move(value);
}

bool RunConfig::has(const std::string& key) const {
  return values.count(key) > 0;
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw std::invalid_argument("missing required option '" + key + "'");
  return it->second;
}

std::string RunConfig::get_or(const std::string& key,
                              const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

long long RunConfig::get_int(const std::string& key) const {
  const std::string& s = get(key);
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad_value(key, s);
  return v;
}

long long RunConfig::get_int_or(const std::string& key,
                                long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& s = get(key);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad_value(key, s);
  return v;
}

double RunConfig::get_double_or(const std::string& key,
                                double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t RunConfig::get_seed_or(const std::string& key,
                                     std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = get(key);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad_value(key, s);
  return v;
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  const std::string& s = get(key);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(',', start);
    std::string item =
        s.substr(start, pos == std::string::npos ? pos : pos - start);
    item = trim(item);
    if (item.empty()) bad_value(key, s);
    double v = 0.0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || p != item.data() + item.size()) bad_value(key, s);
    out.push_back(v);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) bad_value(key, s);
  return out;
}

std::vector<Index> RunConfig::get_index_list(const std::string& key) const {
  std::vector<double> raw = get_double_list(key);
  std::vector<Index> out;
  for (double v : raw) {
    Index i = static_cast<Index>(v);
    if (static_cast<double>(i) != v || i < 1) bad_value(key, get(key));
    out.push_back(i);
  }
  return out;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "command = " << command << "\n";
  for (const auto& [key, value] : values)
    os << key << " = " << value << "\n";
  return os.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line with empty key: " + line);
    cfg.set(key, value);
  }
  return cfg;
}

}  // namespace knde
