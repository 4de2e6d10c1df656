#pragma once

#include "knde/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace knde {

//! Flat key-value run configuration. Values are kept verbatim as strings so
//! parse(serialize(config)) == config holds exactly; typed accessors
//! validate at the point of use and name the offending key.
struct RunConfig {
  std::string command;  // estimate | eval | converge | compare
  std::map<std::string, std::string> values;

  bool operator==(const RunConfig&) const = default;

  void set(const std::string& key, std::string value);
  bool has(const std::string& key) const;

  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::uint64_t get_seed_or(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<Index> get_index_list(const std::string& key) const;

  //! One "key = value" line per entry, command first, keys sorted.
  std::string serialize() const;
  static RunConfig parse(const std::string& text);
};

}  // namespace knde
