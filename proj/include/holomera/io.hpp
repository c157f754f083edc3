#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "holomera/gates.hpp"

// Run configuration, hashing, and the CSV dialect shared by the CLI and the
// tests: UTF-8, comma-separated, 17 significant digits, first line
// `# holomera v<semver> config=<hash>`.

namespace holomera {

inline constexpr const char* holomera_version = "1.0.0";

inline std::string csv_num(double x) {
  char b[40];
  std::snprintf(b, sizeof(b), "%.17g", x);
  return b;
}

// Flat key-value run configuration; file lines are `key = value`, '#' starts
// a comment, command-line overrides are `key=value` strings.
struct Config {
  std::map<std::string, std::string> kv;

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  void set_pair(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config entry lacks '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config entry lacks a key: " + line);
    kv[key] = trim(line.substr(eq + 1));
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Config c;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      c.set_pair(line);
    }
    return c;
  }

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  std::string get(const std::string& key, const std::string& dflt) const {
    const auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }

  double get_double(const std::string& key, double dflt) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not a number: " +
                        it->second);
    }
  }

  std::int64_t get_int(const std::string& key, std::int64_t dflt) const {
    const double v = get_double(key, static_cast<double>(dflt));
    const auto i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError("config key '" + key + "' is not an integer");
    return i;
  }

  // Sorted key=value lines; the canonical form backing the config hash.
  std::string canonical() const {
    std::string s;
    for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
    return s;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const char ch : canonical()) {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline std::string hash_hex(std::uint64_t h) {
  char b[20];
  std::snprintf(b, sizeof(b), "%016llx", static_cast<unsigned long long>(h));
  return b;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            std::uint64_t config_hash)
      : out_(path) {
    if (!out_) throw ConfigError("cannot open output file: " + path);
    out_ << "# holomera v" << holomera_version << " config="
         << hash_hex(config_hash) << "\n";
    write_cells(columns);
  }

  void row(const std::vector<std::string>& cells) { write_cells(cells); }

  void row_num(const std::vector<double>& vals) {
    std::vector<std::string> cells;
    cells.reserve(vals.size());
    for (double v : vals) cells.push_back(csv_num(v));
    write_cells(cells);
  }

 private:
  void write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  std::ofstream out_;
};

struct CsvTable {
  std::string header;  // the '#' metadata line
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ConfigError("CSV lacks column: " + name);
  }
  double num(std::size_t row, std::size_t col) const {
    return std::stod(rows.at(row).at(col));
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file: " + path);
  CsvTable t;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (t.header.empty()) t.header = line;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_columns) {
      t.columns = std::move(cells);
      have_columns = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

// Reproducibility record of a network: depth, gate entries, gauge angles,
// core amplitudes, all as re/im pairs.
inline std::string network_json(const MeraNetwork& net,
                                const HologronGauge& gauge = {}) {
  auto num = [](double x) {
    char b[40];
    std::snprintf(b, sizeof(b), "%.17g", x);
    return std::string(b);
  };
  auto mat = [&](const Mat& m) {
    std::string s = "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r != 0 || c != 0) s += ",";
        s += "[" + num(m(r, c).real()) + "," + num(m(r, c).imag()) + "]";
      }
    return s + "]";
  };
  std::string s = "{\"version\":\"" + std::string(holomera_version) + "\"";
  s += ",\"D\":" + std::to_string(net.D);
  s += ",\"w\":" + mat(net.gates.w);
  s += ",\"u\":" + mat(net.gates.u);
  s += ",\"gauge\":[" + num(gauge.theta_x) + "," + num(gauge.theta_y) + "," +
       num(gauge.theta_z) + "," + num(gauge.phi) + "]";
  s += ",\"core\":[";
  for (Eigen::Index i = 0; i < net.core.size(); ++i) {
    if (i) s += ",";
    s += "[" + num(net.core(i).real()) + "," + num(net.core(i).imag()) + "]";
  }
  s += "]}";
  return s;
}

}  // namespace holomera
