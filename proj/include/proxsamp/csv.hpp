#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "proxsamp/common.hpp"

namespace proxsamp {

/// CSV writer with the reproducibility header every artifact carries:
/// `# config_digest=<hex> root_seed=<u64>`. Numbers print with 17 significant
/// digits so reruns are byte-identical.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t digest, std::uint64_t root_seed)
      : out_(path, std::ios::binary) {
    if (!out_) throw InputError("cannot open output file: " + path);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    out_ << "# config_digest=" << buf << " root_seed=" << root_seed << "\n";
  }

  void header(std::initializer_list<std::string> cols) { row_strings(cols); }

  void row_strings(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline std::string csv_cell(double v) { return fmt_g17(v); }
inline std::string csv_cell(long v) { return std::to_string(v); }
inline std::string csv_cell(int v) { return std::to_string(v); }
inline std::string csv_cell(bool v) { return v ? "true" : "false"; }

}  // namespace proxsamp
