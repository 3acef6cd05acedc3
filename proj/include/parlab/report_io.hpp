#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "parlab/grid.hpp"

namespace parlab {

// 17 significant digits: round-trip exact for IEEE doubles.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Minimal CSV writer: rows of already-formatted cells.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    void numeric_row(const std::string& head, const std::vector<double>& xs) {
        out_ << head;
        for (double x : xs) out_ << ',' << fmt17(x);
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

// NDJSON field serialization: one record per time slice,
// {"t":..., "shape":[...], "comps":c, "values":[...]}.
void write_field_ndjson(const GridField& f, const std::string& path);

}  // namespace parlab
