#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qpreth/common.hpp"

namespace qpreth {

/// CSV writer with the frozen output conventions: comma separation, one
/// header row, LF line endings, floats at 17 significant digits.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) throw config_error("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << "\n";
        cols_ = header.size();
    }

    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    void row(const std::vector<double>& values) {
        if (values.size() != cols_) throw config_error("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt(values[i]);
        out_ << "\n";
    }

    void row_raw(const std::vector<std::string>& cells) {
        if (cells.size() != cols_) throw config_error("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
    std::size_t cols_ = 0;
};

}  // namespace qpreth
