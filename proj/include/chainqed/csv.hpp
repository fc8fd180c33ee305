// csv.hpp — deterministic CSV output (17 significant digits, atomic writes)

#pragma once

#include <string>
#include <vector>

namespace chainqed {

// shortest-round-trip-safe decimal form ("%.17g")
std::string format_g17(double v);

class CsvWriter {
  public:
    explicit CsvWriter(std::string path);

    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

    // write-temp-then-rename; call exactly once
    void commit();

  private:
    std::string path_;
    std::string body_;
    bool committed_ = false;
};

void ensure_parent_dir(const std::string& path);

} // namespace chainqed
