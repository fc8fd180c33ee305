#include "chainqed/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "chainqed/common.hpp"

namespace chainqed {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {
    ensure_parent_dir(path_);
}

void CsvWriter::comment(const std::string& text) { body_ += "# " + text + "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) { raw_row(columns); }

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_g17(values[i]);
    }
    body_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

void CsvWriter::commit() {
    if (committed_) throw NumericalError("CSV already committed: " + path_);
    const std::string tmp = path_ + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw NumericalError("cannot write " + tmp);
        out << body_;
    }
    std::filesystem::rename(tmp, path_);
    committed_ = true;
}

void ensure_parent_dir(const std::string& path) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

} // namespace chainqed
