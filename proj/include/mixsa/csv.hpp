#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mixsa {

/// Round-trip text form of a double ("%.17g"; "inf"/"-inf"/"nan" for
/// non-finite values).
std::string format_double(double v);
double parse_double(const std::string& s);

/// Minimal CSV table: header plus rows of text cells. No quoting; cells
/// never contain commas in this project.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
/// Throws std::runtime_error on malformed input (ragged rows, empty header).
CsvTable parse_csv(const std::string& text);
std::string to_csv(const CsvTable& table);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mixsa
