#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dpo {

enum class OutputFormat { Csv, Json };

OutputFormat output_format_from_string(const std::string& name);
std::string to_string(OutputFormat format);

// Column-oriented numeric table: one named x column plus value columns.
// Serialized deterministically (12 significant digits) so identical inputs
// give byte-identical files.
struct Table {
    std::string x_name;
    std::vector<std::string> value_names;  // "value", "value2", ...
    std::vector<double> x;
    std::vector<std::vector<double>> columns;  // one vector per value column

    void check() const;  // throws on ragged columns
};

std::string format_double(double v);  // %.12g

std::string render_csv(const Table& table);
std::string render_json(const Table& table);

// Writes via a temp file in the same directory plus rename, so concurrent
// invocations never observe partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::filesystem::path write_table(const Table& table, const std::filesystem::path& directory,
                                  const std::string& stem, OutputFormat format);

}  // namespace dpo
