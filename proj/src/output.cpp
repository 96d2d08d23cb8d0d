#include "dpo/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <nlohmann/json.hpp>

namespace dpo {

OutputFormat output_format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown output format: " + name);
}

std::string to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

void Table::check() const {
    if (value_names.size() != columns.size()) {
        throw std::invalid_argument("Table: value_names/columns size mismatch");
    }
    for (const auto& column : columns) {
        if (column.size() != x.size()) {
            throw std::invalid_argument("Table: ragged columns");
        }
    }
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

std::string render_csv(const Table& table) {
    table.check();
    std::string out = table.x_name;
    for (const auto& name : table.value_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < table.x.size(); ++i) {
        out += format_double(table.x[i]);
        for (const auto& column : table.columns) {
            out += ',';
            out += format_double(column[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& table) {
    table.check();
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::json::array();
    doc["columns"].push_back(table.x_name);
    for (const auto& name : table.value_names) {
        doc["columns"].push_back(name);
    }
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < table.x.size(); ++i) {
        auto row = nlohmann::json::array();
        row.push_back(table.x[i]);
        for (const auto& column : table.columns) {
            row.push_back(column[i]);
        }
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::error_code ec;
    fs::create_directories(dir, ec);

    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

std::filesystem::path write_table(const Table& table, const std::filesystem::path& directory,
                                  const std::string& stem, OutputFormat format) {
    const std::filesystem::path path =
        directory / (stem + (format == OutputFormat::Csv ? ".csv" : ".json"));
    write_text_atomic(path, format == OutputFormat::Csv ? render_csv(table) : render_json(table));
    return path;
}

}  // namespace dpo
