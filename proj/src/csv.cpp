#include "nsk/csv.hpp"

#include "nsk/error.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nsk::csv {

std::string format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string join(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format(values[i]);
    }
    return out;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error(ErrorKind::Config, "CSV has no column '" + name + "'");
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot open " + path.string());
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Config, path.string() + " is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                // stod rejects "nan"/"inf" spellings from some writers; keep them explicit.
                if (cell == "nan" || cell == "-nan") row.push_back(std::numeric_limits<double>::quiet_NaN());
                else if (cell == "inf") row.push_back(std::numeric_limits<double>::infinity());
                else if (cell == "-inf") row.push_back(-std::numeric_limits<double>::infinity());
                else throw Error(ErrorKind::Config, path.string() + ":" + std::to_string(line_no)
                                                        + ": not a number '" + cell + "'");
            }
        }
        if (row.size() != table.header.size()) {
            throw Error(ErrorKind::Config, path.string() + ":" + std::to_string(line_no)
                                               + ": wrong number of columns");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace nsk::csv
