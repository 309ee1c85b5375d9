#include "frns/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace frns {

CsvTable::CsvTable(std::string comment, std::vector<std::string> header)
    : comment_(std::move(comment)), header_(std::move(header))
{
}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvTable: row width differs from header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::quote(const std::string& cell)
{
    if (cell.find_first_of(",\"\r\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string CsvTable::number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::integer(long long v)
{
    return std::to_string(v);
}

std::string CsvTable::boolean(bool v)
{
    return v ? "true" : "false";
}

std::string CsvTable::str() const
{
    std::string out = "# " + comment_ + "\r\n";
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out += (i ? "," : "") + quote(cells[i]);
        out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
    return out;
}

void CsvTable::write(const std::string& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << str();
}

} // namespace frns
