#pragma once

#include <string>
#include <vector>

namespace frns {

// RFC-4180 table with a leading '#' comment line. Numbers are written with
// 17 significant digits and '.' as decimal separator.
class CsvTable {
public:
    CsvTable(std::string comment, std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    void write(const std::string& path) const;

    static std::string number(double v);
    static std::string integer(long long v);
    static std::string boolean(bool v);
    static std::string quote(const std::string& cell);

private:
    std::string comment_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace frns
