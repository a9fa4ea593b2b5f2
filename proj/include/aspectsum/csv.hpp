#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace aspectsum {

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader: comma separated, double-quoted fields may contain commas,
/// doubled quotes and newlines. CRLF and LF line endings are accepted.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// False at end of input. `line` is the 1-based line where the record starts.
    /// Throws SchemaError on an unterminated quoted field.
    bool next(CsvRow& row);
    std::size_t line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

void write_csv_row(std::ostream& out, const CsvRow& row);

}  // namespace aspectsum
