#include "aspectsum/csv.hpp"

#include "aspectsum/errors.hpp"

namespace aspectsum {

bool CsvReader::next(CsvRow& row) {
    row.clear();
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) return false;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    bool field_started_quoted = false;
    while (true) {
        if (c == std::char_traits<char>::eof()) {
            if (quoted) throw SchemaError("unterminated quoted field starting on line " + std::to_string(record_line_));
            row.push_back(std::move(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty() && !field_started_quoted) {
            quoted = true;
            field_started_quoted = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started_quoted = false;
        } else if (ch == '\r' && in_.peek() == '\n') {
            // handled with the '\n'
        } else if (ch == '\n') {
            ++line_;
            row.push_back(std::move(field));
            return true;
        } else {
            field.push_back(ch);
        }
        c = in_.get();
    }
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        const auto& f = row[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            out << f;
            continue;
        }
        out << '"';
        for (char ch : f) {
            if (ch == '"') out << '"';
            out << ch;
        }
        out << '"';
    }
    out << '\n';
}

}  // namespace aspectsum
