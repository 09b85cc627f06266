#include "taxgraph/csv.hpp"

#include <cstdio>

namespace taxgraph {

bool CsvReader::read_record(std::vector<std::string>& fields) {
    fields.clear();
    if (pos_ == 0 && buffer_.starts_with("\xEF\xBB\xBF")) pos_ = 3;  // UTF-8 BOM
    if (pos_ >= buffer_.size()) return false;
    record_line_ = line_;

    std::string cell;
    bool in_quotes = false;
    bool record_done = false;
    while (!record_done) {
        if (pos_ >= buffer_.size()) {
            // EOF terminates the record; an unterminated quote ends leniently.
            break;
        }
        char c = buffer_[pos_];
        if (in_quotes) {
            if (c == '"') {
                if (pos_ + 1 < buffer_.size() && buffer_[pos_ + 1] == '"') {
                    cell.push_back('"');
                    pos_ += 2;
                } else {
                    in_quotes = false;
                    ++pos_;
                }
            } else {
                if (c == '\n') ++line_;
                cell.push_back(c);
                ++pos_;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (cell.empty()) {
                    in_quotes = true;
                } else {
                    cell.push_back(c);  // stray quote mid-cell: keep literally
                }
                ++pos_;
                break;
            case ',':
                fields.push_back(std::move(cell));
                cell.clear();
                ++pos_;
                break;
            case '\r':
                ++pos_;
                if (pos_ < buffer_.size() && buffer_[pos_] == '\n') {
                    ++pos_;
                    ++line_;
                    record_done = true;
                }
                // lone \r inside a cell is dropped
                break;
            case '\n':
                ++pos_;
                ++line_;
                record_done = true;
                break;
            default:
                cell.push_back(c);
                ++pos_;
                break;
        }
    }
    fields.push_back(std::move(cell));
    return true;
}

std::string csv_escape(std::string_view cell) {
    bool needs_quotes = false;
    for (char c : cell) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return std::string(cell);
    std::string out;
    out.reserve(cell.size() + 2);
    out.push_back('"');
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(cells[i]);
    }
    out.put('\n');
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

}  // namespace taxgraph
