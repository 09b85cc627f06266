#pragma once
// RFC 4180 CSV over an in-memory buffer: quoted fields may contain commas,
// quotes ("" escape) and newlines. Reader tracks the physical line a record
// starts on so row errors can point at the input.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taxgraph {

class CsvReader {
public:
    explicit CsvReader(std::string_view buffer) : buffer_(buffer) {}
    explicit CsvReader(const char* buffer) : buffer_(buffer) {}
    // The reader only views the buffer; a temporary would dangle.
    explicit CsvReader(std::string&&) = delete;

    // Fills `fields` with the next record; returns false at end of input.
    // A lone trailing newline does not produce an empty record.
    bool read_record(std::vector<std::string>& fields);

    // 1-based physical line on which the last record returned started.
    std::size_t record_line() const { return record_line_; }

    bool at_end() const { return pos_ >= buffer_.size(); }

private:
    std::string_view buffer_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

// Quote a single cell if it contains a comma, quote or newline.
std::string csv_escape(std::string_view cell);

void write_csv_row(std::ostream& out, std::span<const std::string> cells);

// Deterministic double rendering for CSV cells (9 significant digits).
std::string format_double(double value);

}  // namespace taxgraph
