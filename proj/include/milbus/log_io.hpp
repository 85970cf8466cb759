#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "milbus/record.hpp"

namespace milbus {

// Result of reading a log file. predicted is empty for plain logs; when the
// file carries a predicted_label field it is present on every line and
// predicted.size() == records.size().
struct LogReadResult {
    std::vector<MessageRecord> records;
    std::vector<Label> predicted;
};

// One record per line as a JSON object, keys in declaration order, "null"
// for N/A addresses, newline-terminated. Serialization is canonical: the
// same records always produce identical bytes.
std::string serialize_record(const MessageRecord& record);
std::string serialize_record(const MessageRecord& record, Label predicted);

// Parses one line. line_no is used for error reporting only.
MessageRecord parse_record(const std::string& line, std::size_t line_no);

// Writes records (optionally with predicted labels) to path. Throws
// ValidationError if timestamps are not strictly increasing or a record
// fails validate_record.
void write_log(const std::vector<MessageRecord>& records, const std::filesystem::path& path);
void write_log(const std::vector<MessageRecord>& records, const std::vector<Label>& predicted,
               const std::filesystem::path& path);

// Reads a log, validating every record and the strict timestamp order.
// Throws ParseError with the 1-based line number on malformed lines.
LogReadResult read_log(const std::filesystem::path& path);

}  // namespace milbus
