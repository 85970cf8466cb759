#include "milbus/log_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "milbus/errors.hpp"

namespace milbus {

namespace {

using ordered_json = nlohmann::ordered_json;

void addr_to_json(ordered_json& object, const char* key, const BusAddr& addr) {
    if (addr)
        object[key] = *addr;
    else
        object[key] = nullptr;
}

BusAddr addr_from_json(const nlohmann::json& object, const char* key, std::size_t line_no) {
    const auto& value = object.at(key);
    if (value.is_null())
        return std::nullopt;
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() > 255)
        throw ParseError(line_no, std::string(key) + " must be null or a small non-negative integer");
    return static_cast<std::uint8_t>(value.get<std::uint64_t>());
}

ordered_json record_to_json(const MessageRecord& record) {
    ordered_json object;
    object["timestamp_us"] = record.timestamp_us;
    object["channel"] = to_string(record.channel);
    object["transfer_type"] = to_string(record.transfer_type);
    addr_to_json(object, "src_terminal", record.src_terminal);
    addr_to_json(object, "src_subaddress", record.src_subaddress);
    addr_to_json(object, "dst_terminal", record.dst_terminal);
    addr_to_json(object, "dst_subaddress", record.dst_subaddress);
    object["word_count"] = record.word_count;
    object["is_mode_code"] = record.is_mode_code;
    object["truth_label"] = to_string(record.truth_label);
    return object;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "timestamp_us",  "channel",        "transfer_type", "src_terminal",
        "src_subaddress", "dst_terminal",  "dst_subaddress", "word_count",
        "is_mode_code",  "truth_label",    "predicted_label"};
    return keys;
}

}  // namespace

std::string serialize_record(const MessageRecord& record) {
    return record_to_json(record).dump() + "\n";
}

std::string serialize_record(const MessageRecord& record, Label predicted) {
    ordered_json object = record_to_json(record);
    object["predicted_label"] = to_string(predicted);
    return object.dump() + "\n";
}

namespace {

nlohmann::json parse_json_line(const std::string& line, std::size_t line_no) {
    nlohmann::json object;
    try {
        object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, std::string("invalid record: ") + e.what());
    }
    if (!object.is_object())
        throw ParseError(line_no, "record line must be a JSON object");
    for (const auto& item : object.items())
        if (!known_keys().count(item.key()))
            throw ParseError(line_no, "unknown field: " + item.key());
    return object;
}

MessageRecord record_from_json(const nlohmann::json& object, std::size_t line_no) {
    MessageRecord record;
    try {
        record.timestamp_us = object.at("timestamp_us").get<std::int64_t>();
        record.channel = channel_from_string(object.at("channel").get<std::string>());
        record.transfer_type = transfer_type_from_string(object.at("transfer_type").get<std::string>());
        record.src_terminal = addr_from_json(object, "src_terminal", line_no);
        record.src_subaddress = addr_from_json(object, "src_subaddress", line_no);
        record.dst_terminal = addr_from_json(object, "dst_terminal", line_no);
        record.dst_subaddress = addr_from_json(object, "dst_subaddress", line_no);
        std::uint64_t wc = object.at("word_count").get<std::uint64_t>();
        if (wc > 255)
            throw ValidationError("word_count out of range");
        record.word_count = static_cast<std::uint8_t>(wc);
        record.is_mode_code = object.at("is_mode_code").get<bool>();
        record.truth_label = label_from_string(object.at("truth_label").get<std::string>());
        validate_record(record);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_no, e.what());
    }
    return record;
}

}  // namespace

MessageRecord parse_record(const std::string& line, std::size_t line_no) {
    return record_from_json(parse_json_line(line, line_no), line_no);
}

void write_log(const std::vector<MessageRecord>& records, const std::filesystem::path& path) {
    write_log(records, {}, path);
}

void write_log(const std::vector<MessageRecord>& records, const std::vector<Label>& predicted,
               const std::filesystem::path& path) {
    if (!predicted.empty() && predicted.size() != records.size())
        throw ValidationError("predicted label count does not match record count");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path.string());
    std::int64_t previous = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(records[i]);
        if (i > 0 && records[i].timestamp_us <= previous)
            throw ValidationError("timestamps not strictly increasing at record " + std::to_string(i + 1));
        previous = records[i].timestamp_us;
        out << (predicted.empty() ? serialize_record(records[i])
                                  : serialize_record(records[i], predicted[i]));
    }
    if (!out)
        throw Error("write failed: " + path.string());
}

LogReadResult read_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open for reading: " + path.string());
    LogReadResult result;
    std::string line;
    std::size_t line_no = 0;
    bool saw_predicted = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        nlohmann::json object = parse_json_line(line, line_no);
        MessageRecord record = record_from_json(object, line_no);
        // predicted_label must appear on every line or on none.
        bool has_predicted = object.contains("predicted_label");
        if (result.records.empty())
            saw_predicted = has_predicted;
        else if (saw_predicted != has_predicted)
            throw ParseError(line_no, "predicted_label present on some lines but not all");
        if (has_predicted)
            result.predicted.push_back(label_from_string(object.at("predicted_label").get<std::string>()));
        if (!result.records.empty() && record.timestamp_us <= result.records.back().timestamp_us)
            throw ParseError(line_no, "timestamps not strictly increasing");
        result.records.push_back(std::move(record));
    }
    return result;
}

}  // namespace milbus
