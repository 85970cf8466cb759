#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace milbus {

enum class Channel : std::uint8_t { A, B };

enum class TransferType : std::uint8_t { BcToRt, RtToBc, RtToRt, ModeCode, Broadcast };

enum class Label : std::uint8_t { Benign, Anomaly, Unlabeled };

// A terminal address or subaddress; nullopt = N/A (the bus controller side).
using BusAddr = std::optional<std::uint8_t>;

// The feature tuple that identifies a message type on the bus. Two records
// with equal MessageId are instances of the same message.
struct MessageId {
    BusAddr src_terminal;      // data source RT, N/A when the BC is the source
    BusAddr src_subaddress;
    BusAddr dst_terminal;      // receiving RT, N/A when the BC receives or broadcast
    BusAddr dst_subaddress;
    Channel channel = Channel::A;
    std::uint8_t word_count = 0;  // data words 0..32, or the mode code number
    bool is_mode_code = false;

    auto operator<=>(const MessageId&) const = default;

    // Injective 32-bit packing: four 6-bit address slots (32 = N/A),
    // channel, mode flag, 6-bit word count.
    std::uint32_t pack() const;
};

struct MessageIdHash {
    std::size_t operator()(const MessageId& id) const {
        return std::hash<std::uint32_t>{}(id.pack());
    }
};

// One monitored bus message as written by the bus monitor.
struct MessageRecord {
    std::int64_t timestamp_us = 0;
    Channel channel = Channel::A;
    TransferType transfer_type = TransferType::BcToRt;
    BusAddr src_terminal;
    BusAddr src_subaddress;
    BusAddr dst_terminal;
    BusAddr dst_subaddress;
    std::uint8_t word_count = 0;
    bool is_mode_code = false;
    Label truth_label = Label::Benign;

    bool operator==(const MessageRecord&) const = default;
};

// Projects a record onto its MessageId. Pure; ignores timestamp and label.
MessageId message_id_of(const MessageRecord& record);

// Builds a record from a message identity plus the wire-level transfer type.
MessageRecord make_record(const MessageId& id, TransferType transfer_type, std::int64_t timestamp_us,
                          Label truth_label = Label::Benign);

// Structural checks: address ranges, terminal 31 never names a concrete
// terminal, N/A pattern consistent with transfer_type, word count range,
// mode code subaddress convention. Throws ValidationError.
void validate_record(const MessageRecord& record);

const char* to_string(Channel value);
const char* to_string(TransferType value);
const char* to_string(Label value);
Channel channel_from_string(const std::string& text);
TransferType transfer_type_from_string(const std::string& text);
Label label_from_string(const std::string& text);

}  // namespace milbus
