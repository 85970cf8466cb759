#include "milbus/record.hpp"

#include <string>

#include "milbus/errors.hpp"

namespace milbus {

namespace {

constexpr std::uint32_t kNaSlot = 32;  // addresses are 0..31, 32 encodes N/A

std::uint32_t addr_slot(const BusAddr& addr) {
    return addr ? *addr : kNaSlot;
}

void check_addr(const BusAddr& addr, bool expect_present, bool terminal, const char* field) {
    if (expect_present != addr.has_value())
        throw ValidationError(std::string(field) + (expect_present ? " must be present" : " must be N/A") +
                              " for this transfer type");
    if (!addr)
        return;
    if (*addr > 31)
        throw ValidationError(std::string(field) + " out of range (0..31): " + std::to_string(*addr));
    if (terminal && *addr == 31)
        throw ValidationError(std::string(field) + " = 31 is the broadcast address, not a terminal");
}

}  // namespace

std::uint32_t MessageId::pack() const {
    std::uint32_t value = addr_slot(src_terminal);
    value = value * 33 + addr_slot(src_subaddress);
    value = value * 33 + addr_slot(dst_terminal);
    value = value * 33 + addr_slot(dst_subaddress);
    value = value * 2 + static_cast<std::uint32_t>(channel);
    value = value * 2 + static_cast<std::uint32_t>(is_mode_code);
    value = value * 33 + word_count;
    return value;
}

MessageId message_id_of(const MessageRecord& record) {
    MessageId id;
    id.src_terminal = record.src_terminal;
    id.src_subaddress = record.src_subaddress;
    id.dst_terminal = record.dst_terminal;
    id.dst_subaddress = record.dst_subaddress;
    id.channel = record.channel;
    id.word_count = record.word_count;
    id.is_mode_code = record.is_mode_code;
    return id;
}

MessageRecord make_record(const MessageId& id, TransferType transfer_type, std::int64_t timestamp_us,
                          Label truth_label) {
    MessageRecord record;
    record.timestamp_us = timestamp_us;
    record.channel = id.channel;
    record.transfer_type = transfer_type;
    record.src_terminal = id.src_terminal;
    record.src_subaddress = id.src_subaddress;
    record.dst_terminal = id.dst_terminal;
    record.dst_subaddress = id.dst_subaddress;
    record.word_count = id.word_count;
    record.is_mode_code = id.is_mode_code;
    record.truth_label = truth_label;
    return record;
}

void validate_record(const MessageRecord& record) {
    bool src_present = false;
    bool dst_terminal_present = false;
    bool dst_sub_present = false;
    switch (record.transfer_type) {
        case TransferType::BcToRt:
            src_present = false;
            dst_terminal_present = dst_sub_present = true;
            break;
        case TransferType::RtToBc:
            src_present = true;
            dst_terminal_present = dst_sub_present = false;
            break;
        case TransferType::RtToRt:
            src_present = true;
            dst_terminal_present = dst_sub_present = true;
            break;
        case TransferType::ModeCode:
            src_present = false;
            dst_terminal_present = dst_sub_present = true;
            break;
        case TransferType::Broadcast:
            // dst_terminal 31 collapses to N/A; the subaddress stays real.
            src_present = false;
            dst_terminal_present = false;
            dst_sub_present = true;
            break;
    }
    check_addr(record.src_terminal, src_present, true, "src_terminal");
    check_addr(record.src_subaddress, src_present, false, "src_subaddress");
    check_addr(record.dst_terminal, dst_terminal_present, true, "dst_terminal");
    check_addr(record.dst_subaddress, dst_sub_present, false, "dst_subaddress");

    if (record.transfer_type == TransferType::ModeCode && !record.is_mode_code)
        throw ValidationError("ModeCode transfer requires is_mode_code = true");
    if ((record.transfer_type == TransferType::BcToRt || record.transfer_type == TransferType::RtToBc ||
         record.transfer_type == TransferType::RtToRt) &&
        record.is_mode_code)
        throw ValidationError("is_mode_code = true requires a ModeCode or Broadcast transfer");

    if (record.is_mode_code) {
        if (record.word_count > 31)
            throw ValidationError("mode code number out of range (0..31): " +
                                  std::to_string(record.word_count));
        if (record.dst_subaddress && *record.dst_subaddress != 0 && *record.dst_subaddress != 31)
            throw ValidationError("mode code subaddress must be 0 or 31");
    } else {
        if (record.word_count < 1 || record.word_count > 32)
            throw ValidationError("word_count out of range (1..32): " + std::to_string(record.word_count));
        for (const BusAddr* sub : {&record.src_subaddress, &record.dst_subaddress})
            if (*sub && (**sub == 0 || **sub == 31))
                throw ValidationError("subaddress 0 or 31 marks a mode code");
    }
}

const char* to_string(Channel value) {
    return value == Channel::A ? "A" : "B";
}

const char* to_string(TransferType value) {
    switch (value) {
        case TransferType::BcToRt: return "BC_to_RT";
        case TransferType::RtToBc: return "RT_to_BC";
        case TransferType::RtToRt: return "RT_to_RT";
        case TransferType::ModeCode: return "ModeCode";
        case TransferType::Broadcast: return "Broadcast";
    }
    return "?";
}

const char* to_string(Label value) {
    switch (value) {
        case Label::Benign: return "Benign";
        case Label::Anomaly: return "Anomaly";
        case Label::Unlabeled: return "Unlabeled";
    }
    return "?";
}

Channel channel_from_string(const std::string& text) {
    if (text == "A") return Channel::A;
    if (text == "B") return Channel::B;
    throw ValidationError("unknown channel: " + text);
}

TransferType transfer_type_from_string(const std::string& text) {
    if (text == "BC_to_RT") return TransferType::BcToRt;
    if (text == "RT_to_BC") return TransferType::RtToBc;
    if (text == "RT_to_RT") return TransferType::RtToRt;
    if (text == "ModeCode") return TransferType::ModeCode;
    if (text == "Broadcast") return TransferType::Broadcast;
    throw ValidationError("unknown transfer_type: " + text);
}

Label label_from_string(const std::string& text) {
    if (text == "Benign") return Label::Benign;
    if (text == "Anomaly") return Label::Anomaly;
    if (text == "Unlabeled") return Label::Unlabeled;
    throw ValidationError("unknown label: " + text);
}

}  // namespace milbus
