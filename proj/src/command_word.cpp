#include "milbus/command_word.hpp"

#include <string>

#include "milbus/errors.hpp"

namespace milbus {

namespace {

void check_five_bits(unsigned value, const char* field) {
    if (value > 31)
        throw ValidationError(std::string(field) + " out of range (0..31): " + std::to_string(value));
}

}  // namespace

std::uint16_t encode_command_word(const CommandWordFields& fields) {
    check_five_bits(fields.terminal_address, "terminal_address");
    check_five_bits(fields.subaddress_mode, "subaddress_mode");
    check_five_bits(fields.word_count_or_mode, "word_count_or_mode");
    return static_cast<std::uint16_t>((fields.terminal_address << 11) |
                                      (static_cast<unsigned>(fields.transmit) << 10) |
                                      (fields.subaddress_mode << 5) |
                                      fields.word_count_or_mode);
}

CommandWordFields decode_command_word(std::uint16_t payload) {
    CommandWordFields fields;
    fields.terminal_address = static_cast<std::uint8_t>((payload >> 11) & 0x1f);
    fields.transmit = ((payload >> 10) & 0x1) != 0;
    fields.subaddress_mode = static_cast<std::uint8_t>((payload >> 5) & 0x1f);
    fields.word_count_or_mode = static_cast<std::uint8_t>(payload & 0x1f);
    return fields;
}

}  // namespace milbus
