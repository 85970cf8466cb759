#pragma once

#include <cstdint>

namespace milbus {

// Decoded content of a 1553 command word (the 16 bits after sync/parity).
// Layout, MSB first: terminal address (5) | T/R (1) | subaddress/mode (5) |
// word count/mode code (5).
struct CommandWordFields {
    std::uint8_t terminal_address = 0;   // 0..31, 31 = broadcast
    bool transmit = false;               // T/R bit
    std::uint8_t subaddress_mode = 0;    // 0..31; 0 or 31 marks a mode code
    std::uint8_t word_count_or_mode = 0; // 0..31; word count 0 means 32 data words

    bool is_mode_code() const { return subaddress_mode == 0 || subaddress_mode == 31; }
};

// Packs fields into the 16-bit payload. Throws ValidationError naming the
// offending field when a value exceeds its 5-bit range.
std::uint16_t encode_command_word(const CommandWordFields& fields);

// Inverse of encode_command_word; total over all 65536 payloads.
CommandWordFields decode_command_word(std::uint16_t payload);

}  // namespace milbus
