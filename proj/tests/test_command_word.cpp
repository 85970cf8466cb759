#include <doctest.h>

#include "milbus/command_word.hpp"
#include "milbus/errors.hpp"

using namespace milbus;

TEST_CASE("command word packs fields MSB first") {
    // Hand-packed expectations.
    CHECK(encode_command_word({31, false, 0, 0}) == 0b1111100000000000);
    CHECK(encode_command_word({0, true, 1, 2}) == 0b0000010000100010);
    CHECK(encode_command_word({0, false, 0, 0}) == 0);
    CHECK(encode_command_word({31, true, 31, 31}) == 0xffff);
    CHECK(encode_command_word({5, false, 3, 9}) ==
          static_cast<std::uint16_t>((5u << 11) | (3u << 5) | 9u));
}

TEST_CASE("command word decode inverts encode over the whole space") {
    for (unsigned payload = 0; payload <= 0xffff; ++payload) {
        CommandWordFields fields = decode_command_word(static_cast<std::uint16_t>(payload));
        CHECK(encode_command_word(fields) == payload);
    }
}

TEST_CASE("decode field extraction") {
    CommandWordFields fields = decode_command_word(0b0000010000100010);
    CHECK(fields.terminal_address == 0);
    CHECK(fields.transmit);
    CHECK(fields.subaddress_mode == 1);
    CHECK(fields.word_count_or_mode == 2);
    CHECK_FALSE(fields.is_mode_code());
}

TEST_CASE("mode code flag follows the subaddress convention") {
    CHECK(decode_command_word(encode_command_word({4, false, 0, 17})).is_mode_code());
    CHECK(decode_command_word(encode_command_word({4, false, 31, 17})).is_mode_code());
    CHECK_FALSE(decode_command_word(encode_command_word({4, false, 15, 17})).is_mode_code());
}

TEST_CASE("encode rejects out-of-range fields by name") {
    CHECK_THROWS_WITH_AS(encode_command_word({32, false, 0, 0}),
                         doctest::Contains("terminal_address"), ValidationError);
    CHECK_THROWS_WITH_AS(encode_command_word({0, false, 40, 0}),
                         doctest::Contains("subaddress_mode"), ValidationError);
    CHECK_THROWS_WITH_AS(encode_command_word({0, false, 0, 99}),
                         doctest::Contains("word_count_or_mode"), ValidationError);
}
