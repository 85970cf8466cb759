#include <doctest.h>

#include <set>

#include "milbus/errors.hpp"
#include "milbus/record.hpp"

using namespace milbus;

namespace {

MessageRecord rt_to_bc_record(std::int64_t ts) {
    MessageRecord record;
    record.timestamp_us = ts;
    record.transfer_type = TransferType::RtToBc;
    record.src_terminal = 3;
    record.src_subaddress = 1;
    record.word_count = 4;
    return record;
}

}  // namespace

TEST_CASE("message_id_of keeps the feature tuple and drops time and label") {
    MessageRecord a = rt_to_bc_record(1000);
    MessageRecord b = rt_to_bc_record(987654);
    b.truth_label = Label::Anomaly;
    CHECK(message_id_of(a) == message_id_of(b));

    MessageId id = message_id_of(a);
    CHECK(id.src_terminal == BusAddr{3});
    CHECK(id.src_subaddress == BusAddr{1});
    CHECK_FALSE(id.dst_terminal.has_value());
    CHECK_FALSE(id.dst_subaddress.has_value());
    CHECK(id.word_count == 4);
    CHECK_FALSE(id.is_mode_code);
}

TEST_CASE("records differing in word count are different messages") {
    MessageRecord a = rt_to_bc_record(0);
    MessageRecord b = rt_to_bc_record(0);
    b.word_count = 5;
    CHECK(message_id_of(a) != message_id_of(b));
}

TEST_CASE("pack is injective across distinct ids") {
    std::set<std::uint32_t> seen;
    std::vector<MessageId> ids;
    for (int src = -1; src <= 30; src += 7)
        for (int dst = -1; dst <= 30; dst += 5)
            for (int wc = 1; wc <= 32; wc += 9) {
                MessageId id;
                if (src >= 0) {
                    id.src_terminal = static_cast<std::uint8_t>(src);
                    id.src_subaddress = 1;
                }
                if (dst >= 0) {
                    id.dst_terminal = static_cast<std::uint8_t>(dst);
                    id.dst_subaddress = 2;
                }
                id.word_count = static_cast<std::uint8_t>(wc);
                ids.push_back(id);
            }
    for (const MessageId& id : ids)
        seen.insert(id.pack());
    CHECK(seen.size() == ids.size());
}

TEST_CASE("validation enforces the N/A pattern per transfer type") {
    MessageRecord record = rt_to_bc_record(0);
    CHECK_NOTHROW(validate_record(record));

    SUBCASE("RT_to_BC must not carry destination fields") {
        record.dst_terminal = 4;
        record.dst_subaddress = 1;
        CHECK_THROWS_AS(validate_record(record), ValidationError);
    }
    SUBCASE("BC_to_RT has no source fields") {
        record.transfer_type = TransferType::BcToRt;
        CHECK_THROWS_AS(validate_record(record), ValidationError);
        record.src_terminal.reset();
        record.src_subaddress.reset();
        record.dst_terminal = 4;
        record.dst_subaddress = 1;
        CHECK_NOTHROW(validate_record(record));
    }
    SUBCASE("broadcast collapses dst_terminal to N/A") {
        record.transfer_type = TransferType::Broadcast;
        record.src_terminal.reset();
        record.src_subaddress.reset();
        record.dst_subaddress = 12;
        CHECK_NOTHROW(validate_record(record));
        record.dst_terminal = 31;
        CHECK_THROWS_AS(validate_record(record), ValidationError);
    }
}

TEST_CASE("terminal 31 never names a concrete terminal") {
    MessageRecord record = rt_to_bc_record(0);
    record.src_terminal = 31;
    CHECK_THROWS_AS(validate_record(record), ValidationError);
}

TEST_CASE("word count and subaddress ranges") {
    MessageRecord record = rt_to_bc_record(0);
    record.word_count = 0;
    CHECK_THROWS_AS(validate_record(record), ValidationError);
    record.word_count = 33;
    CHECK_THROWS_AS(validate_record(record), ValidationError);
    record.word_count = 32;
    CHECK_NOTHROW(validate_record(record));
    // Subaddress 0 and 31 are reserved for mode codes.
    record.src_subaddress = 0;
    CHECK_THROWS_AS(validate_record(record), ValidationError);
}

TEST_CASE("mode code records") {
    MessageRecord record;
    record.transfer_type = TransferType::ModeCode;
    record.dst_terminal = 2;
    record.dst_subaddress = 0;
    record.word_count = 17;  // the mode code number
    record.is_mode_code = true;
    CHECK_NOTHROW(validate_record(record));

    record.is_mode_code = false;
    CHECK_THROWS_AS(validate_record(record), ValidationError);
    record.is_mode_code = true;
    record.dst_subaddress = 5;
    CHECK_THROWS_AS(validate_record(record), ValidationError);
    record.dst_subaddress = 31;
    CHECK_NOTHROW(validate_record(record));
    record.word_count = 32;  // mode codes stop at 31
    CHECK_THROWS_AS(validate_record(record), ValidationError);
}
