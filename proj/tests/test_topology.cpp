#include <doctest.h>

#include <set>

#include "milbus/errors.hpp"
#include "milbus/topology.hpp"
#include "support/temp_files.hpp"

using namespace milbus;
using namespace milbus::testsupport;

TEST_CASE("topology_1 is the 19-component schedule") {
    TopologySpec spec = topology_1();
    CHECK_NOTHROW(validate_topology(spec));
    CHECK(spec.major_frame_us == 80000);
    REQUIRE(spec.entries.size() == 21);
    CHECK(spec.rt_addresses == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12,
                                             13, 14, 15, 16});

    std::set<std::uint32_t> ids;
    int slow = 0;
    for (std::size_t k = 0; k < spec.entries.size(); ++k) {
        const ScheduleEntry& entry = spec.entries[k];
        ids.insert(entry.message.pack());
        CHECK(entry.offset_us == static_cast<std::int64_t>(k) * 80000 / 21);
        if (entry.period_us == 80000)
            ++slow;
        else
            CHECK(entry.period_us == 20000);
    }
    CHECK(ids.size() == 21);
    CHECK(slow == 1);
    CHECK(spec.entries.back().transfer_type == TransferType::Broadcast);
}

TEST_CASE("topology_2 is the 4-component schedule") {
    TopologySpec spec = topology_2();
    CHECK_NOTHROW(validate_topology(spec));
    CHECK(spec.major_frame_us == 20000);
    REQUIRE(spec.entries.size() == 5);
    std::set<std::uint32_t> ids;
    for (std::size_t k = 0; k < spec.entries.size(); ++k) {
        ids.insert(spec.entries[k].message.pack());
        CHECK(spec.entries[k].offset_us == static_cast<std::int64_t>(k) * 4000);
        CHECK(spec.entries[k].period_us == 20000);
    }
    CHECK(ids.size() == 5);
}

TEST_CASE("validation rejects inconsistent schedules") {
    TopologySpec spec = topology_2();

    SUBCASE("period must divide the major frame") {
        spec.entries[0].period_us = 3000;
        CHECK_THROWS_AS(validate_topology(spec), ValidationError);
    }
    SUBCASE("offset must lie within the frame") {
        spec.entries[1].offset_us = 20000;
        CHECK_THROWS_AS(validate_topology(spec), ValidationError);
    }
    SUBCASE("at least one entry") {
        spec.entries.clear();
        CHECK_THROWS_AS(validate_topology(spec), ValidationError);
    }
    SUBCASE("rt addresses are capped at 30") {
        spec.rt_addresses.insert(31);
        CHECK_THROWS_AS(validate_topology(spec), ValidationError);
    }
    SUBCASE("aperiodic probability range") {
        AperiodicEntry extra;
        extra.message = spec.entries[4].message;
        extra.message.dst_subaddress = 9;
        extra.transfer_type = TransferType::BcToRt;
        extra.slot_offset_us = 600;
        extra.probability = 1.5;
        spec.aperiodic.push_back(extra);
        CHECK_THROWS_AS(validate_topology(spec), ValidationError);
        spec.aperiodic.back().probability = 0.5;
        CHECK_NOTHROW(validate_topology(spec));
    }
}

TEST_CASE("save/load round-trips a topology file") {
    TopologySpec spec = topology_1();
    AperiodicEntry extra;
    extra.message.dst_terminal = 10;
    extra.message.dst_subaddress = 9;
    extra.message.word_count = 1;
    extra.transfer_type = TransferType::BcToRt;
    extra.slot_offset_us = 600;
    extra.probability = 0.4;
    spec.aperiodic.push_back(extra);

    auto path = unique_path("topology", ".json");
    save_topology(spec, path);
    TopologySpec loaded = load_topology(path);

    CHECK(loaded.name == spec.name);
    CHECK(loaded.major_frame_us == spec.major_frame_us);
    CHECK(loaded.rt_addresses == spec.rt_addresses);
    REQUIRE(loaded.entries.size() == spec.entries.size());
    for (std::size_t i = 0; i < spec.entries.size(); ++i) {
        CHECK(loaded.entries[i].message == spec.entries[i].message);
        CHECK(loaded.entries[i].transfer_type == spec.entries[i].transfer_type);
        CHECK(loaded.entries[i].offset_us == spec.entries[i].offset_us);
        CHECK(loaded.entries[i].period_us == spec.entries[i].period_us);
    }
    REQUIRE(loaded.aperiodic.size() == 1);
    CHECK(loaded.aperiodic[0].message == extra.message);
    CHECK(loaded.aperiodic[0].slot_offset_us == 600);
    CHECK(loaded.aperiodic[0].probability == doctest::Approx(0.4));
}

TEST_CASE("loading a malformed topology file fails cleanly") {
    CHECK_THROWS_AS(load_topology(tmp_dir() / "missing_topology.json"), Error);
    auto path = unique_path("bad_topology", ".json");
    write_text(path, "{\"name\": \"x\"");
    CHECK_THROWS_AS(load_topology(path), ParseError);
    write_text(path, "{\"name\": \"x\", \"major_frame_us\": 0, \"rt_addresses\": [], \"entries\": []}");
    CHECK_THROWS_AS(load_topology(path), ValidationError);
}
