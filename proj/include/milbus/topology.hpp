#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "milbus/record.hpp"

namespace milbus {

// One periodic message in the bus controller's schedule. Instances occur at
// every t >= 0 with t == offset_us (mod period_us); offset_us is the phase
// within the major frame.
struct ScheduleEntry {
    MessageId message;
    TransferType transfer_type = TransferType::BcToRt;
    std::int64_t offset_us = 0;
    std::int64_t period_us = 0;
};

// Optional event-driven traffic: with the given probability per major frame
// the message is emitted at frame_start + slot_offset_us.
struct AperiodicEntry {
    MessageId message;
    TransferType transfer_type = TransferType::BcToRt;
    std::int64_t slot_offset_us = 0;
    double probability = 0.0;
};

struct TopologySpec {
    std::string name;
    std::int64_t major_frame_us = 0;
    std::vector<ScheduleEntry> entries;
    std::set<int> rt_addresses;
    std::vector<AperiodicEntry> aperiodic;
};

// 19-component testbed: BC, BM, 16 benign RTs and a compromised RT. 21
// scheduled messages in an 80 ms major frame: 20 at 20 ms, one at 80 ms.
TopologySpec topology_1();

// 4-component testbed: BC, BM, one benign RT and a compromised RT. 5
// scheduled messages, all at the 20 ms major frame rate.
TopologySpec topology_2();

// Checks frame/offset/period consistency and per-entry message validity.
// Throws ValidationError.
void validate_topology(const TopologySpec& topology);

// Loads a TopologySpec from a JSON config file mirroring the struct fields.
TopologySpec load_topology(const std::filesystem::path& path);

// Writes the topology in the same format load_topology reads.
void save_topology(const TopologySpec& topology, const std::filesystem::path& path);

}  // namespace milbus
