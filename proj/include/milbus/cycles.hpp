#pragma once

#include <cstdint>
#include <vector>

#include "milbus/record.hpp"

namespace milbus {

// One cluster of inter-arrival deltas. Exact integer statistics; the
// representative cycle value is the cluster mean.
struct CycleCluster {
    std::int64_t sum = 0;    // sum of member deltas
    std::int64_t count = 0;  // number of member deltas
    std::int64_t min = 0;
    std::int64_t max = 0;

    double mean() const { return static_cast<double>(sum) / static_cast<double>(count); }
};

// Clusters delta values: sort ascending, then cut wherever two consecutive
// sorted values differ by more than tolerance_us. Returns clusters in
// ascending order; consecutive cluster ranges are separated by more than
// the tolerance.
std::vector<CycleCluster> cluster_deltas(std::vector<std::int64_t> deltas, std::int64_t tolerance_us);

// Consecutive-timestamp deltas of one message, clustered. Fewer than two
// timestamps yield no cycles. Returns the representative values ascending.
std::vector<double> extract_time_cycles(const std::vector<std::int64_t>& timestamps,
                                        std::int64_t tolerance_us);

// Per-message timing profile learned from training data.
struct CycleSet {
    MessageId message_id;
    std::vector<CycleCluster> clusters;  // ascending
    std::int64_t occurrence_count = 0;

    std::vector<double> cycles_us() const;  // representative values
};

enum class MessageClass : std::uint8_t { Periodic, Aperiodic };

const char* to_string(MessageClass value);
MessageClass message_class_from_string(const std::string& text);

// Aperiodic when the message is rare (fewer occurrences than
// rare_count_threshold), shows more cycles than max_cycles_threshold, or
// occurred too few times to exhibit any cycle at all.
MessageClass classify_message(const CycleSet& cycle_set, int rare_count_threshold,
                              int max_cycles_threshold);

}  // namespace milbus
