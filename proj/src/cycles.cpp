#include "milbus/cycles.hpp"

#include <algorithm>

#include "milbus/errors.hpp"

namespace milbus {

std::vector<CycleCluster> cluster_deltas(std::vector<std::int64_t> deltas, std::int64_t tolerance_us) {
    if (tolerance_us < 0)
        throw ValidationError("tolerance_us must be non-negative");
    std::vector<CycleCluster> clusters;
    if (deltas.empty())
        return clusters;
    std::sort(deltas.begin(), deltas.end());
    CycleCluster current{deltas[0], 1, deltas[0], deltas[0]};
    for (std::size_t i = 1; i < deltas.size(); ++i) {
        if (deltas[i] - deltas[i - 1] > tolerance_us) {
            clusters.push_back(current);
            current = CycleCluster{deltas[i], 1, deltas[i], deltas[i]};
        } else {
            current.sum += deltas[i];
            current.count += 1;
            current.max = deltas[i];
        }
    }
    clusters.push_back(current);
    return clusters;
}

std::vector<double> extract_time_cycles(const std::vector<std::int64_t>& timestamps,
                                        std::int64_t tolerance_us) {
    std::vector<std::int64_t> deltas;
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] < timestamps[i - 1])
            throw ValidationError("timestamps must be ascending");
        deltas.push_back(timestamps[i] - timestamps[i - 1]);
    }
    std::vector<double> cycles;
    for (const CycleCluster& cluster : cluster_deltas(std::move(deltas), tolerance_us))
        cycles.push_back(cluster.mean());
    return cycles;
}

std::vector<double> CycleSet::cycles_us() const {
    std::vector<double> cycles;
    cycles.reserve(clusters.size());
    for (const CycleCluster& cluster : clusters)
        cycles.push_back(cluster.mean());
    return cycles;
}

const char* to_string(MessageClass value) {
    return value == MessageClass::Periodic ? "periodic" : "aperiodic";
}

MessageClass message_class_from_string(const std::string& text) {
    if (text == "periodic") return MessageClass::Periodic;
    if (text == "aperiodic") return MessageClass::Aperiodic;
    throw ValidationError("unknown message class: " + text);
}

MessageClass classify_message(const CycleSet& cycle_set, int rare_count_threshold,
                              int max_cycles_threshold) {
    if (cycle_set.occurrence_count < rare_count_threshold)
        return MessageClass::Aperiodic;
    if (static_cast<int>(cycle_set.clusters.size()) > max_cycles_threshold)
        return MessageClass::Aperiodic;
    // A message seen fewer than twice has no delta evidence; without any
    // cycle it cannot be tracked as periodic.
    if (cycle_set.clusters.empty())
        return MessageClass::Aperiodic;
    return MessageClass::Periodic;
}

}  // namespace milbus
