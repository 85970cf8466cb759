#pragma once

#include <cstdint>
#include <vector>

#include "milbus/topology.hpp"

namespace milbus {

enum class AttackKind { None, Spoof1, Spoof2, Dos };

const char* to_string(AttackKind value);
AttackKind attack_kind_from_string(const std::string& text);

// Attack-specific knobs. Rates control how many anomalous records enter the
// log per major frame (or per second for the flood).
struct AttackParams {
    int spoof1_per_frame = 1;          // fake data retransmissions per major frame
    double spoof2_per_frame = 1.0;     // forged broadcasts per major frame (fractional ok)
    std::uint8_t spoof2_subaddress = 10;
    std::uint8_t spoof2_word_count = 9;  // must differ from every scheduled broadcast
    double dos_rate_per_sec = 500.0;   // flood command rate inside the attack window
};

struct ScenarioConfig {
    TopologySpec topology;
    AttackKind attack = AttackKind::None;
    std::int64_t attack_start_us = 0;  // [start, end) half-open window
    std::int64_t attack_end_us = 0;
    std::int64_t jitter_us = 0;        // per-instance uniform jitter in [-j, +j]
    std::uint64_t seed = 0;
    AttackParams params;
};

// Config sanity: topology valid, jitter below the 40 us clustering
// tolerance, attack window well-formed and inside the duration.
void validate_scenario(const ScenarioConfig& config, std::int64_t duration_us);

// Benign schedule expansion over [0, duration_us): each entry instance at
// t == offset (mod period) plus jitter, plus any aperiodic entries that
// fire. Records sorted by timestamp, all labeled Benign. duration 0 yields
// an empty log; durations in (0, major_frame) are rejected.
std::vector<MessageRecord> generate_benign(const ScenarioConfig& config, std::int64_t duration_us);

struct InjectionReport {
    std::vector<MessageRecord> log;  // benign plus injected, sorted
    int injected = 0;
    int skipped_frames = 0;  // frames with no usable idle slot
};

// Fake data retransmission: within the attack window, copies of the data
// distribution message (the first BC_to_RT scheduled after the first
// RT_to_BC) are inserted into idle gaps shortly after each genuine
// instance. Injected records are labeled Anomaly; benign records are never
// reordered or relabeled.
InjectionReport inject_spoof1(std::vector<MessageRecord> benign, const ScenarioConfig& config);

// Forged broadcast: novel-word-count Broadcast records at an attacker slot
// near the end of each frame in the window, spoof2_per_frame per frame on
// average (deterministic fractional accumulation).
InjectionReport inject_spoof2(std::vector<MessageRecord> benign, const ScenarioConfig& config);

// Command flood: BC_to_RT records with seeded random destination terminal
// (0..30), subaddress and word count at dos_rate_per_sec inside the window.
// An injected timestamp colliding with an existing one is pushed forward
// +1 us until the order is strict again.
InjectionReport inject_dos(std::vector<MessageRecord> benign, const ScenarioConfig& config);

// generate_benign plus the configured attack.
InjectionReport simulate(const ScenarioConfig& config, std::int64_t duration_us);

}  // namespace milbus
