#include "milbus/simulator.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "milbus/errors.hpp"

namespace milbus {

namespace {

constexpr std::int64_t kClusterToleranceUs = 40;
constexpr std::int64_t kMinIdleGapUs = 200;  // smallest gap usable for an insertion

// Merges already-sorted injected records into the benign log. Ties and
// order violations are resolved by pushing the injected record forward in
// 1 us steps; benign records are never moved.
std::vector<MessageRecord> merge_injected(std::vector<MessageRecord> benign,
                                          std::vector<MessageRecord> injected) {
    std::vector<MessageRecord> merged;
    merged.reserve(benign.size() + injected.size());
    std::size_t bi = 0;
    std::size_t ii = 0;
    auto last_ts = [&]() -> std::int64_t {
        return merged.empty() ? std::numeric_limits<std::int64_t>::min() : merged.back().timestamp_us;
    };
    while (bi < benign.size() || ii < injected.size()) {
        bool take_benign;
        if (bi == benign.size())
            take_benign = false;
        else if (ii == injected.size())
            take_benign = true;
        else
            take_benign = benign[bi].timestamp_us <= injected[ii].timestamp_us;
        if (take_benign) {
            merged.push_back(benign[bi++]);
        } else {
            MessageRecord record = injected[ii++];
            if (record.timestamp_us <= last_ts())
                record.timestamp_us = last_ts() + 1;
            // The bump may push the record past the next benign timestamp;
            // keep deferring to benign records until the slot is free.
            while (bi < benign.size() && benign[bi].timestamp_us <= record.timestamp_us) {
                if (benign[bi].timestamp_us == record.timestamp_us)
                    record.timestamp_us += 1;
                else
                    merged.push_back(benign[bi++]);
            }
            merged.push_back(record);
        }
    }
    return merged;
}

}  // namespace

const char* to_string(AttackKind value) {
    switch (value) {
        case AttackKind::None: return "none";
        case AttackKind::Spoof1: return "spoof1";
        case AttackKind::Spoof2: return "spoof2";
        case AttackKind::Dos: return "dos";
    }
    return "?";
}

AttackKind attack_kind_from_string(const std::string& text) {
    if (text == "none") return AttackKind::None;
    if (text == "spoof1") return AttackKind::Spoof1;
    if (text == "spoof2") return AttackKind::Spoof2;
    if (text == "dos") return AttackKind::Dos;
    throw ValidationError("unknown attack: " + text);
}

void validate_scenario(const ScenarioConfig& config, std::int64_t duration_us) {
    validate_topology(config.topology);
    if (config.jitter_us < 0 || config.jitter_us >= kClusterToleranceUs)
        throw ValidationError("jitter_us must lie in [0, 40)");
    if (duration_us != 0 && duration_us < config.topology.major_frame_us)
        throw ValidationError("duration must cover at least one major frame");
    if (config.attack != AttackKind::None) {
        if (config.attack_start_us < 0 || config.attack_start_us >= config.attack_end_us)
            throw ValidationError("attack window must satisfy 0 <= start < end");
        if (config.attack_end_us > duration_us)
            throw ValidationError("attack window must end within the duration");
        if (config.params.spoof1_per_frame < 1)
            throw ValidationError("spoof1_per_frame must be at least 1");
        if (config.params.spoof2_per_frame <= 0.0)
            throw ValidationError("spoof2_per_frame must be positive");
        if (config.params.dos_rate_per_sec <= 0.0)
            throw ValidationError("dos_rate_per_sec must be positive");
    }
}

std::vector<MessageRecord> generate_benign(const ScenarioConfig& config, std::int64_t duration_us) {
    if (duration_us == 0)
        return {};
    validate_scenario(config, duration_us);
    const TopologySpec& topology = config.topology;
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::int64_t> jitter(-config.jitter_us, config.jitter_us);

    std::vector<MessageRecord> log;
    for (const ScheduleEntry& entry : topology.entries) {
        std::int64_t phase = entry.offset_us % entry.period_us;
        for (std::int64_t t = phase; t < duration_us; t += entry.period_us) {
            std::int64_t ts = t + (config.jitter_us ? jitter(rng) : 0);
            if (ts < 0)
                ts = 0;
            log.push_back(make_record(entry.message, entry.transfer_type, ts));
        }
    }
    if (!topology.aperiodic.empty()) {
        std::int64_t frames = (duration_us + topology.major_frame_us - 1) / topology.major_frame_us;
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (const AperiodicEntry& entry : topology.aperiodic) {
            for (std::int64_t frame = 0; frame < frames; ++frame) {
                if (coin(rng) >= entry.probability)
                    continue;
                std::int64_t t = frame * topology.major_frame_us + entry.slot_offset_us;
                if (t >= duration_us)
                    continue;
                std::int64_t ts = t + (config.jitter_us ? jitter(rng) : 0);
                if (ts < 0)
                    ts = 0;
                log.push_back(make_record(entry.message, entry.transfer_type, ts));
            }
        }
    }
    std::stable_sort(log.begin(), log.end(), [](const MessageRecord& a, const MessageRecord& b) {
        return a.timestamp_us < b.timestamp_us;
    });
    // Jitter can in principle collide two instances; restore strictness
    // with minimal forward bumps.
    for (std::size_t i = 1; i < log.size(); ++i)
        if (log[i].timestamp_us <= log[i - 1].timestamp_us)
            log[i].timestamp_us = log[i - 1].timestamp_us + 1;
    return log;
}

InjectionReport inject_spoof1(std::vector<MessageRecord> benign, const ScenarioConfig& config) {
    const TopologySpec& topology = config.topology;
    // Locate the poll exchange and the data distribution message it feeds.
    const ScheduleEntry* poll = nullptr;
    for (const ScheduleEntry& entry : topology.entries)
        if (entry.transfer_type == TransferType::RtToBc) {
            poll = &entry;
            break;
        }
    if (!poll)
        throw ValidationError("spoof1 requires an RT_to_BC entry in the schedule");
    const ScheduleEntry* victim = nullptr;
    for (const ScheduleEntry& entry : topology.entries)
        if (entry.transfer_type == TransferType::BcToRt && entry.offset_us > poll->offset_us &&
            (!victim || entry.offset_us < victim->offset_us))
            victim = &entry;
    if (!victim)
        throw ValidationError("spoof1 requires a BC_to_RT entry scheduled after the poll");

    const MessageId victim_id = victim->message;
    std::vector<MessageRecord> injected;
    int skipped_frames = 0;

    // Genuine instances of the victim message inside the window, in order.
    std::vector<std::size_t> victim_positions;
    for (std::size_t i = 0; i < benign.size(); ++i)
        if (message_id_of(benign[i]) == victim_id)
            victim_positions.push_back(i);

    std::int64_t frame = config.attack_start_us / topology.major_frame_us;
    std::int64_t last_frame = (config.attack_end_us - 1) / topology.major_frame_us;
    std::size_t vp = 0;
    for (; frame <= last_frame; ++frame) {
        std::int64_t frame_start = frame * topology.major_frame_us;
        std::int64_t frame_end = frame_start + topology.major_frame_us;
        int placed = 0;
        while (vp < victim_positions.size() && placed < config.params.spoof1_per_frame) {
            std::size_t pos = victim_positions[vp];
            std::int64_t anchor = benign[pos].timestamp_us;
            if (anchor < frame_start || anchor < config.attack_start_us) {
                ++vp;
                continue;
            }
            if (anchor >= frame_end || anchor >= config.attack_end_us)
                break;
            ++vp;
            // First idle gap after this instance, capped at half a period so
            // the forged copy clearly violates the message's cycle.
            std::int64_t limit = anchor + victim->period_us / 2;
            for (std::size_t j = pos; j + 1 < benign.size(); ++j) {
                std::int64_t gap_start = benign[j].timestamp_us;
                std::int64_t gap_end = benign[j + 1].timestamp_us;
                if (gap_start >= limit)
                    break;
                if (gap_end - gap_start < kMinIdleGapUs)
                    continue;
                std::int64_t t = gap_start + (gap_end - gap_start) / 2;
                if (t >= config.attack_end_us || t >= limit)
                    break;
                injected.push_back(
                    make_record(victim_id, TransferType::BcToRt, t, Label::Anomaly));
                ++placed;
                break;
            }
        }
        if (placed < config.params.spoof1_per_frame)
            ++skipped_frames;
    }

    InjectionReport report;
    report.injected = static_cast<int>(injected.size());
    report.skipped_frames = skipped_frames;
    report.log = merge_injected(std::move(benign), std::move(injected));
    return report;
}

InjectionReport inject_spoof2(std::vector<MessageRecord> benign, const ScenarioConfig& config) {
    const TopologySpec& topology = config.topology;
    MessageId forged;
    forged.dst_subaddress = config.params.spoof2_subaddress;
    forged.word_count = config.params.spoof2_word_count;
    for (const ScheduleEntry& entry : topology.entries)
        if (entry.message == forged)
            throw ValidationError("spoof2 word count collides with a scheduled broadcast");
    for (const AperiodicEntry& entry : topology.aperiodic)
        if (entry.message == forged)
            throw ValidationError("spoof2 word count collides with an aperiodic message");

    // Attacker slot late in the frame; repeats within a frame step forward.
    const std::int64_t slot = topology.major_frame_us - topology.major_frame_us / 16;
    const std::int64_t step = 173;

    std::vector<MessageRecord> injected;
    double credit = 0.0;
    std::int64_t first_frame = config.attack_start_us / topology.major_frame_us;
    std::int64_t last_frame = (config.attack_end_us - 1) / topology.major_frame_us;
    for (std::int64_t frame = first_frame; frame <= last_frame; ++frame) {
        credit += config.params.spoof2_per_frame;
        int count = static_cast<int>(credit);
        credit -= count;
        for (int i = 0; i < count; ++i) {
            std::int64_t t = frame * topology.major_frame_us + slot + i * step;
            if (t < config.attack_start_us || t >= config.attack_end_us)
                continue;
            injected.push_back(make_record(forged, TransferType::Broadcast, t, Label::Anomaly));
        }
    }

    InjectionReport report;
    report.injected = static_cast<int>(injected.size());
    report.log = merge_injected(std::move(benign), std::move(injected));
    return report;
}

InjectionReport inject_dos(std::vector<MessageRecord> benign, const ScenarioConfig& config) {
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> terminal(0, 30);
    std::uniform_int_distribution<int> subaddress(1, 30);
    std::uniform_int_distribution<int> words(1, 32);

    std::vector<MessageRecord> injected;
    if (config.params.dos_rate_per_sec > 0.0) {
        std::int64_t i = 0;
        while (true) {
            std::int64_t t = config.attack_start_us +
                             static_cast<std::int64_t>(i * 1000000.0 / config.params.dos_rate_per_sec);
            if (t >= config.attack_end_us)
                break;
            MessageId id;
            id.dst_terminal = static_cast<std::uint8_t>(terminal(rng));
            id.dst_subaddress = static_cast<std::uint8_t>(subaddress(rng));
            id.word_count = static_cast<std::uint8_t>(words(rng));
            injected.push_back(make_record(id, TransferType::BcToRt, t, Label::Anomaly));
            ++i;
        }
    }

    InjectionReport report;
    report.injected = static_cast<int>(injected.size());
    report.log = merge_injected(std::move(benign), std::move(injected));
    return report;
}

InjectionReport simulate(const ScenarioConfig& config, std::int64_t duration_us) {
    validate_scenario(config, duration_us);
    std::vector<MessageRecord> benign = generate_benign(config, duration_us);
    switch (config.attack) {
        case AttackKind::None: {
            InjectionReport report;
            report.log = std::move(benign);
            return report;
        }
        case AttackKind::Spoof1:
            return inject_spoof1(std::move(benign), config);
        case AttackKind::Spoof2:
            return inject_spoof2(std::move(benign), config);
        case AttackKind::Dos:
            return inject_dos(std::move(benign), config);
    }
    throw Error("unreachable attack kind");
}

}  // namespace milbus
