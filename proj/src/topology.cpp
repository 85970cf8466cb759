#include "milbus/topology.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

#include "milbus/errors.hpp"

namespace milbus {

namespace {

MessageId bc_to_rt(std::uint8_t rt, std::uint8_t sub, std::uint8_t wc) {
    MessageId id;
    id.dst_terminal = rt;
    id.dst_subaddress = sub;
    id.word_count = wc;
    return id;
}

MessageId rt_to_bc(std::uint8_t rt, std::uint8_t sub, std::uint8_t wc) {
    MessageId id;
    id.src_terminal = rt;
    id.src_subaddress = sub;
    id.word_count = wc;
    return id;
}

MessageId rt_to_rt(std::uint8_t src_rt, std::uint8_t src_sub, std::uint8_t dst_rt, std::uint8_t dst_sub,
                   std::uint8_t wc) {
    MessageId id;
    id.src_terminal = src_rt;
    id.src_subaddress = src_sub;
    id.dst_terminal = dst_rt;
    id.dst_subaddress = dst_sub;
    id.word_count = wc;
    return id;
}

MessageId mode_code(std::uint8_t rt, std::uint8_t code) {
    MessageId id;
    id.dst_terminal = rt;
    id.dst_subaddress = 0;
    id.word_count = code;
    id.is_mode_code = true;
    return id;
}

MessageId broadcast(std::uint8_t sub, std::uint8_t wc) {
    MessageId id;
    id.dst_subaddress = sub;
    id.word_count = wc;
    return id;
}

}  // namespace

TopologySpec topology_1() {
    TopologySpec spec;
    spec.name = "topology_1";
    spec.major_frame_us = 80000;
    for (int rt = 1; rt <= 16; ++rt)
        spec.rt_addresses.insert(rt);

    // The BC polls RT 1, then redistributes the polled data to the other
    // RTs; a handful of extra transfers fill out the 20 ms slots. Entry k
    // is phased at k * 80000 / 21 within the major frame.
    std::vector<std::pair<MessageId, TransferType>> messages;
    messages.emplace_back(rt_to_bc(1, 1, 8), TransferType::RtToBc);
    for (std::uint8_t rt = 2; rt <= 16; ++rt)
        messages.emplace_back(bc_to_rt(rt, 1, 8), TransferType::BcToRt);
    messages.emplace_back(rt_to_rt(1, 2, 5, 3, 4), TransferType::RtToRt);
    messages.emplace_back(rt_to_bc(8, 2, 12), TransferType::RtToBc);
    messages.emplace_back(bc_to_rt(3, 4, 2), TransferType::BcToRt);
    messages.emplace_back(mode_code(2, 17), TransferType::ModeCode);
    messages.emplace_back(broadcast(12, 4), TransferType::Broadcast);

    for (std::size_t k = 0; k < messages.size(); ++k) {
        ScheduleEntry entry;
        entry.message = messages[k].first;
        entry.transfer_type = messages[k].second;
        entry.offset_us = static_cast<std::int64_t>(k) * spec.major_frame_us / 21;
        entry.period_us = k + 1 == messages.size() ? 80000 : 20000;
        spec.entries.push_back(entry);
    }
    return spec;
}

TopologySpec topology_2() {
    TopologySpec spec;
    spec.name = "topology_2";
    spec.major_frame_us = 20000;
    spec.rt_addresses = {5, 6};

    // The BC queries both RTs, broadcasts two updates, and sends one
    // command; one message every 4 ms.
    std::vector<std::pair<MessageId, TransferType>> messages;
    messages.emplace_back(rt_to_bc(5, 1, 4), TransferType::RtToBc);
    messages.emplace_back(rt_to_bc(6, 1, 4), TransferType::RtToBc);
    messages.emplace_back(broadcast(10, 6), TransferType::Broadcast);
    messages.emplace_back(broadcast(11, 2), TransferType::Broadcast);
    messages.emplace_back(bc_to_rt(5, 2, 3), TransferType::BcToRt);

    for (std::size_t k = 0; k < messages.size(); ++k) {
        ScheduleEntry entry;
        entry.message = messages[k].first;
        entry.transfer_type = messages[k].second;
        entry.offset_us = static_cast<std::int64_t>(k) * spec.major_frame_us / 5;
        entry.period_us = 20000;
        spec.entries.push_back(entry);
    }
    return spec;
}

void validate_topology(const TopologySpec& topology) {
    if (topology.major_frame_us <= 0)
        throw ValidationError("major_frame_us must be positive");
    if (topology.entries.empty())
        throw ValidationError("topology has no schedule entries");
    for (std::size_t i = 0; i < topology.entries.size(); ++i) {
        const ScheduleEntry& entry = topology.entries[i];
        std::string where = "entry " + std::to_string(i) + ": ";
        if (entry.period_us <= 0)
            throw ValidationError(where + "period_us must be positive");
        if (topology.major_frame_us % entry.period_us != 0)
            throw ValidationError(where + "period_us must divide major_frame_us evenly");
        if (entry.offset_us < 0 || entry.offset_us >= topology.major_frame_us)
            throw ValidationError(where + "offset_us must lie in [0, major_frame_us)");
        validate_record(make_record(entry.message, entry.transfer_type, 0));
    }
    for (std::size_t i = 0; i < topology.aperiodic.size(); ++i) {
        const AperiodicEntry& entry = topology.aperiodic[i];
        std::string where = "aperiodic entry " + std::to_string(i) + ": ";
        if (entry.slot_offset_us < 0 || entry.slot_offset_us >= topology.major_frame_us)
            throw ValidationError(where + "slot_offset_us must lie in [0, major_frame_us)");
        if (entry.probability < 0.0 || entry.probability > 1.0)
            throw ValidationError(where + "probability must lie in [0, 1]");
        validate_record(make_record(entry.message, entry.transfer_type, 0));
    }
    for (int rt : topology.rt_addresses)
        if (rt < 0 || rt > 30)
            throw ValidationError("rt_addresses must lie in 0..30");
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json message_to_json(const MessageId& id, TransferType type) {
    ordered_json object;
    object["transfer_type"] = to_string(type);
    auto addr = [](const BusAddr& a) { return a ? ordered_json(*a) : ordered_json(nullptr); };
    object["src_terminal"] = addr(id.src_terminal);
    object["src_subaddress"] = addr(id.src_subaddress);
    object["dst_terminal"] = addr(id.dst_terminal);
    object["dst_subaddress"] = addr(id.dst_subaddress);
    object["channel"] = to_string(id.channel);
    object["word_count"] = id.word_count;
    object["is_mode_code"] = id.is_mode_code;
    return object;
}

std::pair<MessageId, TransferType> message_from_json(const nlohmann::json& object) {
    MessageId id;
    auto addr = [&](const char* key) -> BusAddr {
        const auto& v = object.at(key);
        if (v.is_null())
            return std::nullopt;
        return static_cast<std::uint8_t>(v.get<std::uint64_t>());
    };
    TransferType type = transfer_type_from_string(object.at("transfer_type").get<std::string>());
    id.src_terminal = addr("src_terminal");
    id.src_subaddress = addr("src_subaddress");
    id.dst_terminal = addr("dst_terminal");
    id.dst_subaddress = addr("dst_subaddress");
    id.channel = channel_from_string(object.at("channel").get<std::string>());
    id.word_count = static_cast<std::uint8_t>(object.at("word_count").get<std::uint64_t>());
    id.is_mode_code = object.at("is_mode_code").get<bool>();
    return {id, type};
}

}  // namespace

TopologySpec load_topology(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open topology file: " + path.string());
    nlohmann::json object;
    try {
        object = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "invalid topology file " + path.string() + ": " + e.what());
    }
    TopologySpec spec;
    try {
        spec.name = object.at("name").get<std::string>();
        spec.major_frame_us = object.at("major_frame_us").get<std::int64_t>();
        for (const auto& rt : object.at("rt_addresses"))
            spec.rt_addresses.insert(rt.get<int>());
        for (const auto& item : object.at("entries")) {
            ScheduleEntry entry;
            std::tie(entry.message, entry.transfer_type) = message_from_json(item.at("message"));
            entry.offset_us = item.at("offset_us").get<std::int64_t>();
            entry.period_us = item.at("period_us").get<std::int64_t>();
            spec.entries.push_back(entry);
        }
        if (object.contains("aperiodic")) {
            for (const auto& item : object.at("aperiodic")) {
                AperiodicEntry entry;
                std::tie(entry.message, entry.transfer_type) = message_from_json(item.at("message"));
                entry.slot_offset_us = item.at("slot_offset_us").get<std::int64_t>();
                entry.probability = item.at("probability").get<double>();
                spec.aperiodic.push_back(entry);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "invalid topology file " + path.string() + ": " + e.what());
    }
    validate_topology(spec);
    return spec;
}

void save_topology(const TopologySpec& topology, const std::filesystem::path& path) {
    ordered_json object;
    object["name"] = topology.name;
    object["major_frame_us"] = topology.major_frame_us;
    object["rt_addresses"] = topology.rt_addresses;
    object["entries"] = ordered_json::array();
    for (const ScheduleEntry& entry : topology.entries) {
        ordered_json item;
        item["message"] = message_to_json(entry.message, entry.transfer_type);
        item["offset_us"] = entry.offset_us;
        item["period_us"] = entry.period_us;
        object["entries"].push_back(item);
    }
    if (!topology.aperiodic.empty()) {
        object["aperiodic"] = ordered_json::array();
        for (const AperiodicEntry& entry : topology.aperiodic) {
            ordered_json item;
            item["message"] = message_to_json(entry.message, entry.transfer_type);
            item["slot_offset_us"] = entry.slot_offset_us;
            item["probability"] = entry.probability;
            object["aperiodic"].push_back(item);
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path.string());
    out << object.dump(2) << "\n";
}

}  // namespace milbus
