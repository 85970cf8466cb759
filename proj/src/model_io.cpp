#include "milbus/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "milbus/errors.hpp"

namespace milbus {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "milbus-model";

using ordered_json = nlohmann::ordered_json;

std::string decimal(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

double parse_decimal(const std::string& text) {
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ValidationError("bad decimal value in model file: " + text);
    return value;
}

ordered_json id_to_json(const MessageId& id) {
    ordered_json object;
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

MessageId id_from_json(const nlohmann::json& object) {
    MessageId id;
    auto addr = [&](const char* key) -> BusAddr {
        const auto& v = object.at(key);
        if (v.is_null())
            return std::nullopt;
        return static_cast<std::uint8_t>(v.get<std::uint64_t>());
    };
    id.src_terminal = addr("src_terminal");
    id.src_subaddress = addr("src_subaddress");
    id.dst_terminal = addr("dst_terminal");
    id.dst_subaddress = addr("dst_subaddress");
    id.channel = channel_from_string(object.at("channel").get<std::string>());
    id.word_count = static_cast<std::uint8_t>(object.at("word_count").get<std::uint64_t>());
    id.is_mode_code = object.at("is_mode_code").get<bool>();
    return id;
}

ordered_json chain_to_json(const MarkovChain& chain) {
    ordered_json object;
    object["occur"] = chain.occur;
    ordered_json probs = ordered_json::array();
    for (int s = 0; s < chain.state_count(); ++s)
        probs.push_back(decimal(chain.state_prob(s)));
    object["state_prob"] = std::move(probs);
    ordered_json edges = ordered_json::array();
    ordered_json edge_probs = ordered_json::array();
    for (const auto& [edge, count] : chain.transitions) {
        edges.push_back(ordered_json::array({edge.first, edge.second, count}));
        edge_probs.push_back(decimal(chain.trans_prob(edge.first, edge.second)));
    }
    object["transitions"] = std::move(edges);
    object["trans_prob"] = std::move(edge_probs);
    object["threshold"] = chain.threshold ? ordered_json(decimal(*chain.threshold)) : ordered_json(nullptr);
    return object;
}

MarkovChain chain_from_json(const nlohmann::json& object, std::int64_t training_size,
                            std::size_t state_count) {
    MarkovChain chain;
    chain.training_size = training_size;
    chain.occur = object.at("occur").get<std::vector<std::int64_t>>();
    if (chain.occur.size() != state_count)
        throw ValidationError("model file: occur length does not match state count");
    for (std::int64_t count : chain.occur)
        if (count <= 0)
            throw ValidationError("model file: occur counts must be positive");
    for (const auto& edge : object.at("transitions")) {
        int from = edge.at(0).get<int>();
        int to = edge.at(1).get<int>();
        std::int64_t count = edge.at(2).get<std::int64_t>();
        if (from < 0 || to < 0 || from >= static_cast<int>(state_count) ||
            to >= static_cast<int>(state_count) || count <= 0)
            throw ValidationError("model file: transition out of range");
        if (!chain.transitions.emplace(std::make_pair(from, to), count).second)
            throw ValidationError("model file: duplicate transition");
    }
    chain.finalize_threshold();

    // Every occurrence yields at most one outgoing transition.
    for (int s = 0; s < chain.state_count(); ++s)
        if (chain.out_total[s] > chain.occur[s])
            throw ValidationError("model file: transitions out of a state exceed its occurrences");

    // The stored decimal probabilities must agree with the counts.
    const auto& probs = object.at("state_prob");
    if (probs.size() != state_count)
        throw ValidationError("model file: state_prob length mismatch");
    for (std::size_t s = 0; s < state_count; ++s)
        if (parse_decimal(probs.at(s).get<std::string>()) != chain.state_prob(static_cast<int>(s)))
            throw ValidationError("model file: state_prob disagrees with counts");
    const auto& edge_probs = object.at("trans_prob");
    if (edge_probs.size() != chain.transitions.size())
        throw ValidationError("model file: trans_prob length mismatch");
    std::size_t i = 0;
    for (const auto& [edge, count] : chain.transitions) {
        (void)count;
        if (parse_decimal(edge_probs.at(i++).get<std::string>()) !=
            chain.trans_prob(edge.first, edge.second))
            throw ValidationError("model file: trans_prob disagrees with counts");
    }
    const auto& threshold = object.at("threshold");
    if (threshold.is_null() != !chain.threshold)
        throw ValidationError("model file: threshold presence disagrees with transitions");
    if (!threshold.is_null() && parse_decimal(threshold.get<std::string>()) != *chain.threshold)
        throw ValidationError("model file: threshold disagrees with counts");
    return chain;
}

}  // namespace

void save_model(const ModelPair& model, const std::filesystem::path& path) {
    ordered_json object;
    object["format"] = kFormatName;
    object["version"] = kFormatVersion;
    object["params"] = {{"tolerance_us", model.params.tolerance_us},
                        {"rare_count_threshold", model.params.rare_count_threshold},
                        {"max_cycles_threshold", model.params.max_cycles_threshold}};
    object["training_size"] = model.periodic.training_size;

    ordered_json messages = ordered_json::array();
    std::map<MessageId, std::size_t> message_index;
    for (const auto& [id, set] : model.cycle_sets) {
        ordered_json item;
        item["message"] = id_to_json(id);
        item["occurrences"] = set.occurrence_count;
        item["class"] = to_string(model.classification.at(id));
        ordered_json cycles = ordered_json::array();
        for (const CycleCluster& cluster : set.clusters)
            cycles.push_back({{"sum", cluster.sum},
                              {"count", cluster.count},
                              {"min", cluster.min},
                              {"max", cluster.max}});
        item["cycles"] = std::move(cycles);
        message_index[id] = messages.size();
        messages.push_back(std::move(item));
    }
    object["messages"] = std::move(messages);

    ordered_json periodic_states = ordered_json::array();
    for (const PeriodicStateKey& key : model.periodic_states)
        periodic_states.push_back({{"message_index", message_index.at(key.id)},
                                   {"cycle_index", key.cycle_index}});
    object["periodic_states"] = std::move(periodic_states);
    ordered_json aperiodic_states = ordered_json::array();
    for (const MessageId& id : model.aperiodic_states)
        aperiodic_states.push_back(message_index.at(id));
    object["aperiodic_states"] = std::move(aperiodic_states);

    object["periodic_chain"] = chain_to_json(model.periodic);
    object["aperiodic_chain"] = chain_to_json(model.aperiodic);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path.string());
    out << object.dump(1) << "\n";
    if (!out)
        throw Error("write failed: " + path.string());
}

ModelPair load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open model file: " + path.string());
    nlohmann::json object;
    try {
        object = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "invalid model file " + path.string() + ": " + e.what());
    }
    try {
        if (object.at("format").get<std::string>() != kFormatName)
            throw ValidationError("not a model file: " + path.string());
        if (object.at("version").get<int>() != kFormatVersion)
            throw ValidationError("unsupported model file version " +
                                  object.at("version").dump());
        ModelPair model;
        const auto& params = object.at("params");
        model.params.tolerance_us = params.at("tolerance_us").get<std::int64_t>();
        model.params.rare_count_threshold = params.at("rare_count_threshold").get<int>();
        model.params.max_cycles_threshold = params.at("max_cycles_threshold").get<int>();
        std::int64_t training_size = object.at("training_size").get<std::int64_t>();
        if (training_size <= 0)
            throw ValidationError("model file: training_size must be positive");

        std::vector<MessageId> ids;
        for (const auto& item : object.at("messages")) {
            MessageId id = id_from_json(item.at("message"));
            if (model.cycle_sets.count(id))
                throw ValidationError("model file: duplicate message");
            CycleSet set;
            set.message_id = id;
            set.occurrence_count = item.at("occurrences").get<std::int64_t>();
            for (const auto& cycle : item.at("cycles")) {
                CycleCluster cluster;
                cluster.sum = cycle.at("sum").get<std::int64_t>();
                cluster.count = cycle.at("count").get<std::int64_t>();
                cluster.min = cycle.at("min").get<std::int64_t>();
                cluster.max = cycle.at("max").get<std::int64_t>();
                if (cluster.count <= 0 || cluster.min > cluster.max)
                    throw ValidationError("model file: malformed cycle cluster");
                if (!set.clusters.empty() &&
                    cluster.min - set.clusters.back().max <= model.params.tolerance_us)
                    throw ValidationError("model file: cycle clusters not separated");
                set.clusters.push_back(cluster);
            }
            model.classification[id] = message_class_from_string(item.at("class").get<std::string>());
            model.cycle_sets[id] = std::move(set);
            ids.push_back(id);
        }

        for (const auto& item : object.at("periodic_states")) {
            std::size_t mi = item.at("message_index").get<std::size_t>();
            int ci = item.at("cycle_index").get<int>();
            if (mi >= ids.size())
                throw ValidationError("model file: periodic state message_index out of range");
            const CycleSet& set = model.cycle_sets.at(ids[mi]);
            if (ci < 0 || ci >= static_cast<int>(set.clusters.size()))
                throw ValidationError("model file: periodic state cycle_index out of range");
            if (model.classification.at(ids[mi]) != MessageClass::Periodic)
                throw ValidationError("model file: periodic state on an aperiodic message");
            model.periodic_states.push_back({ids[mi], ci});
        }
        for (const auto& item : object.at("aperiodic_states")) {
            std::size_t mi = item.get<std::size_t>();
            if (mi >= ids.size())
                throw ValidationError("model file: aperiodic state message_index out of range");
            model.aperiodic_states.push_back(ids[mi]);
        }
        model.rebuild_index();

        model.periodic =
            chain_from_json(object.at("periodic_chain"), training_size, model.periodic_states.size());
        model.aperiodic = chain_from_json(object.at("aperiodic_chain"), training_size,
                                          model.aperiodic_states.size());
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "invalid model file " + path.string() + ": " + e.what());
    }
}

}  // namespace milbus
