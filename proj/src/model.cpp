#include "milbus/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "milbus/errors.hpp"

namespace milbus {

double MarkovChain::state_prob(int state) const {
    if (state < 0 || state >= state_count() || training_size == 0)
        return 0.0;
    return static_cast<double>(occur[state]) / static_cast<double>(training_size);
}

double MarkovChain::trans_prob(int from, int to) const {
    if (from < 0 || from >= state_count() || to < 0 || to >= state_count())
        return 0.0;
    auto it = transitions.find({from, to});
    if (it == transitions.end() || out_total[from] == 0)
        return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(out_total[from]);
}

double MarkovChain::score(int from, int to) const {
    if (from == kUnknown || to == kUnknown)
        return 0.0;
    return state_prob(from) * trans_prob(from, to);
}

void MarkovChain::finalize_threshold() {
    out_total.assign(occur.size(), 0);
    for (const auto& [edge, count] : transitions)
        out_total[edge.first] += count;
    threshold.reset();
    for (const auto& [edge, count] : transitions) {
        double product = state_prob(edge.first) * trans_prob(edge.first, edge.second);
        if (!threshold || product < *threshold)
            threshold = product;
    }
}

void ModelPair::rebuild_index() {
    periodic_index_.clear();
    for (std::size_t i = 0; i < periodic_states.size(); ++i)
        periodic_index_[periodic_states[i]] = static_cast<int>(i);
    aperiodic_index_.clear();
    for (std::size_t i = 0; i < aperiodic_states.size(); ++i)
        aperiodic_index_[aperiodic_states[i]] = static_cast<int>(i);
}

int ModelPair::periodic_state_index(const PeriodicStateKey& key) const {
    auto it = periodic_index_.find(key);
    return it == periodic_index_.end() ? MarkovChain::kUnknown : it->second;
}

int ModelPair::aperiodic_state_index(const MessageId& id) const {
    auto it = aperiodic_index_.find(id);
    return it == aperiodic_index_.end() ? MarkovChain::kUnknown : it->second;
}

int ModelPair::match_cycle(const MessageId& id, std::int64_t delta_us) const {
    auto it = cycle_sets.find(id);
    if (it == cycle_sets.end())
        return MarkovChain::kUnknown;
    const std::vector<CycleCluster>& clusters = it->second.clusters;
    int best = MarkovChain::kUnknown;
    std::int64_t best_distance = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        // Distance to the observed delta range; within the range it is 0.
        std::int64_t distance = 0;
        if (delta_us < clusters[i].min)
            distance = clusters[i].min - delta_us;
        else if (delta_us > clusters[i].max)
            distance = delta_us - clusters[i].max;
        if (distance > params.tolerance_us)
            continue;
        if (best == MarkovChain::kUnknown || distance < best_distance) {
            best = static_cast<int>(i);
            best_distance = distance;
        }
    }
    return best;
}

StateMapping map_to_state(const MessageRecord& record, std::optional<std::int64_t> predecessor_ts,
                          const ModelPair& model_pair) {
    StateMapping mapping;
    MessageId id = message_id_of(record);
    auto cls = model_pair.classification.find(id);
    if (cls == model_pair.classification.end())
        return mapping;  // unknown message: scores 0 in any chain
    mapping.known_id = true;
    mapping.model = cls->second;
    if (cls->second == MessageClass::Aperiodic) {
        mapping.state = model_pair.aperiodic_state_index(id);
        return mapping;
    }
    if (!predecessor_ts) {
        mapping.seed = true;  // first instance: no delta to match
        return mapping;
    }
    int cycle = model_pair.match_cycle(id, record.timestamp_us - *predecessor_ts);
    if (cycle != MarkovChain::kUnknown)
        mapping.state = model_pair.periodic_state_index({id, cycle});
    return mapping;
}

double score_transition(const ModelPair& model_pair, MessageClass model, int from, int to) {
    const MarkovChain& chain =
        model == MessageClass::Periodic ? model_pair.periodic : model_pair.aperiodic;
    return chain.score(from, to);
}

ModelPair train(const std::vector<MessageRecord>& records, const TrainParams& params) {
    if (records.empty())
        throw ValidationError("training set is empty");
    if (params.tolerance_us < 0)
        throw ValidationError("tolerance_us must be non-negative");

    ModelPair model;
    model.params = params;

    // Timing profile per message.
    std::unordered_map<MessageId, std::vector<std::int64_t>, MessageIdHash> timestamps;
    std::int64_t previous_ts = records.front().timestamp_us - 1;
    for (const MessageRecord& record : records) {
        if (record.timestamp_us <= previous_ts)
            throw ValidationError("training records must be strictly timestamp-ordered");
        previous_ts = record.timestamp_us;
        timestamps[message_id_of(record)].push_back(record.timestamp_us);
    }
    for (auto& [id, series] : timestamps) {
        CycleSet set;
        set.message_id = id;
        set.occurrence_count = static_cast<std::int64_t>(series.size());
        std::vector<std::int64_t> deltas;
        deltas.reserve(series.size());
        for (std::size_t i = 1; i < series.size(); ++i)
            deltas.push_back(series[i] - series[i - 1]);
        set.clusters = cluster_deltas(std::move(deltas), params.tolerance_us);
        model.classification[id] =
            classify_message(set, params.rare_count_threshold, params.max_cycles_threshold);
        model.cycle_sets[id] = std::move(set);
    }

    // State spaces, sorted for deterministic indexing.
    for (const auto& [id, set] : model.cycle_sets) {
        model.aperiodic_states.push_back(id);
        if (model.classification.at(id) == MessageClass::Periodic)
            for (std::size_t c = 0; c < set.clusters.size(); ++c)
                model.periodic_states.push_back({id, static_cast<int>(c)});
    }
    model.rebuild_index();

    const std::int64_t total = static_cast<std::int64_t>(records.size());

    // Aperiodic chain: the full sequence projected onto message states.
    model.aperiodic.training_size = total;
    model.aperiodic.occur.assign(model.aperiodic_states.size(), 0);
    {
        int previous = MarkovChain::kUnknown;
        for (const MessageRecord& record : records) {
            int state = model.aperiodic_state_index(message_id_of(record));
            model.aperiodic.occur[state] += 1;
            if (previous != MarkovChain::kUnknown)
                model.aperiodic.transitions[{previous, state}] += 1;
            previous = state;
        }
    }
    model.aperiodic.finalize_threshold();

    // Periodic chain: periodic-classified records mapped to (message, cycle)
    // by the delta to the previous instance of the same message. The first
    // instance has no delta; it counts as an occurrence of the cycle its
    // first delta lands in, but transitions only link mapped records.
    model.periodic.training_size = total;
    model.periodic.occur.assign(model.periodic_states.size(), 0);
    {
        std::unordered_map<MessageId, std::int64_t, MessageIdHash> last_seen;
        std::unordered_map<MessageId, bool, MessageIdHash> first_pending;
        int previous = MarkovChain::kUnknown;
        for (const MessageRecord& record : records) {
            MessageId id = message_id_of(record);
            if (model.classification.at(id) != MessageClass::Periodic)
                continue;
            auto seen = last_seen.find(id);
            if (seen == last_seen.end()) {
                last_seen[id] = record.timestamp_us;
                first_pending[id] = true;
                continue;
            }
            std::int64_t delta = record.timestamp_us - seen->second;
            seen->second = record.timestamp_us;
            int cycle = model.match_cycle(id, delta);
            if (cycle == MarkovChain::kUnknown)
                throw Error("internal: training delta escaped its own cluster");
            int state = model.periodic_state_index({id, cycle});
            model.periodic.occur[state] += 1;
            if (first_pending[id]) {
                // Retroactive credit for the first instance.
                model.periodic.occur[state] += 1;
                first_pending[id] = false;
            }
            if (previous != MarkovChain::kUnknown)
                model.periodic.transitions[{previous, state}] += 1;
            previous = state;
        }
    }
    model.periodic.finalize_threshold();
    return model;
}

}  // namespace milbus
