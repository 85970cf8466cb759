#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "milbus/cycles.hpp"
#include "milbus/record.hpp"

namespace milbus {

struct TrainParams {
    std::int64_t tolerance_us = 40;  // cycle clustering and matching tolerance
    int rare_count_threshold = 5;    // below this count a message is aperiodic
    int max_cycles_threshold = 3;    // above this many cycles a message is aperiodic
};

// A trained first-order chain over dense state indices. Exact integer
// counts are the source of truth; probabilities derive from them.
//   state_prob(s)    = occur[s] / training_size
//   trans_prob(f, t) = trans[(f,t)] / out_total[f]
struct MarkovChain {
    std::int64_t training_size = 0;  // denominator: total records in the training set
    std::vector<std::int64_t> occur;
    std::map<std::pair<int, int>, std::int64_t> transitions;
    std::vector<std::int64_t> out_total;
    // Minimum state_prob(f) * trans_prob(f,t) over observed transitions;
    // unset when no transition was observed.
    std::optional<double> threshold;

    static constexpr int kUnknown = -1;

    int state_count() const { return static_cast<int>(occur.size()); }
    double state_prob(int state) const;
    double trans_prob(int from, int to) const;
    // state_prob(from) * trans_prob(from, to); 0 when either side is kUnknown.
    double score(int from, int to) const;
    void finalize_threshold();
};

// A periodic state: one message in one of its time cycles.
struct PeriodicStateKey {
    MessageId id;
    int cycle_index = 0;
    auto operator<=>(const PeriodicStateKey&) const = default;
};

// The trained detector: per-message timing profiles, the periodic chain
// over (message, cycle) states and the aperiodic chain over message states
// projected from the full training sequence.
struct ModelPair {
    TrainParams params;
    std::map<MessageId, CycleSet> cycle_sets;
    std::map<MessageId, MessageClass> classification;

    std::vector<PeriodicStateKey> periodic_states;  // index -> key, sorted
    std::vector<MessageId> aperiodic_states;        // index -> id, sorted
    MarkovChain periodic;
    MarkovChain aperiodic;

    void rebuild_index();  // refreshes the lookup maps after states change

    // Dense index lookups; kUnknown when absent.
    int periodic_state_index(const PeriodicStateKey& key) const;
    int aperiodic_state_index(const MessageId& id) const;

    // Matches a delta against the message's cycle clusters: a cluster whose
    // observed range, widened by the tolerance, contains the delta. Nearest
    // range wins ties; kUnknown when none match or the id is not periodic.
    int match_cycle(const MessageId& id, std::int64_t delta_us) const;

  private:
    std::map<PeriodicStateKey, int> periodic_index_;
    std::map<MessageId, int> aperiodic_index_;
};

// How one record maps into the model given the timestamp of the previous
// instance of the same message (nullopt = first instance).
struct StateMapping {
    bool known_id = false;            // message was seen in training
    MessageClass model = MessageClass::Aperiodic;  // which chain scores it
    int state = MarkovChain::kUnknown;
    bool seed = false;                // periodic first instance: nothing to map yet
};

StateMapping map_to_state(const MessageRecord& record, std::optional<std::int64_t> predecessor_ts,
                          const ModelPair& model_pair);

// Convenience mirror of MarkovChain::score for a chain picked by class.
double score_transition(const ModelPair& model_pair, MessageClass model, int from, int to);

// Learns cycle sets, classifications and both chains from a benign
// training log. Records must be timestamp-ordered. Throws ValidationError
// on an empty log or unordered input.
ModelPair train(const std::vector<MessageRecord>& records, const TrainParams& params = {});

}  // namespace milbus
