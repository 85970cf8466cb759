#pragma once

#include <unordered_map>
#include <vector>

#include "milbus/model.hpp"

namespace milbus {

// Rolling context kept while scanning a message stream. Each chain tracks
// its most recent message (state and assigned label) and the most recent
// message labeled Benign, which anchors the recovery rescore. Per-message
// timestamps of the last Benign instance drive the periodic delta mapping;
// anomalous instances never advance them.
struct DetectorState {
    struct ChainCursor {
        bool has_last = false;
        int last_state = MarkovChain::kUnknown;
        Label last_label = Label::Benign;
        bool has_last_benign = false;
        int last_benign_state = MarkovChain::kUnknown;
    };
    ChainCursor periodic;
    ChainCursor aperiodic;
    std::unordered_map<MessageId, std::int64_t, MessageIdHash> last_benign_ts;
};

// Labels one record and updates the rolling state. A record that maps into
// no trained state is Anomaly outright: it scores 0 from any predecessor.
// The first mappable message a chain sees, and the first instance of a
// known message, are Benign by definition: there is nothing to score them
// against. Otherwise a score of at least the chain threshold is Benign;
// below it the record is Anomaly unless the chain's previous message was
// itself anomalous (a point anomaly in between) and rescoring from the
// last Benign message clears it, or no Benign message has been scored yet.
Label detect(const MessageRecord& record, DetectorState& state, const ModelPair& model);

// Runs detect over a whole stream with fresh state.
std::vector<Label> detect_stream(const std::vector<MessageRecord>& records, const ModelPair& model);

}  // namespace milbus
