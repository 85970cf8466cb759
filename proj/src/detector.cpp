#include "milbus/detector.hpp"

namespace milbus {

namespace {

// Scores a mapped state against the chain's rolling cursor.
Label score_against(const MarkovChain& chain, const DetectorState::ChainCursor& cursor, int state) {
    if (state == MarkovChain::kUnknown)
        return Label::Anomaly;  // outside the model: scores 0 from any predecessor
    if (!cursor.has_last)
        return Label::Benign;  // nothing observed yet in this chain
    if (chain.threshold) {
        double score = chain.score(cursor.last_state, state);
        if (score >= *chain.threshold)
            return Label::Benign;
        if (cursor.last_label == Label::Anomaly) {
            // Point anomaly recovery: rescore from the last benign message.
            // With no benign message yet the record is as unscorable as a
            // stream start; condemning it would let one anomaly cascade.
            if (!cursor.has_last_benign)
                return Label::Benign;
            double rescore = chain.score(cursor.last_benign_state, state);
            if (rescore >= *chain.threshold)
                return Label::Benign;
        }
    }
    return Label::Anomaly;
}

void advance(DetectorState::ChainCursor& cursor, int state, Label label) {
    cursor.has_last = true;
    cursor.last_state = state;
    cursor.last_label = label;
    if (label == Label::Benign && state != MarkovChain::kUnknown) {
        cursor.has_last_benign = true;
        cursor.last_benign_state = state;
    }
}

}  // namespace

Label detect(const MessageRecord& record, DetectorState& state, const ModelPair& model) {
    MessageId id = message_id_of(record);
    auto cls = model.classification.find(id);
    if (cls == model.classification.end()) {
        // Unknown message. It still becomes the aperiodic chain's previous
        // message, as an unknown state, so its successor is scored against
        // reality rather than against a pre-attack message.
        advance(state.aperiodic, MarkovChain::kUnknown, Label::Anomaly);
        return Label::Anomaly;
    }

    Label label;
    int aperiodic_state = model.aperiodic_state_index(id);
    auto seen = state.last_benign_ts.find(id);
    if (seen == state.last_benign_ts.end()) {
        // First instance of a known message in this stream: Benign by
        // definition, it only seeds the tracking state.
        label = Label::Benign;
    } else if (cls->second == MessageClass::Periodic) {
        int cycle = model.match_cycle(id, record.timestamp_us - seen->second);
        int mapped = cycle == MarkovChain::kUnknown ? MarkovChain::kUnknown
                                                    : model.periodic_state_index({id, cycle});
        label = score_against(model.periodic, state.periodic, mapped);
        advance(state.periodic, mapped, label);
    } else {
        label = score_against(model.aperiodic, state.aperiodic, aperiodic_state);
    }

    // Every known message projects into the aperiodic chain's history.
    advance(state.aperiodic, aperiodic_state, label);
    if (label == Label::Benign)
        state.last_benign_ts[id] = record.timestamp_us;
    return label;
}

std::vector<Label> detect_stream(const std::vector<MessageRecord>& records, const ModelPair& model) {
    DetectorState state;
    std::vector<Label> labels;
    labels.reserve(records.size());
    for (const MessageRecord& record : records)
        labels.push_back(detect(record, state, model));
    return labels;
}

}  // namespace milbus
