#include "milbus/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "milbus/detector.hpp"
#include "milbus/errors.hpp"

namespace milbus {

namespace {

double ratio(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0)
        return 1.0;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

double ClassMetrics::precision() const {
    return ratio(tp, tp + fp);
}

double ClassMetrics::recall() const {
    return ratio(tp, tp + fn);
}

bool EvalResult::perfect() const {
    return anomaly.precision() == 1.0 && anomaly.recall() == 1.0 && benign.precision() == 1.0 &&
           benign.recall() == 1.0;
}

EvalResult evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
    if (predicted.size() != truth.size())
        throw ValidationError("alignment error: " + std::to_string(predicted.size()) +
                              " predictions vs " + std::to_string(truth.size()) + " truth records");
    EvalResult result;
    result.total = static_cast<std::int64_t>(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == Label::Unlabeled || predicted[i] == Label::Unlabeled)
            throw ValidationError("record " + std::to_string(i + 1) + " is Unlabeled");
        bool truth_anomaly = truth[i] == Label::Anomaly;
        bool predicted_anomaly = predicted[i] == Label::Anomaly;
        if (predicted_anomaly && truth_anomaly) {
            result.anomaly.tp += 1;
            result.benign.tn += 1;
        } else if (predicted_anomaly && !truth_anomaly) {
            result.anomaly.fp += 1;
            result.benign.fn += 1;
        } else if (!predicted_anomaly && truth_anomaly) {
            result.anomaly.fn += 1;
            result.benign.fp += 1;
        } else {
            result.anomaly.tn += 1;
            result.benign.tp += 1;
        }
    }
    return result;
}

EvalResult evaluate(const std::vector<MessageRecord>& predicted_records,
                    const std::vector<Label>& predicted,
                    const std::vector<MessageRecord>& truth_records) {
    if (predicted_records.size() != truth_records.size())
        throw ValidationError("alignment error: logs differ in length (" +
                              std::to_string(predicted_records.size()) + " vs " +
                              std::to_string(truth_records.size()) + ")");
    for (std::size_t i = 0; i < truth_records.size(); ++i)
        if (predicted_records[i].timestamp_us != truth_records[i].timestamp_us)
            throw ValidationError("alignment error: timestamp mismatch at record " +
                                  std::to_string(i + 1));
    std::vector<Label> truth;
    truth.reserve(truth_records.size());
    for (const MessageRecord& record : truth_records)
        truth.push_back(record.truth_label);
    return evaluate(predicted, truth);
}

std::string format_metrics_report(const EvalResult& result) {
    std::ostringstream out;
    out << "records evaluated: " << result.total << "\n";
    char line[160];
    auto emit = [&](const char* name, const ClassMetrics& m) {
        std::snprintf(line, sizeof(line),
                      "%-7s  precision %.6f  recall %.6f  (tp %lld fp %lld fn %lld tn %lld)\n", name,
                      m.precision(), m.recall(), static_cast<long long>(m.tp),
                      static_cast<long long>(m.fp), static_cast<long long>(m.fn),
                      static_cast<long long>(m.tn));
        out << line;
    };
    emit("anomaly", result.anomaly);
    emit("benign", result.benign);
    return out.str();
}

SplitResult split_log(const std::vector<MessageRecord>& records, std::int64_t train_duration_us) {
    SplitResult result;
    for (const MessageRecord& record : records) {
        if (record.timestamp_us < train_duration_us) {
            if (record.truth_label == Label::Anomaly)
                throw ValidationError("training window contains an Anomaly record at " +
                                      std::to_string(record.timestamp_us) + " us");
            result.train.push_back(record);
        } else {
            result.test.push_back(record);
        }
    }
    return result;
}

FalseAlarmCurve training_time_sweep(const std::vector<MessageRecord>& records,
                                    std::int64_t segment_duration_us, const TrainParams& params) {
    if (segment_duration_us <= 0)
        throw ValidationError("segment duration must be positive");
    if (records.empty())
        throw ValidationError("sweep needs a non-empty log");
    for (const MessageRecord& record : records)
        if (record.truth_label != Label::Benign)
            throw ValidationError("sweep requires an all-benign log");
    if (segment_duration_us > records.back().timestamp_us)
        throw ValidationError("segment duration exceeds the log span");

    FalseAlarmCurve curve;
    curve.segment_duration_us = segment_duration_us;
    std::size_t boundary = 0;  // records [0, boundary) are the training set
    for (int k = 1;; ++k) {
        std::int64_t train_duration = static_cast<std::int64_t>(k) * segment_duration_us;
        while (boundary < records.size() && records[boundary].timestamp_us < train_duration)
            ++boundary;
        if (boundary == records.size())
            break;  // no test records left
        if (boundary == 0)
            continue;  // nothing to train on yet
        std::vector<MessageRecord> train_set(records.begin(), records.begin() + boundary);
        ModelPair model = train(train_set, params);
        std::int64_t alarms = 0;
        DetectorState state;
        for (std::size_t i = boundary; i < records.size(); ++i)
            if (detect(records[i], state, model) == Label::Anomaly)
                alarms += 1;
        double rate = static_cast<double>(alarms) / static_cast<double>(records.size() - boundary);
        curve.points.emplace_back(train_duration, rate);
    }
    return curve;
}

void write_curve(const FalseAlarmCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path.string());
    out << "# training_duration_us\tfalse_alarm_rate\n";
    out << "# rate counts every record after the training prefix, first occurrences included\n";
    char line[64];
    for (const auto& [duration, rate] : curve.points) {
        std::snprintf(line, sizeof(line), "%lld\t%.9f\n", static_cast<long long>(duration), rate);
        out << line;
    }
    if (!out)
        throw Error("write failed: " + path.string());
}

}  // namespace milbus
