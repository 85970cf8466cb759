#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "milbus/model.hpp"

namespace milbus {

// One-vs-rest confusion counts for a single class.
struct ClassMetrics {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    // 0/0 is defined as 1: a class absent from both prediction and truth
    // is found perfectly.
    double precision() const;
    double recall() const;
};

struct EvalResult {
    ClassMetrics anomaly;  // Anomaly as the positive class
    ClassMetrics benign;   // Benign as the positive class
    std::int64_t total = 0;

    bool perfect() const;  // all four precision/recall values equal 1.0
};

// Record-for-record comparison. Throws ValidationError when the two logs
// differ in length or timestamps (alignment error) or when a truth label
// is Unlabeled.
EvalResult evaluate(const std::vector<MessageRecord>& predicted_records,
                    const std::vector<Label>& predicted,
                    const std::vector<MessageRecord>& truth_records);

EvalResult evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth);

std::string format_metrics_report(const EvalResult& result);

// Chronological split: records with timestamp_us < train_duration_us form
// the training set. Throws ValidationError when an Anomaly truth label
// falls inside the training window.
struct SplitResult {
    std::vector<MessageRecord> train;
    std::vector<MessageRecord> test;
};
SplitResult split_log(const std::vector<MessageRecord>& records, std::int64_t train_duration_us);

// False-alarm rate (fraction of records labeled Anomaly) on the remainder
// of an all-benign log after training on the first k segments, for
// k = 1, 2, ... until no test records remain. All test records count,
// including first occurrences.
struct FalseAlarmCurve {
    std::int64_t segment_duration_us = 0;
    std::vector<std::pair<std::int64_t, double>> points;  // (training duration, rate)
};
FalseAlarmCurve training_time_sweep(const std::vector<MessageRecord>& records,
                                    std::int64_t segment_duration_us,
                                    const TrainParams& params = {});

// Two-column plot file: training duration in microseconds, false-alarm rate.
void write_curve(const FalseAlarmCurve& curve, const std::filesystem::path& path);

}  // namespace milbus
