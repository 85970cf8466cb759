// milbus: 1553 bus traffic simulation and sequence-based anomaly detection.
//
// Subcommands: sim (generate a labeled traffic log), train (fit a model on
// a clean prefix), detect (label a log with a trained model), eval (score
// predictions against ground truth), sweep (false-alarm rate vs training
// time on a benign log).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "milbus/detector.hpp"
#include "milbus/errors.hpp"
#include "milbus/log_io.hpp"
#include "milbus/logging.hpp"
#include "milbus/metrics.hpp"
#include "milbus/model_io.hpp"
#include "milbus/simulator.hpp"

namespace {

using namespace milbus;

TopologySpec resolve_topology(const std::string& name) {
    if (name == "t1" || name == "topology_1")
        return topology_1();
    if (name == "t2" || name == "topology_2")
        return topology_2();
    log_info("loading topology file " + name);
    return load_topology(name);
}

// Attacks are bound to the topology they were designed against.
void check_pairing(AttackKind attack, const TopologySpec& topology) {
    if (attack == AttackKind::None)
        return;
    const std::string& name = topology.name;
    if (attack == AttackKind::Spoof1 && name != "topology_1")
        throw ValidationError("spoof1 runs on topology_1, not " + name);
    if ((attack == AttackKind::Spoof2 || attack == AttackKind::Dos) && name != "topology_2")
        throw ValidationError(std::string(to_string(attack)) + " runs on topology_2, not " + name);
}

struct SimOptions {
    std::string topology;
    std::int64_t duration_ms = 0;
    std::string attack = "none";
    std::string window;  // "startms:endms"
    std::int64_t jitter_us = 0;
    std::uint64_t seed = 0;
    double aperiodic_prob = 0.0;
    int spoof1_per_frame = 1;
    double spoof2_per_frame = 1.0;
    double dos_rate = 500.0;
    std::string out;
};

int run_sim(const SimOptions& options) {
    ScenarioConfig config;
    config.topology = resolve_topology(options.topology);
    config.attack = attack_kind_from_string(options.attack);
    check_pairing(config.attack, config.topology);
    if (options.duration_ms <= 0)
        throw ValidationError("duration must be at least one major frame");
    std::int64_t duration_us = options.duration_ms * 1000;
    if (config.attack != AttackKind::None) {
        if (options.window.empty())
            throw ValidationError("--attack-window is required when an attack is selected");
        auto colon = options.window.find(':');
        if (colon == std::string::npos)
            throw ValidationError("--attack-window must be start_ms:end_ms");
        config.attack_start_us = std::stoll(options.window.substr(0, colon)) * 1000;
        config.attack_end_us = std::stoll(options.window.substr(colon + 1)) * 1000;
    }
    config.jitter_us = options.jitter_us;
    config.seed = options.seed;
    config.params.spoof1_per_frame = options.spoof1_per_frame;
    config.params.spoof2_per_frame = options.spoof2_per_frame;
    config.params.dos_rate_per_sec = options.dos_rate;
    if (options.aperiodic_prob > 0.0) {
        // Event-driven traffic slot for benign background activity.
        AperiodicEntry entry;
        entry.message.dst_terminal = 10;
        entry.message.dst_subaddress = 9;
        entry.message.word_count = 1;
        entry.transfer_type = TransferType::BcToRt;
        entry.slot_offset_us = 600;
        entry.probability = options.aperiodic_prob;
        config.topology.aperiodic.push_back(entry);
    }

    InjectionReport report = simulate(config, duration_us);
    if (report.skipped_frames > 0)
        log_warn(std::to_string(report.skipped_frames) + " frame(s) lacked a usable idle slot");
    write_log(report.log, options.out);
    log_info("wrote " + std::to_string(report.log.size()) + " records (" +
             std::to_string(report.injected) + " injected) to " + options.out);
    std::printf("records=%zu injected=%d\n", report.log.size(), report.injected);
    return 0;
}

struct TrainOptions {
    std::string input;
    std::int64_t train_ms = 0;
    std::int64_t tolerance_us = 40;
    int rare_threshold = 5;
    int max_cycles = 3;
    std::string out_model;
};

int run_train(const TrainOptions& options) {
    if (options.train_ms <= 0)
        throw ValidationError("--train-ms must be positive");
    LogReadResult input = read_log(options.input);
    SplitResult split = split_log(input.records, options.train_ms * 1000);
    if (split.train.empty())
        throw ValidationError("training window contains no records");
    TrainParams params;
    params.tolerance_us = options.tolerance_us;
    params.rare_count_threshold = options.rare_threshold;
    params.max_cycles_threshold = options.max_cycles;
    ModelPair model = train(split.train, params);
    save_model(model, options.out_model);
    log_info("trained on " + std::to_string(split.train.size()) + " records, " +
             std::to_string(model.periodic_states.size()) + " periodic states, " +
             std::to_string(model.aperiodic_states.size()) + " message states");
    std::printf("trained_records=%zu periodic_states=%zu aperiodic_states=%zu\n", split.train.size(),
                model.periodic_states.size(), model.aperiodic_states.size());
    return 0;
}

int run_detect(const std::string& model_path, const std::string& input, const std::string& out) {
    ModelPair model = load_model(model_path);
    LogReadResult log = read_log(input);
    std::vector<Label> labels = detect_stream(log.records, model);
    write_log(log.records, labels, out);
    std::int64_t anomalies = 0;
    for (Label label : labels)
        if (label == Label::Anomaly)
            anomalies += 1;
    log_info("labeled " + std::to_string(labels.size()) + " records, " + std::to_string(anomalies) +
             " anomalies");
    std::printf("records=%zu anomalies=%lld\n", labels.size(), static_cast<long long>(anomalies));
    return 0;
}

int run_eval(const std::string& pred_path, const std::string& truth_path, bool assert_perfect) {
    LogReadResult pred = read_log(pred_path);
    if (pred.predicted.empty())
        throw ValidationError("prediction log carries no predicted_label field: " + pred_path);
    LogReadResult truth = read_log(truth_path);
    EvalResult result = evaluate(pred.records, pred.predicted, truth.records);
    std::fputs(format_metrics_report(result).c_str(), stdout);
    if (assert_perfect && !result.perfect()) {
        log_error("metrics are not perfect");
        return 1;
    }
    return 0;
}

int run_sweep(const std::string& input, std::int64_t segment_ms, const std::string& out_curve) {
    LogReadResult log = read_log(input);
    FalseAlarmCurve curve = training_time_sweep(log.records, segment_ms * 1000);
    write_curve(curve, out_curve);
    std::printf("points=%zu\n", curve.points.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1553 bus traffic simulator and anomaly detector"};
    app.require_subcommand(1);

    SimOptions sim;
    CLI::App* sim_cmd = app.add_subcommand("sim", "generate a traffic log");
    sim_cmd->add_option("--topology", sim.topology, "t1, t2, or a topology config file")->required();
    sim_cmd->add_option("--duration-ms", sim.duration_ms, "log duration in milliseconds")->required();
    sim_cmd->add_option("--attack", sim.attack, "none, spoof1, spoof2, dos");
    sim_cmd->add_option("--attack-window", sim.window, "attack window start_ms:end_ms");
    sim_cmd->add_option("--jitter-us", sim.jitter_us, "uniform timing jitter, < 40");
    sim_cmd->add_option("--seed", sim.seed, "RNG seed");
    sim_cmd->add_option("--aperiodic-prob", sim.aperiodic_prob,
                        "per-frame probability of an extra event-driven message");
    sim_cmd->add_option("--spoof1-per-frame", sim.spoof1_per_frame, "spoof1 injections per frame");
    sim_cmd->add_option("--spoof2-per-frame", sim.spoof2_per_frame,
                        "spoof2 forged broadcasts per frame (may be fractional)");
    sim_cmd->add_option("--dos-rate", sim.dos_rate, "dos flood records per second");
    sim_cmd->add_option("--out", sim.out, "output log path")->required();

    TrainOptions train_opts;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model on a log prefix");
    train_cmd->add_option("--input", train_opts.input, "input log")->required();
    train_cmd->add_option("--train-ms", train_opts.train_ms, "training window length")->required();
    train_cmd->add_option("--tolerance-us", train_opts.tolerance_us, "cycle clustering tolerance");
    train_cmd->add_option("--rare-threshold", train_opts.rare_threshold,
                          "occurrence count below which a message is aperiodic");
    train_cmd->add_option("--max-cycles", train_opts.max_cycles,
                          "cycle count above which a message is aperiodic");
    train_cmd->add_option("--out-model", train_opts.out_model, "output model path")->required();

    std::string detect_model, detect_input, detect_out;
    CLI::App* detect_cmd = app.add_subcommand("detect", "label a log with a trained model");
    detect_cmd->add_option("--model", detect_model, "model file")->required();
    detect_cmd->add_option("--input", detect_input, "input log")->required();
    detect_cmd->add_option("--out", detect_out, "output labeled log")->required();

    std::string eval_pred, eval_truth;
    bool assert_perfect = false;
    CLI::App* eval_cmd = app.add_subcommand("eval", "compare predictions against ground truth");
    eval_cmd->add_option("--pred", eval_pred, "labeled log from detect")->required();
    eval_cmd->add_option("--truth", eval_truth, "ground-truth log from sim")->required();
    eval_cmd->add_flag("--assert-perfect", assert_perfect,
                       "exit nonzero unless precision and recall are 1.0 for both classes");

    std::string sweep_input, sweep_out;
    std::int64_t segment_ms = 0;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "false-alarm rate vs training time");
    sweep_cmd->add_option("--input", sweep_input, "all-benign input log")->required();
    sweep_cmd->add_option("--segment-ms", segment_ms, "training segment length")->required();
    sweep_cmd->add_option("--out-curve", sweep_out, "output curve file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed())
            return run_sim(sim);
        if (train_cmd->parsed())
            return run_train(train_opts);
        if (detect_cmd->parsed())
            return run_detect(detect_model, detect_input, detect_out);
        if (eval_cmd->parsed())
            return run_eval(eval_pred, eval_truth, assert_perfect);
        if (sweep_cmd->parsed()) {
            if (segment_ms <= 0)
                throw milbus::ValidationError("--segment-ms must be positive");
            return run_sweep(sweep_input, segment_ms, sweep_out);
        }
    } catch (const std::exception& e) {
        milbus::log_error(e.what());
        return 1;
    }
    return 0;
}
