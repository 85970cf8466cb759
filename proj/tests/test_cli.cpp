#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "milbus/topology.hpp"
#include "support/temp_files.hpp"

using namespace milbus;
using namespace milbus::testsupport;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CommandResult run_cli(const std::string& args) {
    auto out_path = unique_path("cli_stdout", ".txt");
    auto err_path = unique_path("cli_stderr", ".txt");
    std::string command = std::string(MILBUS_CLI_PATH) + " " + args + " > " + out_path.string() +
                          " 2> " + err_path.string();
    int status = std::system(command.c_str());
    CommandResult result;
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    result.out = read_text(out_path);
    result.err = read_text(err_path);
    return result;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("sim writes one record per line and reports the count") {
    auto log = unique_path("cli_sim");
    CommandResult result = run_cli("sim --topology t2 --duration-ms 20 --out " + log.string());
    CHECK(result.exit_code == 0);
    CHECK(result.out == "records=5 injected=0\n");
    CHECK(line_count(read_text(log)) == 5);
}

TEST_CASE("sim rejects a zero duration and partial frames") {
    auto log = unique_path("cli_sim_bad");
    CommandResult result = run_cli("sim --topology t2 --duration-ms 0 --out " + log.string());
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("duration") != std::string::npos);
    CHECK(run_cli("sim --topology t2 --duration-ms 7 --out " + log.string()).exit_code == 1);
}

TEST_CASE("sim is reproducible for a fixed seed") {
    auto a = unique_path("cli_seed_a");
    auto b = unique_path("cli_seed_b");
    auto c = unique_path("cli_seed_c");
    std::string base = "sim --topology t1 --duration-ms 1000 --jitter-us 30 ";
    CHECK(run_cli(base + "--seed 7 --out " + a.string()).exit_code == 0);
    CHECK(run_cli(base + "--seed 7 --out " + b.string()).exit_code == 0);
    CHECK(run_cli(base + "--seed 8 --out " + c.string()).exit_code == 0);
    CHECK(read_text(a) == read_text(b));
    CHECK(read_text(a) != read_text(c));
}

TEST_CASE("a topology config file behaves exactly like its builtin") {
    auto spec = unique_path("cli_topo", ".json");
    save_topology(topology_2(), spec);
    auto from_file = unique_path("cli_topo_log");
    auto builtin = unique_path("cli_builtin_log");
    CHECK(run_cli("sim --topology " + spec.string() + " --duration-ms 200 --seed 3 --out " +
                  from_file.string())
              .exit_code == 0);
    CHECK(run_cli("sim --topology t2 --duration-ms 200 --seed 3 --out " + builtin.string())
              .exit_code == 0);
    CHECK(read_text(from_file) == read_text(builtin));
}

TEST_CASE("attacks are tied to the topology they target") {
    auto log = unique_path("cli_pairing");
    CommandResult result = run_cli(
        "sim --topology t2 --duration-ms 100 --attack spoof1 --attack-window 20:80 --out " +
        log.string());
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("topology_1") != std::string::npos);

    result = run_cli("sim --topology t1 --duration-ms 400 --attack dos --attack-window 80:320 --out " +
                     log.string());
    CHECK(result.exit_code == 1);
}

TEST_CASE("an attack requires a window") {
    auto log = unique_path("cli_nowindow");
    CommandResult result =
        run_cli("sim --topology t2 --duration-ms 100 --attack dos --out " + log.string());
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("attack-window") != std::string::npos);
}

TEST_CASE("the full pipeline reaches perfect metrics on a flood") {
    auto log = unique_path("cli_pipe_log");
    auto model = unique_path("cli_pipe_model", ".json");
    auto pred = unique_path("cli_pipe_pred");

    CommandResult sim = run_cli(
        "sim --topology t2 --duration-ms 3000 --attack dos --attack-window 2000:2800 "
        "--dos-rate 500 --seed 1 --out " +
        log.string());
    CHECK(sim.exit_code == 0);
    CHECK(sim.out == "records=1150 injected=400\n");

    CommandResult train = run_cli("train --input " + log.string() + " --train-ms 1500 --out-model " +
                                  model.string());
    CHECK(train.exit_code == 0);
    CHECK(train.out == "trained_records=375 periodic_states=5 aperiodic_states=5\n");

    CommandResult detect = run_cli("detect --model " + model.string() + " --input " + log.string() +
                                   " --out " + pred.string());
    CHECK(detect.exit_code == 0);
    CHECK(detect.out == "records=1150 anomalies=400\n");

    CommandResult eval = run_cli("eval --pred " + pred.string() + " --truth " + log.string() +
                                 " --assert-perfect");
    CHECK(eval.exit_code == 0);
    CHECK(eval.out.find("records evaluated: 1150") != std::string::npos);
    CHECK(eval.out.find("anomaly  precision 1.000000  recall 1.000000") != std::string::npos);
    CHECK(eval.out.find("benign   precision 1.000000  recall 1.000000") != std::string::npos);
}

TEST_CASE("train refuses an empty or attacked training window") {
    auto log = unique_path("cli_train_log");
    auto model = unique_path("cli_train_model", ".json");
    CHECK(run_cli("sim --topology t2 --duration-ms 1000 --attack dos --attack-window 400:800 --out " +
                  log.string())
              .exit_code == 0);

    CommandResult result = run_cli("train --input " + log.string() + " --train-ms 0 --out-model " +
                                   model.string());
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("train-ms") != std::string::npos);

    result = run_cli("train --input " + log.string() + " --train-ms 600 --out-model " + model.string());
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("Anomaly") != std::string::npos);
}

TEST_CASE("eval refuses a prediction log without predicted labels") {
    auto log = unique_path("cli_eval_log");
    CHECK(run_cli("sim --topology t2 --duration-ms 100 --out " + log.string()).exit_code == 0);
    CommandResult result = run_cli("eval --pred " + log.string() + " --truth " + log.string());
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("predicted_label") != std::string::npos);
}

TEST_CASE("eval exits nonzero under --assert-perfect when metrics fall short") {
    auto log = unique_path("cli_imperfect_log");
    auto model = unique_path("cli_imperfect_model", ".json");
    auto pred = unique_path("cli_imperfect_pred");
    // A single frame of training never sees its own wrap-around transition,
    // so every later frame boundary alarms.
    CHECK(run_cli("sim --topology t2 --duration-ms 1000 --out " + log.string()).exit_code == 0);
    CHECK(run_cli("train --input " + log.string() + " --train-ms 20 --out-model " + model.string())
              .exit_code == 0);
    CHECK(run_cli("detect --model " + model.string() + " --input " + log.string() + " --out " +
                  pred.string())
              .exit_code == 0);
    CommandResult eval = run_cli("eval --pred " + pred.string() + " --truth " + log.string() +
                                 " --assert-perfect");
    CHECK(eval.exit_code == 1);
}

TEST_CASE("sweep writes a curve file") {
    auto log = unique_path("cli_sweep_log");
    auto curve = unique_path("cli_sweep_curve", ".tsv");
    CHECK(run_cli("sim --topology t2 --duration-ms 2000 --out " + log.string()).exit_code == 0);
    CommandResult result = run_cli("sweep --input " + log.string() + " --segment-ms 500 --out-curve " +
                                   curve.string());
    CHECK(result.exit_code == 0);
    CHECK(result.out == "points=3\n");
    std::string text = read_text(curve);
    CHECK(text.find("# training_duration_us\tfalse_alarm_rate") == 0);
    CHECK(line_count(text) == 5);  // two header lines plus three points

    CHECK(run_cli("sweep --input " + log.string() + " --segment-ms 0 --out-curve " + curve.string())
              .exit_code == 1);
}

TEST_CASE("unknown flags and subcommands are rejected") {
    CHECK(run_cli("sim --topology t2 --duration-ms 20 --frobnicate --out /dev/null").exit_code != 0);
    CHECK(run_cli("frobnicate").exit_code != 0);
    CHECK(run_cli("").exit_code != 0);
}

TEST_CASE("missing input files fail cleanly") {
    CHECK(run_cli("train --input /nonexistent.jsonl --train-ms 100 --out-model /dev/null").exit_code ==
          1);
    CHECK(run_cli("detect --model /nonexistent.json --input /nonexistent.jsonl --out /dev/null")
              .exit_code == 1);
}
