#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "milbus/cycles.hpp"

using namespace milbus;

namespace {

// Brute-force reference: a clustering is valid iff consecutive sorted values
// within a cluster differ by at most the tolerance and the jump between
// clusters exceeds it. Single pass over the sorted values reproduces it.
std::vector<std::vector<std::int64_t>> reference_clusters(std::vector<std::int64_t> deltas,
                                                          std::int64_t tolerance) {
    std::sort(deltas.begin(), deltas.end());
    std::vector<std::vector<std::int64_t>> out;
    for (std::int64_t value : deltas) {
        if (out.empty() || value - out.back().back() > tolerance)
            out.push_back({});
        out.back().push_back(value);
    }
    return out;
}

}  // namespace

TEST_CASE("a steady 20 ms message yields a single 20000 us cycle") {
    std::vector<std::int64_t> timestamps = {0, 20000, 40000, 60000};
    std::vector<double> cycles = extract_time_cycles(timestamps, 40);
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0] == doctest::Approx(20000.0));
}

TEST_CASE("nearby deltas merge, distant deltas split") {
    // Deltas 19990, 20010 and 80000: the first two are 20 us apart and fuse
    // into one 20 ms cycle; the third stands alone.
    std::vector<std::int64_t> timestamps = {0, 19990, 40000, 120000};
    std::vector<double> cycles = extract_time_cycles(timestamps, 40);
    REQUIRE(cycles.size() == 2);
    CHECK(cycles[0] == doctest::Approx(20000.0));
    CHECK(cycles[1] == doctest::Approx(80000.0));
}

TEST_CASE("boundary gaps: exactly tolerance merges, one past splits") {
    std::vector<CycleCluster> merged = cluster_deltas({1000, 1040}, 40);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].count == 2);
    CHECK(merged[0].mean() == doctest::Approx(1020.0));

    std::vector<CycleCluster> split = cluster_deltas({1000, 1041}, 40);
    REQUIRE(split.size() == 2);
    CHECK(split[0].min == 1000);
    CHECK(split[1].max == 1041);
}

TEST_CASE("chained neighbors merge even when the extremes are far apart") {
    // 100, 130, 160, 190: each neighbor gap is 30 <= 40, so one cluster
    // spans 90 us even though 190 - 100 exceeds the tolerance.
    std::vector<CycleCluster> clusters = cluster_deltas({190, 100, 160, 130}, 40);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].min == 100);
    CHECK(clusters[0].max == 190);
    CHECK(clusters[0].sum == 580);
    CHECK(clusters[0].count == 4);
}

TEST_CASE("cluster statistics are exact integers") {
    std::vector<CycleCluster> clusters = cluster_deltas({19990, 20010, 20011, 80000}, 40);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].sum == 60011);
    CHECK(clusters[0].count == 3);
    CHECK(clusters[0].min == 19990);
    CHECK(clusters[0].max == 20011);
    CHECK(clusters[1].sum == 80000);
    CHECK(clusters[1].count == 1);
}

TEST_CASE("fewer than two timestamps yield no cycles") {
    CHECK(extract_time_cycles({}, 40).empty());
    CHECK(extract_time_cycles({12345}, 40).empty());
    CHECK(cluster_deltas({}, 40).empty());
}

TEST_CASE("clustering matches the reference on random inputs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> value(0, 100000);
    std::uniform_int_distribution<int> length(0, 12);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::int64_t> deltas(length(rng));
        for (std::int64_t& d : deltas)
            d = value(rng);
        auto expected = reference_clusters(deltas, 40);
        auto actual = cluster_deltas(deltas, 40);
        REQUIRE(actual.size() == expected.size());
        for (std::size_t i = 0; i < actual.size(); ++i) {
            CHECK(actual[i].count == static_cast<std::int64_t>(expected[i].size()));
            CHECK(actual[i].min == expected[i].front());
            CHECK(actual[i].max == expected[i].back());
            std::int64_t sum = 0;
            for (std::int64_t d : expected[i])
                sum += d;
            CHECK(actual[i].sum == sum);
        }
    }
}

TEST_CASE("classification thresholds") {
    CycleSet cs;
    cs.clusters = {{60000, 3, 19990, 20010}};

    SUBCASE("rare messages are aperiodic regardless of their cycles") {
        cs.occurrence_count = 4;
        CHECK(classify_message(cs, 5, 3) == MessageClass::Aperiodic);
        cs.occurrence_count = 5;
        CHECK(classify_message(cs, 5, 3) == MessageClass::Periodic);
    }
    SUBCASE("too many distinct cycles means aperiodic") {
        cs.occurrence_count = 100;
        cs.clusters = {{100, 1, 100, 100}, {500, 1, 500, 500}, {900, 1, 900, 900}};
        CHECK(classify_message(cs, 5, 3) == MessageClass::Periodic);
        cs.clusters.push_back({5000, 1, 5000, 5000});
        CHECK(classify_message(cs, 5, 3) == MessageClass::Aperiodic);
    }
    SUBCASE("no observable cycle means aperiodic") {
        cs.occurrence_count = 10;
        cs.clusters.clear();
        CHECK(classify_message(cs, 1, 3) == MessageClass::Aperiodic);
    }
}

TEST_CASE("message class names round-trip") {
    CHECK(message_class_from_string(to_string(MessageClass::Periodic)) == MessageClass::Periodic);
    CHECK(message_class_from_string(to_string(MessageClass::Aperiodic)) == MessageClass::Aperiodic);
}
