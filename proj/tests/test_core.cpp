#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dicert/core.hpp"
#include "dicert/error.hpp"
#include "reference_data.hpp"

using namespace dicert;

TEST_CASE("settings distribution factories") {
    auto u = SettingsDistribution::uniform();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(u.prob(x, y) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(u.q() == doctest::Approx(0.25));
    CHECK(u.is_uniform());

    auto b = SettingsDistribution::biased_00(0.1);
    CHECK(b.prob(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(b.prob(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(b.prob(1, 0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(b.prob(1, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(b.q() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_FALSE(b.is_uniform());

    auto p = SettingsDistribution::product_biased(0.2);
    CHECK(p.prob(0, 0) == doctest::Approx(0.64).epsilon(1e-15));
    CHECK(p.prob(0, 1) == doctest::Approx(0.16).epsilon(1e-15));
    CHECK(p.prob(1, 0) == doctest::Approx(0.16).epsilon(1e-15));
    CHECK(p.prob(1, 1) == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(p.q() == doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("settings distribution validation") {
    CHECK_THROWS_AS(SettingsDistribution::biased_00(0.0), Error);
    CHECK_THROWS_AS(SettingsDistribution::biased_00(0.2500001), Error);
    CHECK_THROWS_AS(SettingsDistribution::biased_00(-0.1), Error);
    CHECK(SettingsDistribution::biased_00(0.25).is_uniform());
    CHECK_THROWS_AS(SettingsDistribution::product_biased(0.0), Error);
    CHECK_THROWS_AS(SettingsDistribution::product_biased(1.0), Error);
    CHECK_THROWS_AS(SettingsDistribution::custom({0.5, 0.5, 0.25, -0.25}), Error);
    CHECK_THROWS_AS(SettingsDistribution::custom({0.3, 0.3, 0.3, 0.3}), Error);
    CHECK_NOTHROW(SettingsDistribution::custom({0.4, 0.3, 0.2, 0.1}));
}

TEST_CASE("counts table indexing and marginals") {
    CountsTable t = reference_counts();
    CHECK(t.count(0, 0, 0, 0) == 293);
    CHECK(t.count(0, 1, 1, 1) == 340);
    CHECK(t.n_xy(0, 0) == 752);
    CHECK(t.n_xy(0, 1) == 751);
    CHECK(t.n_xy(1, 0) == 707);
    CHECK(t.n_xy(1, 1) == 806);
    CHECK(t.total() == 3016);
}

TEST_CASE("ingest_log validates rounds and values") {
    std::vector<std::array<long long, 5>> rows = {
        {1, 0, 1, 1, 1}, {2, 1, 0, 0, 1}, {3, 1, 1, 0, 0}};
    TrialLog log = ingest_log(rows);
    CHECK(log.n() == 3);
    CHECK(log.trials[1].x == 1);
    CHECK(log.trials[1].b == 1);

    CHECK_THROWS_AS(ingest_log({}), Error);
    CHECK_THROWS_AS(ingest_log({{0, 0, 0, 0, 0}}), Error);              // rounds are 1-based
    CHECK_THROWS_AS(ingest_log({{1, 0, 0, 0, 0}, {3, 0, 0, 0, 0}}), Error); // gap
    CHECK_THROWS_AS(ingest_log({{1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}}), Error); // duplicate
    CHECK_THROWS_AS(ingest_log({{1, 2, 0, 0, 0}}), Error);              // x out of range
    CHECK_THROWS_AS(ingest_log({{1, 0, 0, -1, 0}}), Error);             // a out of range
}

TEST_CASE("aggregate counts every trial once") {
    std::vector<std::array<long long, 5>> rows;
    for (int i = 0; i < 32; ++i)
        rows.push_back({i + 1, (i >> 1) & 1, i & 1, (i >> 2) & 1, (i >> 3) & 1});
    CountsTable t = aggregate(ingest_log(rows));
    CHECK(t.total() == 32);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) CHECK(t.count(a, b, x, y) == 2);
}

TEST_CASE("conditional probabilities from the reference counts") {
    CountsTable t = reference_counts();
    auto p = conditional_probs(t);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double sum = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) sum += p[CountsTable::index(a, b, x, y)];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
        }
    double same00 = p[CountsTable::index(0, 0, 0, 0)] + p[CountsTable::index(1, 1, 0, 0)];
    double same11 = p[CountsTable::index(0, 0, 1, 1)] + p[CountsTable::index(1, 1, 1, 1)];
    CHECK(same00 == doctest::Approx(0.7819148936170213).epsilon(1e-15));
    CHECK(same11 == doctest::Approx(0.19478908188585609).epsilon(1e-15));

    CountsTable empty_cell = t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) empty_cell.count(a, b, 1, 1) = 0;
    CHECK_THROWS_AS(conditional_probs(empty_cell), Error);
}

TEST_CASE("trial CSV round-trip") {
    std::vector<std::array<long long, 5>> rows;
    for (int i = 0; i < 100; ++i)
        rows.push_back({i + 1, (i * 3) % 2, (i * 5) % 2, (i * 7) % 2, (i * 11) % 2});
    TrialLog log = ingest_log(rows);
    const char* path = "trials_roundtrip.tmp";
    write_trial_csv(path, log);
    TrialLog back = read_trial_csv(path);
    REQUIRE(back.n() == log.n());
    for (std::size_t i = 0; i < log.n(); ++i) {
        CHECK(back.trials[i].round == log.trials[i].round);
        CHECK(back.trials[i].x == log.trials[i].x);
        CHECK(back.trials[i].y == log.trials[i].y);
        CHECK(back.trials[i].a == log.trials[i].a);
        CHECK(back.trials[i].b == log.trials[i].b);
    }
    std::remove(path);
}

TEST_CASE("trial CSV rejects malformed input") {
    const char* path = "trials_bad.tmp";
    auto write = [&](const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        f << text;
    };
    write("round,x,y,a,b\r\n1,0,1,1,0\r\n2,1,1,0,0\r\n");
    CHECK(read_trial_csv(path).n() == 2); // CRLF tolerated

    write("wrong,header,line,here,x\n1,0,1,1,0\n");
    CHECK_THROWS_AS(read_trial_csv(path), Error);
    write("round,x,y,a,b\n1,0,1,1\n");
    CHECK_THROWS_AS(read_trial_csv(path), Error); // four fields
    write("round,x,y,a,b\n1,0,1,1,0,9\n");
    CHECK_THROWS_AS(read_trial_csv(path), Error); // six fields
    write("round,x,y,a,b\n1,0,zz,1,0\n");
    CHECK_THROWS_AS(read_trial_csv(path), Error); // non-integer
    write("round,x,y,a,b\n");
    CHECK_THROWS_AS(read_trial_csv(path), Error); // empty log
    std::remove(path);
    CHECK_THROWS_AS(read_trial_csv("definitely_missing.csv"), Error);
}

TEST_CASE("counts JSON round-trip and validation") {
    CountsTable t = reference_counts();
    std::string doc = counts_to_json(t);
    CountsTable back = counts_from_json(doc);
    for (std::size_t i = 0; i < 16; ++i) CHECK(back.counts[i] == t.counts[i]);

    const char* path = "counts_roundtrip.tmp";
    write_counts_json(path, t);
    CountsTable file_back = read_counts_json(path);
    CHECK(file_back.total() == 3016);
    std::remove(path);

    // n must equal the sum of the counts.
    std::string tampered = doc;
    auto pos = tampered.find("3016");
    tampered.replace(pos, 4, "3017");
    CHECK_THROWS_AS(counts_from_json(tampered), Error);
    // Exactly 16 cells.
    std::string missing = doc;
    auto cut = missing.find("\"0,0,0,1\"");
    auto comma = missing.find(',', missing.find(':', cut));
    missing.erase(cut, comma - cut + 1);
    CHECK_THROWS_AS(counts_from_json(missing), Error);
    CHECK_THROWS_AS(counts_from_json("{\"n\": 1}"), Error);
    CHECK_THROWS_AS(counts_from_json("not json at all"), Error);
}
