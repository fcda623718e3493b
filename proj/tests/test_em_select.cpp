#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "valex/em_select.hpp"
#include "valex/error.hpp"
#include "valex/synth.hpp"

using namespace valex;

namespace {

Bank worked_bank() {
    // A_1 = {j1, j2}, A_2 = {j1}, A_3 = {j2, j3}.
    std::istringstream in(
        "v | a\nv | b\n\n"
        "v | a\n\n"
        "v | b\nv | c\n");
    return read_bank(in);
}

double weight(const WeightTable& t, const char* frame) {
    return t.weights.at({"v", Frame::parse(frame)});
}

}  // namespace

TEST_CASE("em_weights hand-derived iterations") {
    Bank bank = worked_bank();

    WeightTable p1 = em_weights(bank, 1);
    CHECK(p1.iteration == 1);
    for (const auto& [type, w] : p1.weights) CHECK(w == 1.0);

    WeightTable p2 = em_weights(bank, 2);
    CHECK(weight(p2, "a") == doctest::Approx(0.5));
    CHECK(weight(p2, "b") == doctest::Approx(1.0 / 3.0));
    CHECK(weight(p2, "c") == doctest::Approx(1.0 / 6.0));

    WeightTable p3 = em_weights(bank, 3);
    CHECK(weight(p3, "a") == doctest::Approx(8.0 / 15.0));
    CHECK(weight(p3, "b") == doctest::Approx(16.0 / 45.0));
    CHECK(weight(p3, "c") == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("em_weights trivial banks") {
    // Fully unambiguous: p^(2) = count/M and stable thereafter.
    std::istringstream in("v | a\n\nv | a\n\nv | b\n\nw | c\n");
    Bank bank = read_bank(in);
    WeightTable p2 = em_weights(bank, 2);
    CHECK(weight(p2, "a") == doctest::Approx(0.5));
    WeightTable p9 = em_weights(bank, 9);
    CHECK(weight(p9, "a") == doctest::Approx(0.5));

    // All forests equal {j1, j2}: symmetric forever.
    std::istringstream in2("v | a\nv | b\n\nv | a\nv | b\n");
    Bank sym = read_bank(in2);
    for (int n : {2, 5, 10}) {
        WeightTable p = em_weights(sym, n);
        CHECK(weight(p, "a") == doctest::Approx(0.5));
        CHECK(weight(p, "b") == doctest::Approx(0.5));
    }

    CHECK_THROWS_AS(em_weights(Bank{}, 10), DataError);
}

TEST_CASE("log_likelihood of the worked example increases") {
    Bank bank = worked_bank();
    double l2 = log_likelihood(bank, em_weights(bank, 2));
    double l3 = log_likelihood(bank, em_weights(bank, 3));
    CHECK(l2 == doctest::Approx(std::log(5.0 / 24.0)));
    // (8/9) * (8/15) * (7/15) at p^(3).
    CHECK(l3 == doctest::Approx(std::log(448.0 / 2025.0)));
    CHECK(l3 > l2);

    std::istringstream in("v | a\n");
    Bank single = read_bank(in);
    CHECK(log_likelihood(single, em_weights(single, 2)) == doctest::Approx(0.0));
}

TEST_CASE("EM invariants on random banks") {
    std::mt19937_64 rng(29);
    for (int it = 0; it < 50; ++it) {
        Bank bank = valex::testing::random_bank(rng, 80, 6);
        double prev = -std::numeric_limits<double>::infinity();
        for (int n = 2; n <= 8; ++n) {
            WeightTable t = em_weights(bank, n);
            double sum = 0.0;
            for (const auto& [type, w] : t.weights) {
                REQUIRE(w >= 0.0);
                sum += w;
            }
            REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-9));
            double ll = log_likelihood(bank, t);
            REQUIRE(ll >= prev - 1e-9);
            prev = ll;
        }
        // Per-forest conditionals sum to 1 and vanish off-support.
        WeightTable t = em_weights(bank, 5);
        for (const ParseForest& forest : bank.forests) {
            auto cond = forest_conditionals(forest, t);
            double s = 0.0;
            for (double c : cond) s += c;
            REQUIRE(s == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("selection policies") {
    // Unique maximizer: chosen by EM policies regardless of seed.
    std::istringstream in(
        "v | a\n\nv | a\n\nv | a\nv | b,c\n");
    Bank bank = read_bank(in);
    WeightTable t = em_weights(bank, 10);
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        auto s1 = select(bank, t, SelectionPolicy::EmMax, seed);
        auto s2 = select(bank, t, SelectionPolicy::EmShort, seed);
        CHECK(s1[2].frame == Frame::parse("a"));
        CHECK(s2[2].frame == Frame::parse("a"));
    }
}

TEST_CASE("em-short breaks probability ties by length") {
    // Forest {j_a (2 args, p=0.4), j_b (1 arg, p=0.4), j_c (1 arg, p=0.2)}.
    Bank bank;
    ParseForest f;
    f.clause_id = 0;
    f.parses = {{"v", Frame::parse("x,y"), false},
                {"v", Frame::parse("x"), false},
                {"v", Frame::parse("z"), false}};
    bank.forests.push_back(f);
    WeightTable t;
    t.iteration = 2;
    t.weights[{"v", Frame::parse("x,y")}] = 0.4;
    t.weights[{"v", Frame::parse("x")}] = 0.4;
    t.weights[{"v", Frame::parse("z")}] = 0.2;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto sel = select(bank, t, SelectionPolicy::EmShort, seed);
        REQUIRE(sel[0].frame == Frame::parse("x"));
    }
}

TEST_CASE("blind selection is close to uniform") {
    Bank bank;
    for (int i = 0; i < 100000; ++i) {
        ParseForest f;
        f.clause_id = i;
        f.parses = {{"v", Frame::parse("a"), false},
                    {"v", Frame::parse("b"), false},
                    {"v", Frame::parse("c"), false},
                    {"v", Frame::parse("d"), false}};
        bank.forests.push_back(std::move(f));
    }
    WeightTable t = em_weights(bank, 2);
    auto sel = select(bank, t, SelectionPolicy::Blind, 42);
    std::map<std::string, int> hits;
    for (const ReducedParse& p : sel) ++hits[p.frame.str()];
    for (const auto& [frame, n] : hits)
        CHECK(n / 100000.0 == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("selection is reproducible under a fixed seed") {
    std::mt19937_64 rng(31);
    Bank bank = valex::testing::random_bank(rng, 120, 5);
    WeightTable t = em_weights(bank, 10);
    auto s1 = select(bank, t, SelectionPolicy::Blind, 7);
    auto s2 = select(bank, t, SelectionPolicy::Blind, 7);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) REQUIRE(s1[i] == s2[i]);
}

TEST_CASE("disambiguation accuracy") {
    std::istringstream in(
        "+ v | a\nv | b\n\n"
        "+ v | b\nv | a\n\n"
        "v | c\nv | d\n");
    Bank bank = read_bank(in);
    std::vector<ReducedParse> gold{{"v", Frame::parse("a"), false},
                                   {"v", Frame::parse("b"), false},
                                   {"v", Frame::parse("c"), false}};
    CHECK(disambiguation_accuracy(bank, gold) == doctest::Approx(1.0));

    std::vector<ReducedParse> wrong{{"v", Frame::parse("b"), false},
                                    {"v", Frame::parse("a"), false},
                                    {"v", Frame::parse("c"), false}};
    CHECK(disambiguation_accuracy(bank, wrong) == doctest::Approx(0.0));

    std::istringstream in2("v | a\nv | b\n");
    Bank nogold = read_bank(in2);
    std::vector<ReducedParse> sel{{"v", Frame::parse("a"), false}};
    CHECK_THROWS_AS(disambiguation_accuracy(nogold, sel), DataError);
}

TEST_CASE("em-short beats blind on noisy synthetic banks") {
    int em_wins = 0;
    for (std::uint64_t run = 0; run < 20; ++run) {
        SynthConfig cfg;
        cfg.seed = 1000 + run;
        cfg.n_verbs = 8;
        cfg.ambiguity_min = 2;
        cfg.ambiguity_max = 5;
        cfg.noise = 0.1;
        cfg.clauses_min = 40;
        cfg.clauses_max = 60;
        Lexicon gold = gen_gold(cfg);
        Bank bank = gen_bank(gold, cfg);
        WeightTable t = em_weights(bank, 10);
        double em = disambiguation_accuracy(
            bank, select(bank, t, SelectionPolicy::EmShort, run));
        double blind = disambiguation_accuracy(
            bank, select(bank, t, SelectionPolicy::Blind, run));
        if (em > blind) ++em_wins;
    }
    CHECK(em_wins >= 19);
}
