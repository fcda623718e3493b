#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "valex/error.hpp"
#include "valex/eval.hpp"
#include "valex/pipeline.hpp"
#include "valex/synth.hpp"

using namespace valex;

namespace {

Lexicon lexicon_from(const std::string& text) {
    std::istringstream in(text);
    return read_lexicon(in);
}

std::string lexicon_to(const Lexicon& lex) {
    std::ostringstream out;
    write_lexicon(lex, out);
    return out.str();
}

std::vector<std::string> all_verbs(const Lexicon& lex) {
    std::vector<std::string> verbs;
    for (const auto& [v, fs] : lex.entries) verbs.push_back(v);
    return verbs;
}

}  // namespace

TEST_CASE("preliminary lexicon mass equals the clause count") {
    SynthConfig cfg;
    cfg.seed = 11;
    cfg.n_verbs = 6;
    cfg.ambiguity_min = 1;
    cfg.ambiguity_max = 4;
    Bank bank = gen_bank(gen_gold(cfg), cfg);

    for (CountingMode mode : {CountingMode::Hard, CountingMode::Soft}) {
        PipelineConfig pc;
        pc.counting = mode;
        Lexicon prelim = preliminary_lexicon(bank, pc);
        double mass = 0;
        for (const auto& [v, fs] : prelim.entries)
            for (const auto& [f, c] : fs) mass += c;
        CHECK(mass == doctest::Approx(static_cast<double>(bank.forests.size())));
    }
}

TEST_CASE("two-stage run recovers a clean synthetic dictionary") {
    SynthConfig cfg;
    cfg.seed = 3;
    cfg.n_verbs = 10;
    cfg.noise = 0.0;
    cfg.min_frame_obs = 10;
    cfg.ambiguity_min = 1;
    cfg.ambiguity_max = 3;
    Lexicon gold = gen_gold(cfg);
    Bank bank = gen_bank(gold, cfg);

    PipelineConfig pc;
    Lexicon out = run_two_stage(bank, gold, pc);
    PRF score = prf(out, gold, EvalLevel::Frame, all_verbs(gold));
    CHECK(score.precision == doctest::Approx(1.0));
    CHECK(score.recall == doctest::Approx(1.0));
}

TEST_CASE("two-stage output frame sets are reconstruction-stable") {
    SynthConfig cfg;
    cfg.seed = 21;
    cfg.n_verbs = 8;
    cfg.noise = 0.1;
    cfg.min_frame_obs = 3;
    cfg.ambiguity_min = 1;
    cfg.ambiguity_max = 4;
    Lexicon gold = gen_gold(cfg);
    Bank bank = gen_bank(gold, cfg);

    PipelineConfig pc;
    Lexicon out = run_two_stage(bank, gold, pc);
    REQUIRE_FALSE(out.entries.empty());
    for (const auto& [verb, frames] : out.entries) {
        FrameSet fs;
        for (const auto& [f, c] : frames) {
            CHECK(c == 1.0);
            fs.insert(f);
        }
        REQUIRE(reconstruct_dp(derive_triple(fs)) == fs);
    }
}

TEST_CASE("two-stage records stage statistics") {
    SynthConfig cfg;
    cfg.seed = 8;
    cfg.n_verbs = 5;
    Lexicon gold = gen_gold(cfg);
    Bank bank = gen_bank(gold, cfg);

    StageStats stats;
    run_two_stage(bank, gold, PipelineConfig{}, &stats);
    bool saw_prelim = false, saw_output = false;
    for (const auto& [stage, value] : stats.rows) {
        if (stage == "prelim_verbs") saw_prelim = true;
        if (stage == "output_pairs") saw_output = true;
    }
    CHECK(saw_prelim);
    CHECK(saw_output);
}

TEST_CASE("bht run keeps well-attested frames only") {
    SynthConfig cfg;
    cfg.seed = 14;
    cfg.n_verbs = 8;
    cfg.noise = 0.0;
    cfg.min_frame_obs = 5;
    cfg.ambiguity_min = 2;
    cfg.ambiguity_max = 4;
    Lexicon gold = gen_gold(cfg);
    Bank bank = gen_bank(gold, cfg);

    Lexicon out = run_bht(bank, gold, PipelineConfig{});
    REQUIRE_FALSE(out.entries.empty());
    PRF score = prf(out, gold, EvalLevel::Frame, all_verbs(gold));
    CHECK(score.f > 0.8);
    for (const auto& [verb, frames] : out.entries)
        for (const auto& [f, c] : frames) CHECK(c == 1.0);
}

TEST_CASE("pipelines reject an empty training lexicon") {
    SynthConfig cfg;
    cfg.seed = 2;
    cfg.n_verbs = 3;
    Lexicon gold = gen_gold(cfg);
    Bank bank = gen_bank(gold, cfg);
    CHECK_THROWS_AS(run_two_stage(bank, Lexicon{}, PipelineConfig{}), DataError);
    CHECK_THROWS_AS(run_bht(bank, Lexicon{}, PipelineConfig{}), DataError);
}

TEST_CASE("combine fixtures") {
    Lexicon l1 = lexicon_from("v\ta\t3\nv\tb\t1\nw\tc\t2\n");
    Lexicon l2 = lexicon_from("v\ta\t1\nv\tc\t5\n");
    Lexicon l3 = lexicon_from("v\ta\t2\nw\tc\t4\n");

    Lexicon u = combine({l1, l2, l3}, CombineMode::Union);
    CHECK(u.entries.at("v").at(Frame::parse("a")) == 3.0);
    CHECK(u.entries.at("v").at(Frame::parse("c")) == 5.0);
    CHECK(u.entries.at("w").at(Frame::parse("c")) == 4.0);

    Lexicon i = combine({l1, l2, l3}, CombineMode::Intersection);
    CHECK(i.entries.size() == 1);
    CHECK(i.entries.at("v").size() == 1);
    CHECK(i.entries.at("v").at(Frame::parse("a")) == 1.0);

    // v is listed by all three sources, w by two.
    Lexicon m = combine({l1, l2, l3}, CombineMode::Majority);
    CHECK(m.contains("v", Frame::parse("a")));       // 3 of 3
    CHECK_FALSE(m.contains("v", Frame::parse("b")));  // 1 of 3
    CHECK_FALSE(m.contains("v", Frame::parse("c")));  // 1 of 3
    CHECK(m.contains("w", Frame::parse("c")));        // 2 of the 2 listing w

    Lexicon m2 = combine({l1, l3}, CombineMode::Majority);
    CHECK(m2.contains("w", Frame::parse("c")));       // 2 of 2
    CHECK_FALSE(m2.contains("v", Frame::parse("b")));  // 1 of 2

    CHECK_THROWS_AS(combine({}, CombineMode::Union), DataError);
    CHECK_THROWS_AS(combine({l1}, CombineMode::Majority), DataError);
}

TEST_CASE("combine algebraic properties") {
    std::mt19937_64 rng(67);
    for (int it = 0; it < 30; ++it) {
        std::vector<Lexicon> lexica;
        for (int s = 0; s < 3; ++s) {
            Lexicon lex;
            for (int v = 0; v < 4; ++v)
                for (const Frame& f :
                     valex::testing::random_frame_set(rng, 4, 4))
                    lex.add("v" + std::to_string(v), f, 1.0);
            lexica.push_back(std::move(lex));
        }
        Lexicon u = combine(lexica, CombineMode::Union);
        Lexicon i = combine(lexica, CombineMode::Intersection);
        Lexicon m = combine(lexica, CombineMode::Majority);
        for (const Lexicon& lex : lexica)
            for (const auto& [verb, frames] : lex.entries)
                for (const auto& [f, c] : frames) REQUIRE(u.contains(verb, f));
        for (const auto& [verb, frames] : i.entries)
            for (const auto& [f, c] : frames) {
                for (const Lexicon& lex : lexica) REQUIRE(lex.contains(verb, f));
                REQUIRE(m.contains(verb, f));
                REQUIRE(u.contains(verb, f));
            }
        // Self-combination is the identity on the pair set.
        Lexicon self = combine({lexica[0], lexica[0]}, CombineMode::Intersection);
        REQUIRE(lexicon_to(self) == lexicon_to(lexica[0]));
    }
}

TEST_CASE("pipeline runs are deterministic") {
    SynthConfig cfg;
    cfg.seed = 31;
    cfg.n_verbs = 8;
    cfg.noise = 0.15;
    cfg.min_frame_obs = 3;
    cfg.ambiguity_min = 2;
    cfg.ambiguity_max = 5;
    Lexicon gold = gen_gold(cfg);
    Bank bank = gen_bank(gold, cfg);

    PipelineConfig pc;
    pc.seed = 99;
    std::string a = lexicon_to(run_two_stage(bank, gold, pc));
    std::string b = lexicon_to(run_two_stage(bank, gold, pc));
    CHECK(a == b);
    std::string c = lexicon_to(run_bht(bank, gold, pc));
    std::string d = lexicon_to(run_bht(bank, gold, pc));
    CHECK(c == d);
}
