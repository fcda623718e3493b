#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "valex/error.hpp"
#include "valex/frame_core.hpp"

using namespace valex;
using valex::testing::przylapac_frames;
using valex::testing::random_frame_set;
using valex::testing::random_triple;

TEST_CASE("token normalization") {
    CHECK(normalize_token("  np(nom) ") == "np(nom)");
    CHECK(normalize_token("na +np(loc)") == "na+np(loc)");
    CHECK_THROWS_AS(normalize_token("   "), DataError);
    CHECK_THROWS_AS(normalize_token("a,b"), DataError);
    CHECK_THROWS_AS(normalize_token("a|b"), DataError);
}

TEST_CASE("frame canonical form") {
    Frame f({"sie", "np(nom)", "sie"});
    CHECK(f.str() == "np(nom),sie");
    CHECK(f == Frame::parse("sie, np(nom)"));
    CHECK(Frame::parse(f.str()) == f);
    CHECK(Frame::parse("").empty());
    CHECK(Frame::parse("np(nom)").size() == 1);
}

TEST_CASE("arg_sets on the przylapac entry") {
    auto [possible, required] = arg_sets(przylapac_frames());
    CHECK(possible == ArgSet{"np(nom)", "np(acc)", "sie", "na+np(loc)"});
    CHECK(required == ArgSet{"np(nom)"});
}

TEST_CASE("arg_sets corner cases") {
    CHECK_THROWS_AS(arg_sets(FrameSet{}), DataError);

    auto [l1, e1] = arg_sets(FrameSet{Frame::parse("a")});
    CHECK(l1 == ArgSet{"a"});
    CHECK(e1 == ArgSet{"a"});

    auto [l2, e2] = arg_sets(FrameSet{Frame{}});
    CHECK(l2.empty());
    CHECK(e2.empty());
}

TEST_CASE("relation_of on przylapac") {
    FrameSet f = przylapac_frames();
    CHECK(relation_of(f, "np(acc)", "sie") == Relation::Excl);
    CHECK(relation_of(f, "sie", "na+np(loc)") == Relation::Impl);
    CHECK(relation_of(f, "np(acc)", "np(acc)") == Relation::Cooc);
    CHECK_THROWS_AS(relation_of(f, "np(acc)", "zzz"), DataError);
}

TEST_CASE("cooc_matrix reproduces the printed 4x4 matrix") {
    CoocMatrix m = cooc_matrix(przylapac_frames());
    REQUIRE(m.order.size() == 4);
    // Row/column order is canonical (sorted): na+np(loc), np(acc), np(nom), sie.
    CHECK(m.at("np(nom)", "np(nom)") == Relation::Cooc);
    CHECK(m.at("np(nom)", "np(acc)") == Relation::ImplBy);
    CHECK(m.at("np(nom)", "sie") == Relation::ImplBy);
    CHECK(m.at("np(nom)", "na+np(loc)") == Relation::ImplBy);
    CHECK(m.at("np(acc)", "np(nom)") == Relation::Impl);
    CHECK(m.at("np(acc)", "sie") == Relation::Excl);
    CHECK(m.at("np(acc)", "na+np(loc)") == Relation::Indep);
    CHECK(m.at("sie", "np(nom)") == Relation::Impl);
    CHECK(m.at("sie", "np(acc)") == Relation::Excl);
    CHECK(m.at("sie", "na+np(loc)") == Relation::Impl);
    CHECK(m.at("na+np(loc)", "np(nom)") == Relation::Impl);
    CHECK(m.at("na+np(loc)", "np(acc)") == Relation::Indep);
    CHECK(m.at("na+np(loc)", "sie") == Relation::ImplBy);
}

TEST_CASE("cooc_matrix trivial families") {
    CoocMatrix single = cooc_matrix(FrameSet{Frame::parse("a,b")});
    CHECK(single.at("a", "b") == Relation::Cooc);

    CoocMatrix disjoint = cooc_matrix(FrameSet{Frame::parse("a"), Frame::parse("b")});
    CHECK(disjoint.at("a", "b") == Relation::Excl);
}

TEST_CASE("matrix invariants on random frame sets") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        FrameSet fs = random_frame_set(rng, 6, 8);
        CoocMatrix m = cooc_matrix(fs);
        std::size_t n = m.order.size();
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(m.at(i, i) == Relation::Cooc);
            for (std::size_t j = 0; j < n; ++j)
                REQUIRE(m.at(j, i) == converse(m.at(i, j)));
        }
    }
}

TEST_CASE("phi branch table") {
    CoocMatrix m = make_matrix({"a", "b"});
    Frame both = Frame::parse("a,b");
    Frame only_a = Frame::parse("a");

    m.set_pair(0, 1, Relation::Indep);
    CHECK(phi(both, m, "a", "b"));
    CHECK(phi(Frame{}, m, "a", "b"));

    m.set_pair(0, 1, Relation::Excl);
    CHECK_FALSE(phi(both, m, "a", "b"));
    CHECK(phi(only_a, m, "a", "b"));

    m.set_pair(0, 1, Relation::Impl);
    CHECK_FALSE(phi(only_a, m, "a", "b"));
    CHECK(phi(both, m, "a", "b"));

    m.set_pair(0, 1, Relation::Cooc);
    CHECK_FALSE(phi(only_a, m, "a", "b"));
    CHECK(phi(Frame{}, m, "a", "b"));
}

TEST_CASE("reconstruct_bruteforce on przylapac") {
    EntryTriple triple = derive_triple(przylapac_frames());
    FrameSet rebuilt = reconstruct_bruteforce(triple);
    FrameSet expected{
        Frame::parse("np(nom)"),
        Frame::parse("np(nom),np(acc)"),
        Frame::parse("np(nom),na+np(loc)"),
        Frame::parse("np(nom),np(acc),na+np(loc)"),
        Frame::parse("np(nom),sie,na+np(loc)"),
    };
    CHECK(rebuilt == expected);
    // Strict superset of the original three frames.
    for (const Frame& f : przylapac_frames()) CHECK(rebuilt.count(f));
    CHECK(rebuilt.size() > przylapac_frames().size());
}

TEST_CASE("reconstruct_bruteforce corner cases") {
    // required == possible forces the full frame.
    {
        EntryTriple t{{"a", "b"}, {"a", "b"}, make_matrix({"a", "b"})};
        CHECK(reconstruct_bruteforce(t) == FrameSet{Frame::parse("a,b")});
    }
    // All-Indep, nothing required: the whole power set.
    {
        EntryTriple t{{"a", "b", "c"}, {}, make_matrix({"a", "b", "c"})};
        CHECK(reconstruct_bruteforce(t).size() == 8);
    }
    // Size guard.
    {
        std::vector<ArgToken> big;
        for (int i = 0; i < 21; ++i) big.push_back("t" + std::to_string(i));
        ArgSet possible(big.begin(), big.end());
        EntryTriple t{possible, {}, make_matrix(big)};
        CHECK_THROWS_AS(reconstruct_bruteforce(t), NumericError);
    }
}

TEST_CASE("reconstruct_dp equals brute force exhaustively for |L| <= 3") {
    static constexpr Relation kAll[] = {Relation::Excl, Relation::Cooc,
                                        Relation::Impl, Relation::ImplBy,
                                        Relation::Indep};
    std::vector<ArgToken> order = {"a", "b", "c"};
    for (int r01 = 0; r01 < 5; ++r01)
        for (int r02 = 0; r02 < 5; ++r02)
            for (int r12 = 0; r12 < 5; ++r12)
                for (int req = 0; req < 8; ++req) {
                    CoocMatrix m = make_matrix(order);
                    m.set_pair(0, 1, kAll[r01]);
                    m.set_pair(0, 2, kAll[r02]);
                    m.set_pair(1, 2, kAll[r12]);
                    ArgSet required;
                    for (int i = 0; i < 3; ++i)
                        if (req & (1 << i)) required.insert(order[i]);
                    EntryTriple t{{"a", "b", "c"}, required, m};
                    REQUIRE(reconstruct_dp(t) == reconstruct_bruteforce(t));
                }
}

TEST_CASE("reconstruct_dp equals brute force on random triples") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        std::uniform_int_distribution<int> size(0, 6);
        EntryTriple t = random_triple(rng, size(rng));
        REQUIRE(reconstruct_dp(t) == reconstruct_bruteforce(t));
    }
}

TEST_CASE("reconstruct_dp with empty possible set") {
    EntryTriple t{{}, {}, make_matrix({})};
    CHECK(reconstruct_dp(t) == FrameSet{Frame{}});
}

TEST_CASE("superset and fixed-point properties") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 300; ++it) {
        FrameSet fs = random_frame_set(rng, 6, 10);
        EntryTriple t = derive_triple(fs);
        FrameSet rebuilt = reconstruct_dp(t);
        for (const Frame& f : fs) REQUIRE(rebuilt.count(f));
        REQUIRE(reconstruct_dp(derive_triple(rebuilt)) == rebuilt);
    }
}

TEST_CASE("agreement_score") {
    MatrixCollection c1, c2;
    c1.emplace("v", cooc_matrix(przylapac_frames()));
    c2.emplace("v", cooc_matrix(przylapac_frames()));
    CHECK(agreement_score(c1, c1) == doctest::Approx(1.0));
    CHECK(agreement_score(c1, c2) == doctest::Approx(1.0));

    // Single shared verb, args {a,b}, one differing off-diagonal pair:
    // 2 diagonal agreements, 2 disagreements.
    MatrixCollection d1, d2;
    CoocMatrix ma = make_matrix({"a", "b"});
    ma.set_pair(0, 1, Relation::Excl);
    CoocMatrix mb = make_matrix({"a", "b"});
    mb.set_pair(0, 1, Relation::Indep);
    d1.emplace("v", ma);
    d2.emplace("v", mb);
    CHECK(agreement_score(d1, d2) == doctest::Approx(0.5));
    CHECK(agreement_score(d1, d2) == doctest::Approx(agreement_score(d2, d1)));

    MatrixCollection e2;
    e2.emplace("other", mb);
    CHECK_THROWS_AS(agreement_score(d1, e2), DataError);
}
