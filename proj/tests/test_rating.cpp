#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ffarank/common.hpp"
#include "ffarank/rating.hpp"

using namespace ffarank;

namespace {

RatingConfig cfg() { return RatingConfig{}; }

std::vector<int> random_ranks(std::size_t n, Rng64& rng, bool allow_ties = false) {
    std::vector<int> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 1);
    shuffle_range(ranks, rng);
    if (allow_ties && n > 2 && rng.bounded(2) == 0) ranks[0] = ranks[1];
    return ranks;
}

}  // namespace

TEST_CASE("elo expected score example") {
    CHECK(elo_expected(1500.0, 1700.0, 400.0) ==
          doctest::Approx(0.2402530733520421).epsilon(1e-14));
    CHECK(elo_expected(1500.0, 1500.0, 400.0) == 0.5);
    // symmetry: E(a,b) + E(b,a) == 1
    CHECK(elo_expected(1650.0, 1480.0, 400.0) + elo_expected(1480.0, 1650.0, 400.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("three equal players finishing 1,2,3 land on 1516 / 1500 / 1484") {
    std::vector<EloState> states(3);
    const std::vector<int> ranks = {1, 2, 3};
    std::vector<EloState> out(3);
    elo_update_br(states, ranks, cfg(), out);
    CHECK(out[0].r == doctest::Approx(1516.0).epsilon(1e-12));
    CHECK(out[1].r == doctest::Approx(1500.0).epsilon(1e-12));
    CHECK(out[2].r == doctest::Approx(1484.0).epsilon(1e-12));
}

TEST_CASE("elo deltas sum to zero for random fields, ties included") {
    Rng64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.bounded(40);
        std::vector<EloState> states(n);
        for (auto& s : states) s.r = 1000.0 + rng.uniform01() * 1000.0;
        const auto ranks = random_ranks(n, rng, true);
        std::vector<EloState> out(n);
        elo_update_br(states, ranks, cfg(), out);
        double delta_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta_sum += out[i].r - states[i].r;
        CHECK(std::fabs(delta_sum) < 1e-9);
    }
}

TEST_CASE("elo update is equivariant under participant reordering") {
    Rng64 rng(12);
    const std::size_t n = 9;
    std::vector<EloState> states(n);
    for (auto& s : states) s.r = 1200.0 + rng.uniform01() * 600.0;
    const auto ranks = random_ranks(n, rng);
    std::vector<EloState> out(n);
    elo_update_br(states, ranks, cfg(), out);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle_range(perm, rng);
    std::vector<EloState> p_states(n);
    std::vector<int> p_ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        p_states[i] = states[perm[i]];
        p_ranks[i] = ranks[perm[i]];
    }
    std::vector<EloState> p_out(n);
    elo_update_br(p_states, p_ranks, cfg(), p_out);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(p_out[i].r == doctest::Approx(out[perm[i]].r).epsilon(1e-12));
    }
}

TEST_CASE("elo output may alias the input") {
    std::vector<EloState> states(4);
    states[0].r = 1600.0;
    states[3].r = 1400.0;
    std::vector<EloState> expected(4);
    elo_update_br(states, std::vector<int>{1, 2, 3, 4}, cfg(), expected);
    elo_update_br(states, std::vector<int>{1, 2, 3, 4}, cfg(), states);
    for (std::size_t i = 0; i < 4; ++i) CHECK(states[i].r == expected[i].r);
}

TEST_CASE("adjacent decomposition still conserves rating and spends full K") {
    RatingConfig adjacent = cfg();
    adjacent.decomposition = PairDecomposition::adjacent;
    std::vector<EloState> states(5);
    const std::vector<int> ranks = {1, 2, 3, 4, 5};
    std::vector<EloState> out(5);
    elo_update_br(states, ranks, adjacent, out);
    // equal ratings: winner beats one neighbour at E = 0.5 with full K
    CHECK(out[0].r == doctest::Approx(1516.0).epsilon(1e-12));
    CHECK(out[4].r == doctest::Approx(1484.0).epsilon(1e-12));
    // middle players win one and lose one
    for (std::size_t i = 1; i < 4; ++i) CHECK(out[i].r == doctest::Approx(1500.0).epsilon(1e-12));
    double delta_sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) delta_sum += out[i].r - states[i].r;
    CHECK(std::fabs(delta_sum) < 1e-9);
}

TEST_CASE("glicko g factor reference points") {
    CHECK(glicko_g(0.0) == 1.0);
    CHECK(glicko_g(350.0) == doctest::Approx(0.6690693971819845).epsilon(1e-12));
    CHECK(glicko_g(50.0) == doctest::Approx(0.9876424005852659).epsilon(1e-12));
    // monotone: more uncertainty, more damping
    CHECK(glicko_g(200.0) < glicko_g(100.0));
}

TEST_CASE("glicko head-to-head example: fresh winner lands on 1662.2") {
    std::vector<GlickoState> states(2);
    std::vector<GlickoState> out(2);
    glicko_update_br(states, std::vector<int>{1, 2}, cfg(), out);
    CHECK(out[0].r == doctest::Approx(1662.2120026057648).epsilon(1e-12));
    CHECK(out[0].rd == doctest::Approx(290.2305060910912).epsilon(1e-12));
    CHECK(out[1].r == doctest::Approx(1337.7879973942352).epsilon(1e-12));
    CHECK(out[1].rd == doctest::Approx(290.2305060910912).epsilon(1e-12));
}

TEST_CASE("glicko rd shrinks with every played match and respects the floor") {
    Rng64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.bounded(20);
        std::vector<GlickoState> states(n);
        for (auto& s : states) {
            s.r = 1200.0 + rng.uniform01() * 600.0;
            s.rd = 50.0 + rng.uniform01() * 300.0;
        }
        const auto ranks = random_ranks(n, rng, true);
        std::vector<GlickoState> out(n);
        glicko_update_br(states, ranks, cfg(), out);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(out[i].rd < states[i].rd);
            CHECK(out[i].rd >= cfg().glicko_rd_min);
            CHECK(out[i].rd <= cfg().glicko_rd_max);
        }
    }
}

TEST_CASE("glicko winner gains, loser loses") {
    std::vector<GlickoState> states(4);
    std::vector<GlickoState> out(4);
    glicko_update_br(states, std::vector<int>{1, 2, 3, 4}, cfg(), out);
    CHECK(out[0].r > states[0].r);
    CHECK(out[3].r < states[3].r);
    CHECK(out[0].r > out[1].r);
    CHECK(out[1].r > out[2].r);
    CHECK(out[2].r > out[3].r);
}

TEST_CASE("parallel entry points equal the serial reference bit for bit") {
    Rng64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.bounded(60);
        std::vector<EloState> elo(n);
        std::vector<GlickoState> glicko(n);
        for (std::size_t i = 0; i < n; ++i) {
            elo[i].r = 1000.0 + rng.uniform01() * 1000.0;
            glicko[i].r = 1000.0 + rng.uniform01() * 1000.0;
            glicko[i].rd = 40.0 + rng.uniform01() * 310.0;
        }
        const auto ranks = random_ranks(n, rng, true);
        std::vector<EloState> elo_a(n), elo_b(n);
        std::vector<GlickoState> gl_a(n), gl_b(n);
        elo_update_br(elo, ranks, cfg(), elo_a);
        elo_update_br_serial(elo, ranks, cfg(), elo_b);
        glicko_update_br(glicko, ranks, cfg(), gl_a);
        glicko_update_br_serial(glicko, ranks, cfg(), gl_b);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(elo_a[i].r == elo_b[i].r);
            CHECK(gl_a[i].r == gl_b[i].r);
            CHECK(gl_a[i].rd == gl_b[i].rd);
        }
    }
}

TEST_CASE("config validation rejects nonsense") {
    RatingConfig bad = cfg();
    bad.elo_k = 0.0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = cfg();
    bad.ts_draw_prob = 1.0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    bad = cfg();
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    CHECK_NOTHROW(cfg().validate());
}

TEST_CASE("mismatched span lengths are contract errors") {
    std::vector<EloState> states(3);
    std::vector<EloState> out(2);
    CHECK_THROWS_AS(elo_update_br(states, std::vector<int>{1, 2, 3}, cfg(), out), ContractError);
    std::vector<EloState> one(1);
    std::vector<EloState> one_out(1);
    CHECK_THROWS_AS(elo_update_br(one, std::vector<int>{1}, cfg(), one_out), ContractError);
}
