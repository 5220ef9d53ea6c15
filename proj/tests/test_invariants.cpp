#include <gtest/gtest.h>

#include "khoverture/khoverture.hpp"

using namespace khoverture;

namespace {

LinkDiagram entry(const std::string& name) { return find_entry(builtin_corpus(), name)->diagram(); }

const Coefficients F2 = Coefficients::prime(2);
const Coefficients QQ = Coefficients::rationals();

}  // namespace

TEST(SInvariant, CorpusValues) {
    for (auto& e : builtin_corpus()) {
        if (e.diagram().component_count != 1) continue;
        if (auto want = e.expected_int("s_F2")) EXPECT_EQ(s_invariant(e.diagram(), F2).s, *want) << e.name;
        if (auto want = e.expected_int("s_Q")) EXPECT_EQ(s_invariant(e.diagram(), QQ).s, *want) << e.name;
    }
}

TEST(SInvariant, JumpsAreTwoApart) {
    auto r = s_invariant(entry("3_1"), F2);
    EXPECT_EQ(r.q_lo, 1);
    EXPECT_EQ(r.q_hi, 3);
    EXPECT_EQ(r.s, 2);
}

TEST(SInvariant, MirrorNegates) {
    for (const char* name : {"3_1", "4_1", "9_42", "kink+"})
        for (auto& k : {F2, QQ}) {
            if (std::string(name) == "9_42" && k == QQ) continue;
            EXPECT_EQ(s_invariant(mirror(entry(name)), k).s, -s_invariant(entry(name), k).s) << name;
        }
}

TEST(SInvariant, PositiveBraids) {
    struct Case {
        int strands;
        std::vector<int> word;
    };
    for (auto& c : {Case{2, {1, 1, 1}}, Case{2, {1, 1, 1, 1, 1}}, Case{3, {1, 2, 1, 2}}, Case{3, {1, 2, 2, 2, 1, 2}}}) {
        auto d = braid_closure(c.strands, c.word);
        ASSERT_EQ(d.component_count, 1);
        int want = positive_braid_s(c.strands, c.word);
        EXPECT_EQ(s_invariant(d, F2).s, want);
        EXPECT_EQ(s_invariant(d, QQ).s, want);
    }
    EXPECT_THROW(positive_braid_s(2, {1, -1, 1}), std::invalid_argument);
}

TEST(SInvariant, RejectsLinksAndBadFields) {
    EXPECT_THROW(s_invariant(entry("hopf+"), F2), DiagramError);
    EXPECT_THROW(s_invariant(entry("3_1"), Coefficients::prime(3)), std::invalid_argument);
    EXPECT_THROW(s_invariant(entry("3_1"), Coefficients::integers()), std::invalid_argument);
}

TEST(Kunneth, CorpusPairs) {
    auto corpus = builtin_corpus();
    for (auto& a : corpus)
        for (auto& b : corpus) {
            auto da = a.diagram(), db = b.diagram();
            if (da.crossing_count() + db.crossing_count() > 8) continue;
            auto r = verify_kunneth(da, db, F2);
            EXPECT_TRUE(r.ok()) << a.name << " u " << b.name;
        }
}

TEST(Kunneth, ReducedAndOtherFields) {
    auto t = entry("3_1"), f = entry("4_1"), u = entry("unknot");
    for (auto& k : {F2, Coefficients::prime(3), QQ}) {
        EXPECT_TRUE(verify_kunneth(t, t, k).ok());
        EXPECT_TRUE(verify_kunneth(t, f, k).ok());
        EXPECT_TRUE(verify_kunneth(t, u, k).ok());
        auto r = verify_kunneth(t, f, k, true);
        EXPECT_TRUE(r.ok()) << (r.checks.empty() ? "" : r.checks.front().witness);
    }
}

TEST(ConnectSum, TrefoilSums) {
    for (const char* other : {"3_1", "m3_1"}) {
        auto r = verify_connect_sum({entry("3_1"), entry(other), 1, 1}, F2);
        for (auto& c : r.checks) EXPECT_TRUE(c.ok) << other << ": " << c.name << " " << c.witness;
        EXPECT_EQ(r.checks.size(), 4u);
    }
    auto q = verify_connect_sum({entry("3_1"), entry("kink-"), 1, 1}, QQ);
    EXPECT_TRUE(q.ok());
}

TEST(Tables, FigureEight) {
    auto Z = kh_table(entry("4_1"), Coefficients::integers());
    EXPECT_EQ(Z.torsion_count(), 2u);
    auto Q = kh_table(entry("4_1"), QQ);
    std::map<std::pair<int, int>, std::size_t> want{{{-2, -5}, 1}, {{-1, -1}, 1}, {{0, -1}, 1},
                                                    {{0, 1}, 1},   {{1, 1}, 1},   {{2, 5}, 1}};
    EXPECT_EQ(dims(Q), want);
}

TEST(Tables, DimTableHelpers) {
    DimTable a{{{0, 1}, 1}, {{0, -1}, 1}};
    auto sq = convolve(a, a);
    EXPECT_EQ(sq.at({0, 0}), 2u);
    EXPECT_EQ(sq.at({0, 2}), 1u);
    EXPECT_EQ(negate(DimTable{{{2, 5}, 3}}).at({-2, -5}), 3u);
    EXPECT_TRUE(describe_difference(a, a).empty());
    EXPECT_FALSE(describe_difference(a, sq).empty());
}

TEST(Deformations, CorpusDimensions) {
    for (auto& e : builtin_corpus()) {
        auto r = verify_deformations(e.diagram());
        for (auto& c : r.checks) EXPECT_TRUE(c.ok) << e.name << ": " << c.name << " " << c.witness;
    }
}

TEST(Mirror, Corpus) {
    for (auto& e : builtin_corpus())
        for (auto& k : {F2, Coefficients::prime(3)}) {
            auto r = verify_mirror(e.diagram(), k);
            for (auto& c : r.checks) EXPECT_TRUE(c.ok) << e.name << ": " << c.name << " " << c.witness;
        }
}

TEST(Cells, Corpus) {
    for (auto& e : builtin_corpus()) {
        auto r = verify_cells(e.diagram());
        EXPECT_TRUE(r.ok()) << e.name << ": " << r.checks.front().witness;
    }
}
