#include <gtest/gtest.h>

#include "khoverture/khoverture.hpp"
#include "support/oracles.hpp"

using namespace khoverture;

namespace {

LinkDiagram entry(const std::string& name) { return find_entry(builtin_corpus(), name)->diagram(); }

struct SumSetup {
    LinkDiagram sum, split;
    SplitData sd;
};

SumSetup sum_setup(const LinkDiagram& a, const LinkDiagram& b) {
    SumSetup s;
    long off = max_label(a);
    s.sum = connect_sum(a, 1, b, 1);
    s.split = disjoint_union(with_basepoint(a, 1), b);
    s.sd = SplitData{1, 1 + off};
    return s;
}

}  // namespace

TEST(Totalize, GeneratorCounts) {
    ResolutionCube u(entry("unknot"));
    auto K = totalize(u);
    EXPECT_EQ(K.complex.size(), 2u);
    EXPECT_EQ(K.complex.q[0], 1);
    EXPECT_EQ(K.complex.q[1], -1);
    ResolutionCube t(entry("3_1"));
    EXPECT_EQ(totalize(t).complex.size(), 30u);  // 4 + 3*2 + 3*4 + 8
}

TEST(Totalize, SquaresToZeroForDeformations) {
    for (auto& e : builtin_corpus()) {
        ResolutionCube cube(e.diagram());
        for (auto ht : {Specialization{0, 0}, Specialization{1, 0}, Specialization{0, 1}, Specialization{1, 1}}) {
            auto K = totalize(cube, ht);
            EXPECT_FALSE(K.complex.d_squared_witness()) << e.name << " h=" << ht.h << " t=" << ht.t;
        }
        EXPECT_TRUE(totalize(cube).complex.q_homogeneous());
    }
}

TEST(Totalize, ReducedTrefoil) {
    auto T = kh_table(entry("3_1"), Coefficients::integers(), true);
    std::map<std::pair<int, int>, std::size_t> want{{{0, 2}, 1}, {{2, 6}, 1}, {{3, 8}, 1}};
    EXPECT_EQ(oracle::field_dims(T), want);
    EXPECT_EQ(T.torsion_count(), 0u);
    ResolutionCube cube(with_basepoint(entry("3_1"), std::nullopt));
    EXPECT_THROW(reduced_complex(cube), DiagramError);
}

TEST(Totalize, ReducedUnknotIsOneDimensional) {
    for (const char* name : {"unknot", "kink+", "kink-"}) {
        auto T = kh_table(entry(name), Coefficients::integers(), true);
        ASSERT_EQ(T.groups.size(), 1u) << name;
        EXPECT_EQ(T.groups.begin()->first, (std::pair<int, int>{0, 0}));
    }
}

TEST(Mirror, DoubleMirrorIsIdentity) {
    for (const char* name : {"3_1", "4_1", "hopf+"}) {
        auto C = totalize(ResolutionCube(entry(name))).complex;
        std::string why;
        EXPECT_TRUE(identical(mirror_complex(mirror_complex(C)), C, &why)) << name << ": " << why;
    }
}

TEST(Mirror, UnknotIsSelfMirror) {
    auto C = totalize(ResolutionCube(entry("unknot"))).complex;
    auto M = mirror_complex(C);
    EXPECT_EQ(oracle::field_dims(homology(M, Coefficients::rationals())),
              oracle::field_dims(homology(C, Coefficients::rationals())));
}

TEST(Mirror, DualMatchesMirrorDiagram) {
    for (const char* name : {"3_1", "hopf-", "ladybug_unlink"}) {
        auto d = entry(name);
        auto dual = homology(mirror_complex(totalize(ResolutionCube(d)).complex), Coefficients::prime(2));
        auto m = kh_table(mirror(d), Coefficients::prime(2));
        EXPECT_EQ(oracle::field_dims(dual), oracle::field_dims(m)) << name;
    }
}

TEST(KA1, ActionIsNilpotentChainMap) {
    for (const char* name : {"3_1", "4_1", "hopf+"}) {
        ResolutionCube cube(entry(name));
        auto K = totalize(cube);
        auto psi = ka1_action(cube, K);
        EXPECT_FALSE(chain_map_witness(K.complex, K.complex, psi)) << name;
        auto sq = compose(psi, psi);
        for (auto& col : sq.image) EXPECT_TRUE(col.empty());
        for (std::uint32_t g = 0; g < K.complex.size(); ++g)
            for (auto [r, c] : psi.image[g]) {
                int pc = pointed_circle(cube, K.vertex[r]);
                EXPECT_TRUE((K.label[r] >> pc) & 1u);
                EXPECT_EQ(K.complex.q[r], K.complex.q[g] - 2);
            }
    }
}

TEST(SplitMap, UnknotFormulas) {
    auto s = sum_setup(entry("unknot"), entry("unknot"));
    ResolutionCube sum(s.sum), split(s.split);
    auto f = split_map(sum, split, s.sd);
    ASSERT_EQ(f.source_size, 2u);
    ASSERT_EQ(f.target_size, 4u);
    int p1 = split.circle_of(0, split.diagram().arc_index(s.sd.b1));
    int p2 = split.circle_of(0, split.diagram().arc_index(s.sd.b2));
    SparseColumn plus{{static_cast<std::uint32_t>(1u << p1), 1L}, {static_cast<std::uint32_t>(1u << p2), 1L}};
    std::sort(plus.begin(), plus.end());
    EXPECT_EQ(f.image[0], plus);
    SparseColumn minus{{3u, 1L}};
    EXPECT_EQ(f.image[1], minus);
    // deformed: x+ -> x+x- + x-x+ - h x+x+, x- -> x-x- + t x+x+
    auto g = split_map(sum, split, s.sd, Specialization{1, 1});
    EXPECT_EQ(g.image[0].size(), 3u);
    EXPECT_EQ(g.image[1].size(), 2u);
}

TEST(SplitMap, ChainMapOfDegreeMinusOne) {
    auto s = sum_setup(entry("3_1"), entry("3_1"));
    ResolutionCube sum(s.sum), split(s.split);
    auto f = split_map(sum, split, s.sd);
    auto Cs = totalize(sum).complex, Cu = totalize(split).complex;
    EXPECT_FALSE(chain_map_witness(Cs, Cu, f));
    for (std::uint32_t g = 0; g < Cs.size(); ++g)
        for (auto [r, c] : f.image[g]) {
            EXPECT_EQ(Cu.q[r], Cs.q[g] - 1);
            EXPECT_EQ(Cu.h[r], Cs.h[g]);
        }
    std::size_t sdim = 0;
    auto rank = induced_rank_f2(Cs, Cu, f, &sdim);
    EXPECT_EQ(rank, sdim);
    EXPECT_EQ(sdim, kh_table(s.sum, Coefficients::prime(2)).total_rank());
}

TEST(SplitMap, RejectsMismatchedDiagrams) {
    auto s = sum_setup(entry("3_1"), entry("3_1"));
    ResolutionCube sum(s.sum), other(disjoint_union(entry("3_1"), entry("unknot")));
    EXPECT_THROW(split_map(sum, other, s.sd), DiagramError);
}

TEST(DerivedCotensor, FirstStageIsTensorProduct) {
    ResolutionCube c1(entry("3_1")), c2(entry("unknot"));
    auto B1 = based_complex(c1), B2 = based_complex(c2);
    auto D = derived_cotensor(B1, B2, 1);
    EXPECT_EQ(D.complex.size(), B1.complex.size() * B2.complex.size());
    EXPECT_FALSE(D.complex.d_squared_witness());
    EXPECT_THROW(derived_cotensor(B1, B2, 0), std::invalid_argument);
}

TEST(DerivedCotensor, UnknotsGiveUnknot) {
    ResolutionCube c(entry("unknot"));
    auto B = based_complex(c);
    auto D = derived_cotensor(B, B, 3);
    EXPECT_FALSE(D.complex.d_squared_witness());
    auto T = homology(D.complex, Coefficients::prime(2));
    std::size_t deg0 = 0;
    for (auto& [k, g] : T.groups)
        if (k.first == 0) deg0 += g.rank;
    EXPECT_EQ(deg0, 2u);
}

TEST(DerivedCotensor, TrefoilSumWindow) {
    ConnectSumInput in{entry("3_1"), entry("3_1"), 1, 1};
    auto R = verify_derived_cotensor(in, 6);
    EXPECT_GE(R.window_max, 0);
    for (auto& c : R.report.checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.witness;
}

TEST(Filtration, UnknotImage) {
    auto C = totalize(ResolutionCube(entry("unknot")), Specialization{1, 0}).complex;
    auto f = filtered_homology_image(C, 0, Coefficients::prime(2));
    EXPECT_EQ(image_at(f, -1), 2u);
    EXPECT_EQ(image_at(f, 1), 1u);
    EXPECT_EQ(image_at(f, 3), 0u);
    EXPECT_THROW(filtered_homology_image(C, 0, Coefficients::integers()), std::invalid_argument);
}

TEST(Filtration, ImageIsMonotone) {
    for (const char* name : {"3_1", "m3_1", "4_1", "kink-"}) {
        for (auto [ring, ht] : {std::pair{"F2", Specialization{1, 0}}, std::pair{"Q", Specialization{0, 1}}}) {
            auto C = totalize(ResolutionCube(entry(name)), ht).complex;
            auto f = filtered_homology_image(C, 0, Coefficients::parse(ring));
            std::size_t prev = SIZE_MAX;
            for (auto& [q, d] : f) {
                EXPECT_LE(d, prev) << name;
                prev = d;
            }
            EXPECT_EQ(f.begin()->second, 2u) << name << " " << ring;
            EXPECT_EQ(f.rbegin()->second, 0u);
        }
    }
}
