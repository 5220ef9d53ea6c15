#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support/oracles.hpp"

using namespace khoverture;

namespace {

const char* kRight = "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)";
const char* kLeft = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

LinkDiagram entry(const std::string& name) { return find_entry(builtin_corpus(), name)->diagram(); }

}  // namespace

TEST(Diagram, ParsesTabulatedTrefoilAsLeftHanded) {
    auto d = parse_pd(kLeft);
    EXPECT_EQ(d.crossing_count(), 3);
    EXPECT_EQ(d.arc_count(), 6);
    EXPECT_EQ(d.n_plus, 0);
    EXPECT_EQ(d.n_minus, 3);
    EXPECT_EQ(d.component_count, 1);
    auto r = parse_pd(kRight);
    EXPECT_EQ(r.n_plus, 3);
    EXPECT_EQ(r.n_minus, 0);
}

TEST(Diagram, CrossinglessAndKinks) {
    auto u = parse_pd("O(1)");
    EXPECT_EQ(u.crossing_count(), 0);
    EXPECT_EQ(u.component_count, 1);
    auto k = parse_pd("X(1,2,2,1)");
    EXPECT_EQ(k.crossing_count(), 1);
    EXPECT_EQ(k.arc_count(), 2);
    EXPECT_EQ(k.component_count, 1);
    EXPECT_EQ(k.n_minus, 1);
    EXPECT_EQ(parse_pd("X(1,1,2,2)").n_plus, 1);
}

TEST(Diagram, RejectsMalformedInput) {
    EXPECT_THROW(parse_pd(""), DiagramError);
    EXPECT_THROW(parse_pd("X(1,2,3)"), DiagramError);
    EXPECT_THROW(parse_pd("X(1,2,3,4)"), DiagramError);  // every arc appears once
    EXPECT_THROW(parse_pd("X(1,1,1,2)"), DiagramError);
    EXPECT_THROW(parse_pd("Y(1,2,2,1)"), DiagramError);
    EXPECT_THROW(parse_pd("O(1) O(1)"), DiagramError);
    EXPECT_THROW(parse_pd("X(1,2,2,1) base=7"), DiagramError);
}

TEST(Diagram, BasepointAndRoundTrip) {
    auto d = parse_pd(std::string(kRight) + " base=3");
    ASSERT_TRUE(d.basepoint);
    EXPECT_EQ(d.labels[*d.basepoint], 3);
    auto again = parse_pd(d.pd_string());
    EXPECT_EQ(again.pd_string(), d.pd_string());
}

TEST(Diagram, SignCountsAddUp) {
    for (auto& e : builtin_corpus()) {
        auto d = e.diagram();
        EXPECT_EQ(d.n_plus + d.n_minus, d.crossing_count()) << e.name;
        EXPECT_TRUE(is_planar(d)) << e.name;
    }
}

TEST(Diagram, ComponentCounts) {
    EXPECT_EQ(entry("hopf+").component_count, 2);
    EXPECT_EQ(entry("hopf-").component_count, 2);
    EXPECT_EQ(entry("ladybug_unlink").component_count, 2);
    EXPECT_EQ(entry("9_42").component_count, 1);
    EXPECT_EQ(entry("hopf+").n_plus, 2);
    EXPECT_EQ(entry("hopf-").n_minus, 2);
}

TEST(Diagram, TrefoilCircleCounts) {
    auto d = parse_pd(kRight);
    EXPECT_EQ(resolve(d, CubeVertex(0b000, 3)).circle_count(), 2);
    EXPECT_EQ(resolve(d, CubeVertex(0b111, 3)).circle_count(), 3);
    EXPECT_EQ(resolve(parse_pd("O(1)"), CubeVertex(0, 0)).circle_count(), 1);
}

TEST(Diagram, CircleCountsMatchUnionFind) {
    for (auto& e : builtin_corpus()) {
        auto d = e.diagram();
        for (std::uint32_t v = 0; v < (1u << d.crossing_count()); ++v) {
            auto r = resolve(d, CubeVertex(v, d.crossing_count()));
            ASSERT_EQ(r.circle_count(), oracle::circle_count(d, v)) << e.name << " v=" << v;
            ASSERT_EQ(circle_count_oracle(d, CubeVertex(v, d.crossing_count())), r.circle_count());
        }
    }
}

TEST(Diagram, CirclesCoverEverySegmentTwice) {
    for (auto& e : builtin_corpus()) {
        auto d = e.diagram();
        const int n = d.crossing_count();
        for (std::uint32_t v = 0; v < (1u << n); ++v) {
            auto r = resolve(d, CubeVertex(v, n));
            std::size_t passes = 0;
            std::vector<int> seen(static_cast<std::size_t>(d.arc_count()), 0);
            for (auto& c : r.circles)
                for (auto& p : c) {
                    ++passes;
                    ++seen[static_cast<std::size_t>(p.arc)];
                }
            // each arc is traversed once; with free loops counted as one pass
            EXPECT_EQ(passes, static_cast<std::size_t>(d.arc_count())) << e.name;
            for (int a = 0; a < d.arc_count(); ++a) EXPECT_EQ(seen[static_cast<std::size_t>(a)], 1);
        }
    }
}

TEST(Diagram, EdgesMergeOrSplit) {
    for (auto& e : builtin_corpus()) {
        auto d = e.diagram();
        const int n = d.crossing_count();
        for (std::uint32_t v = 0; v < (1u << n); ++v)
            for (int i = 0; i < n; ++i) {
                if (v & (1u << i)) continue;
                int a = oracle::circle_count(d, v), b = oracle::circle_count(d, v | (1u << i));
                EXPECT_EQ(std::abs(a - b), 1) << e.name;
                auto s = surgery_data(d, CubeVertex(v, n), i);
                EXPECT_EQ(s.is_split(), b == a + 1);
            }
    }
}

TEST(Diagram, ResolveIndependentOfCrossingOrder) {
    auto d = entry("9_42");
    auto xs = raw_crossings(d);
    std::vector<int> perm(xs.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::rotate(perm.begin(), perm.begin() + 3, perm.end());
    std::vector<std::array<long, 4>> ys;
    for (int p : perm) ys.push_back(xs[static_cast<std::size_t>(p)]);
    auto e = make_diagram(ys, {}, std::nullopt);
    const int n = d.crossing_count();
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
        std::uint32_t w = 0;
        for (int k = 0; k < n; ++k)
            if ((v >> perm[static_cast<std::size_t>(k)]) & 1u) w |= 1u << k;
        ASSERT_EQ(resolve(d, CubeVertex(v, n)).circle_count(), resolve(e, CubeVertex(w, n)).circle_count());
    }
    EXPECT_EQ(d.n_plus, e.n_plus);
}

TEST(Diagram, SurgeryMergeAndSplit) {
    auto t = parse_pd(kRight);
    auto s = surgery_data(t, CubeVertex(0, 3), 0);
    EXPECT_FALSE(s.is_split());
    auto k = parse_pd("X(1,2,2,1)");
    EXPECT_TRUE(surgery_data(k, CubeVertex(0, 1), 0).is_split());
    EXPECT_THROW(surgery_data(t, CubeVertex(1, 3), 0), DiagramError);
}

TEST(Diagram, LadybugUnlinkFace) {
    auto d = entry("ladybug_unlink");
    auto r = resolve(d, CubeVertex(0b0011, 4));
    EXPECT_EQ(r.circle_count(), 1);
    auto a = surgery_data(d, r, 2), b = surgery_data(d, r, 3);
    EXPECT_TRUE(a.is_split());
    EXPECT_TRUE(b.is_split());
    auto lb = ladybug(d, r, 2, 3);
    ASSERT_TRUE(lb);
    EXPECT_EQ(lb->circle, 0);
    // the two pairs partition the four pieces of the circle
    std::vector<int> pieces{lb->right_arcs[0], lb->right_arcs[1], lb->left_arcs[0], lb->left_arcs[1]};
    std::sort(pieces.begin(), pieces.end());
    EXPECT_EQ(std::unique(pieces.begin(), pieces.end()), pieces.end());
    EXPECT_FALSE(ladybug(parse_pd(kRight), resolve(parse_pd(kRight), CubeVertex(0, 3)), 0, 1));
}

TEST(Diagram, MirrorFlipsSigns) {
    for (auto& e : builtin_corpus()) {
        auto d = e.diagram();
        auto m = mirror(d);
        EXPECT_EQ(m.n_plus, d.n_minus) << e.name;
        EXPECT_EQ(m.n_minus, d.n_plus) << e.name;
        EXPECT_EQ(m.component_count, d.component_count);
    }
    EXPECT_EQ(mirror(parse_pd(kRight)).n_minus, 3);
}

TEST(Diagram, DisjointUnionAndConnectSum) {
    auto t = parse_pd(kRight);
    auto u = disjoint_union(with_basepoint(t, 1), t);
    EXPECT_EQ(u.crossing_count(), 6);
    EXPECT_EQ(u.component_count, 2);
    EXPECT_EQ(u.labels[*u.basepoint], 1);
    auto s = connect_sum(t, 1, t, 1);
    EXPECT_EQ(s.crossing_count(), 6);
    EXPECT_EQ(s.component_count, 1);
    EXPECT_EQ(s.n_plus, 6);
    EXPECT_TRUE(is_planar(s));
    auto uu = connect_sum(parse_pd("O(1)"), 1, parse_pd("O(1)"), 1);
    EXPECT_EQ(uu.crossing_count(), 0);
    EXPECT_EQ(uu.component_count, 1);
}

TEST(Diagram, BraidClosure) {
    auto t = braid_closure(2, {1, 1, 1});
    EXPECT_EQ(t.crossing_count(), 3);
    EXPECT_EQ(t.component_count, 1);
    EXPECT_EQ(t.n_plus, 3);
    auto h = braid_closure(2, {1, 1});
    EXPECT_EQ(h.component_count, 2);
    EXPECT_THROW(braid_closure(2, {2}), DiagramError);
}
