#include <gtest/gtest.h>

#include <set>

#include "khoverture/khoverture.hpp"

using namespace khoverture;

TEST(Cube, SignAssignmentAxiom) {
    for (int n = 1; n <= 6; ++n) {
        auto s = standard_sign_assignment(n);
        for (std::uint32_t w = 0; w < (1u << n); ++w)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (w & ((1u << i) | (1u << j))) continue;
                    std::uint32_t top = w | (1u << i) | (1u << j);
                    int sum = s(top, i) + s(w | (1u << j), j) + s(top, j) + s(w | (1u << i), i);
                    EXPECT_EQ(sum % 2, 1) << "n=" << n << " w=" << w;
                }
    }
    EXPECT_EQ(standard_sign_assignment(1)(1, 0), 0);
    // n=2: 11 -> 01 flips coordinate 1 (index 0): sign 0; 11 -> 10: sign 1
    EXPECT_EQ(standard_sign_assignment(2)(0b11, 0), 0);
    EXPECT_EQ(standard_sign_assignment(2)(0b11, 1), 1);
}

TEST(Cube, SignAssignmentsDifferByCoboundary) {
    // every edge labeling meeting the axiom, for n <= 3, is s + delta(f) for a vertex function f
    for (int n = 1; n <= 3; ++n) {
        std::vector<std::pair<std::uint32_t, int>> edges;
        for (std::uint32_t u = 0; u < (1u << n); ++u)
            for (int i = 0; i < n; ++i)
                if (u & (1u << i)) edges.push_back({u, i});
        auto s = standard_sign_assignment(n);
        std::set<std::vector<int>> coboundaries;
        for (std::uint32_t f = 0; f < (1u << (1u << n)); ++f) {
            std::vector<int> diff;
            for (auto [u, i] : edges) diff.push_back(static_cast<int>(((f >> u) ^ (f >> (u & ~(1u << i)))) & 1u));
            coboundaries.insert(diff);
        }
        std::size_t valid = 0;
        for (std::uint64_t lab = 0; lab < (std::uint64_t{1} << edges.size()); ++lab) {
            auto at = [&](std::uint32_t u, int i) {
                for (std::size_t k = 0; k < edges.size(); ++k)
                    if (edges[k].first == u && edges[k].second == i) return static_cast<int>((lab >> k) & 1u);
                return -1;
            };
            bool ok = true;
            for (std::uint32_t w = 0; w < (1u << n) && ok; ++w)
                for (int i = 0; i < n && ok; ++i)
                    for (int j = i + 1; j < n && ok; ++j) {
                        if (w & ((1u << i) | (1u << j))) continue;
                        std::uint32_t top = w | (1u << i) | (1u << j);
                        ok = (at(top, i) + at(w | (1u << j), j) + at(top, j) + at(w | (1u << i), i)) % 2 == 1;
                    }
            if (!ok) continue;
            ++valid;
            std::vector<int> diff;
            for (std::size_t k = 0; k < edges.size(); ++k)
                diff.push_back(static_cast<int>((lab >> k) & 1u) ^ s(edges[k].first, edges[k].second));
            EXPECT_TRUE(coboundaries.count(diff)) << "n=" << n;
        }
        EXPECT_GT(valid, 0u);
    }
}

TEST(Cube, Interval) {
    EXPECT_EQ(interval(CubeVertex(0b11, 2), CubeVertex(0, 2)).size(), 4u);
    EXPECT_EQ(interval(CubeVertex(0b10, 2), CubeVertex(0b10, 2)).size(), 1u);
    EXPECT_EQ(interval(CubeVertex(0b111, 3), CubeVertex(0b001, 3)).size(), 4u);
}

TEST(Permutohedron, FaceCounts) {
    std::size_t fact = 1;
    for (int n = 2; n <= 6; ++n) {
        fact *= static_cast<std::size_t>(n);
        auto L = face_lattice(n);
        EXPECT_EQ(L.f_vector.front(), fact);
        EXPECT_EQ(L.f_vector[static_cast<std::size_t>(n - 2)], (std::size_t{1} << n) - 2);
        EXPECT_EQ(L.euler(), 1);
    }
    auto L2 = face_lattice(2);
    EXPECT_EQ(L2.f_vector, (std::vector<std::size_t>{2, 1}));
}

TEST(Permutohedron, FacetSplittings) {
    auto a = facet_splitting(3, 0b001);
    EXPECT_TRUE(a.bijective && a.incidence_preserving && a.dimension_preserving);
    std::size_t verts = 0;
    auto b = facet_splitting(4, 0b101);
    for (auto& [f, p] : b.pairs) verts += f.is_vertex();
    EXPECT_EQ(verts, 4u);
    auto c = facet_splitting(2, 0b10);
    EXPECT_EQ(c.pairs.size(), 1u);
}

TEST(Permutohedron, BoundaryPartition) {
    auto p3 = boundary_partition(3);
    EXPECT_EQ(p3.parts[0].size(), 3u);
    EXPECT_EQ(p3.parts[1].size(), 3u);
    EXPECT_TRUE(p3.disjoint_within);
    EXPECT_EQ(boundary_partition(2).parts[0].size(), 2u);
    EXPECT_EQ(boundary_partition(4).parts[1].size(), 6u);
    for (int n = 2; n <= 5; ++n) {
        auto p = boundary_partition(n);
        EXPECT_TRUE(p.disjoint_within && p.corner_faces_ok && p.vertex_degree_ok) << n;
    }
}

TEST(Permutohedron, CubicalDecomposition) {
    auto d2 = cubical_decomposition(2);
    EXPECT_EQ(d2.cubes.size(), 2u);
    EXPECT_EQ(d2.gluings.size(), 1u);
    auto d3 = cubical_decomposition(3);
    EXPECT_EQ(d3.cubes.size(), 6u);
    EXPECT_EQ(d3.gluings.size(), 6u);
    auto d4 = cubical_decomposition(4);
    EXPECT_EQ(d4.cubes.size(), 24u);
    EXPECT_EQ(d4.boundary_facets + d4.interior_facets, 24u * 6u);
    EXPECT_EQ(2 * d4.gluings.size(), d4.interior_facets);
    for (int n = 2; n <= 6; ++n) {
        auto D = cubical_decomposition(n);
        EXPECT_TRUE(D.vertex_sets_ok) << n;
        EXPECT_TRUE(gluings_consistent(D)) << n;
        EXPECT_EQ(D.census, interval_census(D.lattice)) << n;
    }
}

TEST(Permutohedron, ReportsForAllSizes) {
    for (int n = 2; n <= 6; ++n) EXPECT_TRUE(permutohedron_report(n).ok()) << n;
    EXPECT_THROW(permutohedron_report(7), std::invalid_argument);
}

TEST(FlowCategory, ModuliChainCounts) {
    EXPECT_EQ(moduli(CubeVertex(0b1, 1), CubeVertex(0, 1)).faces.size(), 1u);
    EXPECT_EQ(moduli(CubeVertex(0b111, 3), CubeVertex(0, 3)).maximal_chains(), 6u);
    EXPECT_EQ(moduli(CubeVertex(0b1111, 4), CubeVertex(0, 4)).maximal_chains(), 24u);
    EXPECT_THROW(moduli(CubeVertex(0b01, 2), CubeVertex(0b10, 2)), std::invalid_argument);
}

TEST(FlowCategory, ModuliMatchPermutohedron) {
    for (int k = 1; k <= 5; ++k) {
        CubeVertex u((1u << k) - 1, k), v(0, k);
        auto M = moduli(u, v);
        auto L = face_lattice(k);
        EXPECT_EQ(M.faces.size(), L.faces.size());
        for (auto& f : M.faces) {
            auto p = to_perm_face(f);
            EXPECT_EQ(p.dimension(), f.dimension());
            EXPECT_EQ(from_perm_face(u, v, p), f);
        }
    }
}

TEST(FlowCategory, PointCompositionIsVertex) {
    CubeVertex u(0b11, 2), v(0b01, 2), w(0, 2);
    auto g = moduli(u, v).faces.front();
    auto f = moduli(v, w).faces.front();
    auto c = compose(f, g);
    EXPECT_EQ(c.dimension(), 0);
    EXPECT_EQ(c.chain.size(), 3u);
}

TEST(FlowCategory, CompositionLandsInFacet) {
    CubeVertex u(0b111, 3), v(0b011, 3), w(0, 3);
    auto hex = moduli(u, w);
    for (auto& g : moduli(u, v).faces)
        for (auto& f : moduli(v, w).faces) {
            auto c = compose(f, g);
            EXPECT_TRUE(to_perm_face(c).contains_subset(composition_facet(u, v, w)));
            EXPECT_TRUE(hex.index.count(c.chain));
        }
}

TEST(FlowCategory, AssociativeUpToSpanFour) {
    auto r = check_flow_associativity(4, 4);
    EXPECT_TRUE(r.ok) << r.witness;
    EXPECT_GT(r.triples, 0u);
}

TEST(FlowCategory, CubicalModelCensus) {
    for (int k = 1; k <= 4; ++k) {
        auto C = cubical_model(CubeVertex((1u << k) - 1, k), CubeVertex(0, k));
        EXPECT_TRUE(C.iso_ok) << k;
        if (k >= 2) {
            EXPECT_EQ(C.census, cubical_decomposition(k).census) << k;
        }
    }
    auto c2 = cubical_model(CubeVertex(0b11, 2), CubeVertex(0, 2));
    EXPECT_EQ(c2.census.by_dim, (std::vector<std::size_t>{3, 2}));
    auto c1 = cubical_model(CubeVertex(0b1, 1), CubeVertex(0, 1));
    EXPECT_EQ(c1.census.by_dim, (std::vector<std::size_t>{1}));
}
