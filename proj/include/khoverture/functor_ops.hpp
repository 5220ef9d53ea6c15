#ifndef KHOVERTURE_FUNCTOR_OPS_HPP
#define KHOVERTURE_FUNCTOR_OPS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "khoverture/burnside.hpp"
#include "khoverture/diagram.hpp"
#include "khoverture/resolution_cube.hpp"

namespace khoverture {

// ---------------------------------------------------------------- reduced subfunctors

struct ReducedSubfunctors {
    // both by fiberwise restriction of F
    BurnsideCubeFunctor plus;   // pointed circle x+
    BurnsideCubeFunctor minus;  // pointed circle x-
    std::vector<std::vector<std::uint32_t>> plus_index, minus_index;  // F(v) -> sub(v), UINT32_MAX if absent
    IsoReport relabel_iso;       // x+ -> x- on the pointed circle
    // every edge out of a pointed-x+ element stays pointed x+; the leftover
    // elements run from F-(u) to F+(v), so x- generators span a subcomplex
    bool plus_closed = false;
};

inline ReducedSubfunctors reduced_subfunctors(const BurnsideCubeFunctor& F, const ResolutionCube& cube) {
    const auto& d = cube.diagram();
    if (!d.basepoint) throw DiagramError("reduced_subfunctors: diagram has no basepoint");
    if (F.dim() != cube.dim()) throw std::invalid_argument("reduced_subfunctors: functor does not match cube");
    ReducedSubfunctors R;
    std::vector<std::vector<char>> keep_minus(F.vertex_count()), keep_plus(F.vertex_count());
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
        int pc = cube.circle_of(v, *d.basepoint);
        keep_minus[v].resize(F.size(v));
        keep_plus[v].resize(F.size(v));
        for (std::uint32_t x = 0; x < F.size(v); ++x) {
            bool m = (x >> pc) & 1u;
            keep_minus[v][x] = m;
            keep_plus[v][x] = !m;
        }
    }
    R.plus_closed = true;
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (int i = 0; i < F.dim(); ++i) {
            if (v & (1u << i)) continue;
            const auto& A = F.edge(v, i);
            for (std::size_t e = 0; e < A.size(); ++e)
                if (keep_plus[v | (1u << i)][A.s[e]] && !keep_plus[v][A.t[e]]) R.plus_closed = false;
        }
    R.minus = restrict_functor(F, keep_minus, &R.minus_index);
    R.plus = restrict_functor(F, keep_plus, &R.plus_index);
    std::vector<std::vector<std::uint32_t>> phi(F.vertex_count());
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
        int pc = cube.circle_of(v, *d.basepoint);
        phi[v].assign(R.plus.size(v), 0);
        for (std::uint32_t x = 0; x < F.size(v); ++x)
            if (keep_plus[v][x]) phi[v][R.plus_index[v][x]] = R.minus_index[v][x | (1u << pc)];
    }
    R.relabel_iso = check_natural_isomorphism(R.plus, R.minus, phi, false);
    return R;
}

// ---------------------------------------------------------------- connected sum

// Circles of P(v) in the split union carrying the two basepoints.
struct PointedPair {
    long b1 = 0, b2 = 0;  // arc labels in the split union (b2 already offset)
};

struct ConnectSumFunctor {
    BurnsideCubeFunctor functor;
    // class representative in F(v) for each element of Q(v): the -- or -+ labeling
    std::vector<std::vector<std::uint32_t>> rep;
};

// Not-++ subfunctor of F (functor of the split union), with +- identified with -+.
// Signs read (P1,P2); -+ is the canonical member of its class.
inline ConnectSumFunctor connect_sum_functor(const BurnsideCubeFunctor& F, const ResolutionCube& split,
                                             const PointedPair& pp) {
    const LinkDiagram& d = split.diagram();
    if (F.dim() != split.dim()) throw std::invalid_argument("connect_sum_functor: functor does not match cube");
    const int n = F.dim();
    int a1 = d.arc_index(pp.b1), a2 = d.arc_index(pp.b2);
    if (d.component[a1] == d.component[a2])
        throw DiagramError("connect_sum_functor: basepoints lie on one component");
    std::vector<std::uint32_t> m1(F.vertex_count()), m2(F.vertex_count());
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
        int p1 = split.circle_of(v, a1), p2 = split.circle_of(v, a2);
        if (p1 == p2) throw DiagramError("connect_sum_functor: basepoints share a circle");
        m1[v] = 1u << p1;
        m2[v] = 1u << p2;
    }
    auto kind = [&](std::uint32_t v, std::uint32_t x) {
        return ((x & m1[v]) ? 2 : 0) | ((x & m2[v]) ? 1 : 0);  // bit set = x-
    };
    // 0 = ++, 1 = +-, 2 = -+, 3 = --
    auto twin = [&](std::uint32_t v, std::uint32_t x) { return x ^ m1[v] ^ m2[v]; };
    ConnectSumFunctor out;
    BurnsideCubeFunctor& Q = out.functor;
    Q = BurnsideCubeFunctor(n);
    out.rep.resize(F.vertex_count());
    std::vector<std::vector<std::uint32_t>> cls(F.vertex_count());
    if (!F.qgrading.empty()) Q.qgrading.resize(F.vertex_count());
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
        cls[v].assign(F.size(v), UINT32_MAX);
        for (std::uint32_t x = 0; x < F.size(v); ++x) {
            int k = kind(v, x);
            if (k == 3 || k == 2) {
                cls[v][x] = static_cast<std::uint32_t>(out.rep[v].size());
                out.rep[v].push_back(x);
                if (!F.qgrading.empty()) Q.qgrading[v].push_back(F.qgrading[v][x] + 1);
            }
        }
        for (std::uint32_t x = 0; x < F.size(v); ++x)
            if (kind(v, x) == 1) cls[v][x] = cls[v][twin(v, x)];
        Q.set_size(v, static_cast<std::uint32_t>(out.rep[v].size()));
    }
    // Q edges: F elements from a canonical member at u into any not-++ member at v
    const std::size_t slots = static_cast<std::size_t>(std::max(n, 1));
    std::vector<std::vector<std::uint32_t>> qe(F.vertex_count() * slots);  // Q element -> F element
    std::vector<std::vector<std::uint32_t>> fe(F.vertex_count() * slots);  // F element -> Q element
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> by_ends(F.vertex_count() * slots);
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (int i = 0; i < n; ++i) {
            if (v & (1u << i)) continue;
            std::uint32_t u = v | (1u << i);
            const auto& A = F.edge(v, i);
            auto& E = Q.edge(v, i);
            auto& map = fe[v * slots + i];
            map.assign(A.size(), UINT32_MAX);
            for (std::uint32_t e = 0; e < A.size(); ++e) {
                by_ends[v * slots + i][pack(A.s[e], A.t[e])] = e;
                int ks = kind(u, A.s[e]), kt = kind(v, A.t[e]);
                if (!(ks == 3 || ks == 2) || kt == 0) continue;
                map[e] = static_cast<std::uint32_t>(E.size());
                qe[v * slots + i].push_back(e);
                E.add(cls[u][A.s[e]], cls[v][A.t[e]]);
            }
        }
    Q.index_edges();
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (int i = 0; i < n; ++i) {
            if (v & (1u << i)) continue;
            std::unordered_map<std::uint64_t, int> seen;
            const auto& E = Q.edge(v, i);
            for (std::size_t e = 0; e < E.size(); ++e)
                if (++seen[pack(E.s[e], E.t[e])] > 1)
                    throw std::logic_error("connect_sum_functor: quotient edge has multiplicity");
        }
    // within-class twin of an F edge element (same coordinate, swapped pointed labels)
    auto twin_edge = [&](std::uint32_t v, int i, std::uint32_t e) {
        std::uint32_t u = v | (1u << i);
        const auto& A = F.edge(v, i);
        auto it = by_ends[v * slots + i].find(pack(twin(u, A.s[e]), twin(v, A.t[e])));
        if (it == by_ends[v * slots + i].end()) throw std::logic_error("connect_sum_functor: edge has no twin");
        return it->second;
    };
    for (std::uint32_t w = 0; w < F.vertex_count(); ++w)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                std::uint32_t wi = w | (1u << i), wj = w | (1u << j);  // middles
                auto& fb = Q.face(w, i, j);
                // composites removing i first: A = Q.edge(wj, i), B = Q.edge(w, j)
                for (auto c : Q.composites(w, i, j)) {
                    std::uint32_t a = qe[wj * slots + i][first_of(c)];
                    std::uint32_t b = qe[w * slots + j][second_of(c)];
                    const auto& FA = F.edge(wj, i);
                    const auto& FB = F.edge(w, j);
                    if (FA.t[a] != FB.s[b]) b = twin_edge(w, j, b);
                    if (FA.t[a] != FB.s[b]) throw std::logic_error("connect_sum_functor: lift failed");
                    auto other = F.swap_on_face(w, i, j, pack(a, b));
                    if (!other) throw std::logic_error("connect_sum_functor: missing face entry");
                    std::uint32_t a2 = first_of(*other), b2 = second_of(*other);
                    if (fe[wi * slots + j][a2] == UINT32_MAX) a2 = twin_edge(wi, j, a2);
                    if (fe[w * slots + i][b2] == UINT32_MAX) b2 = twin_edge(w, i, b2);
                    std::uint32_t qa2 = fe[wi * slots + j][a2], qb2 = fe[w * slots + i][b2];
                    if (qa2 == UINT32_MAX || qb2 == UINT32_MAX)
                        throw std::logic_error("connect_sum_functor: projection failed");
                    fb.fwd.emplace_back(c, pack(qa2, qb2));
                }
                fb.finalize();
            }
    return out;
}

// Dictionary from the quotient to the functor of a # diagram: the sum circle is x-
// exactly when P2 is x- (classes -- and -+), other circles are matched through arc labels.
inline IsoReport check_connect_sum_iso(const ConnectSumFunctor& Q, const ResolutionCube& split,
                                       const PointedPair& pp, const BurnsideCubeFunctor& Fsum,
                                       const ResolutionCube& sum) {
    const LinkDiagram& ds = split.diagram();
    const LinkDiagram& dh = sum.diagram();
    if (!dh.basepoint) throw DiagramError("# diagram must be based at the sum region");
    int a2 = ds.arc_index(pp.b2);
    std::vector<std::vector<std::uint32_t>> phi(Q.functor.vertex_count());
    for (std::uint32_t v = 0; v < Q.functor.vertex_count(); ++v) {
        const Resolution& rh = sum.at(v);
        int sigma = sum.circle_of(v, *dh.basepoint);
        int p2 = split.circle_of(v, a2);
        // split circle -> # circle
        std::vector<int> to_sum(static_cast<std::size_t>(split.circles(v)), -1);
        for (int k = 0; k < rh.circle_count(); ++k) {
            if (k == sigma) continue;
            to_sum[static_cast<std::size_t>(split.circle_of(v, ds.arc_index(dh.labels[rh.circles[k].front().arc])))] = k;
        }
        for (std::uint32_t x : Q.rep[v]) {
            Labeling y = 0;
            for (int k = 0; k < split.circles(v); ++k)
                if (to_sum[static_cast<std::size_t>(k)] >= 0 && ((x >> k) & 1u)) y |= Labeling{1} << to_sum[static_cast<std::size_t>(k)];
            if ((x >> p2) & 1u) y |= Labeling{1} << sigma;
            phi[v].push_back(y);
        }
    }
    return check_natural_isomorphism(Q.functor, Fsum, phi, true);
}

// ---------------------------------------------------------------- split factorization

// F_Kh(L1 u L2) against F_Kh(L1) x F_Kh(L2), circles matched by arc labels.
struct FactorReport {
    IsoReport iso;
    std::size_t vertices = 0;
};

inline FactorReport factor_check_disjoint(const LinkDiagram& d1, const LinkDiagram& d2, int jobs = 1) {
    LinkDiagram du = disjoint_union(d1, d2);
    long off = max_label(d1);
    ResolutionCube c1(d1), c2(d2), cu(du);
    auto F1 = build_khovanov_functor(c1, std::nullopt, jobs).functor;
    auto F2 = build_khovanov_functor(c2, std::nullopt, jobs).functor;
    auto Fu = build_khovanov_functor(cu, std::nullopt, jobs).functor;
    BurnsideCubeFunctor P = product(F1, F2);
    const int m = d1.crossing_count();
    std::vector<std::vector<std::uint32_t>> phi(P.vertex_count());
    for (std::uint32_t v = 0; v < P.vertex_count(); ++v) {
        std::uint32_t a = v & ((1u << m) - 1u), b = v >> m;
        const Resolution& r1 = c1.at(a);
        const Resolution& r2 = c2.at(b);
        std::vector<int> map1, map2;
        for (int k = 0; k < r1.circle_count(); ++k)
            map1.push_back(cu.circle_of(v, du.arc_index(d1.labels[r1.circles[k].front().arc])));
        for (int k = 0; k < r2.circle_count(); ++k)
            map2.push_back(cu.circle_of(v, du.arc_index(d2.labels[r2.circles[k].front().arc] + off)));
        for (std::uint32_t x = 0; x < F1.size(a); ++x)
            for (std::uint32_t y = 0; y < F2.size(b); ++y) {
                Labeling z = 0;
                for (int k = 0; k < r1.circle_count(); ++k)
                    if ((x >> k) & 1u) z |= Labeling{1} << map1[static_cast<std::size_t>(k)];
                for (int k = 0; k < r2.circle_count(); ++k)
                    if ((y >> k) & 1u) z |= Labeling{1} << map2[static_cast<std::size_t>(k)];
                phi[v].push_back(z);
            }
    }
    FactorReport rep;
    rep.vertices = P.vertex_count();
    rep.iso = check_natural_isomorphism(P, Fu, phi, true);
    return rep;
}

}  // namespace khoverture

#endif
