#ifndef KHOVERTURE_PERMUTOHEDRON_HPP
#define KHOVERTURE_PERMUTOHEDRON_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "khoverture/cube.hpp"

namespace khoverture {

using Subset = std::uint32_t;  // bit i = element i+1

// Face of the permutohedron on n letters: a strictly nested chain of proper
// non-empty subsets, stored smallest first. The empty chain is the top face.
struct PermFace {
    int n = 0;
    std::vector<Subset> chain;

    int dimension() const { return n - 1 - static_cast<int>(chain.size()); }
    bool is_vertex() const { return dimension() == 0; }
    bool contains_subset(Subset s) const { return std::binary_search(chain.begin(), chain.end(), s, by_size); }

    // vertex faces only: sigma[k] is the letter added at step k (0-based letters)
    std::vector<int> permutation() const {
        if (!is_vertex()) throw std::logic_error("permutation of a non-vertex face");
        std::vector<int> p;
        Subset prev = 0;
        for (Subset s : chain) {
            p.push_back(std::countr_zero(s & ~prev));
            prev = s;
        }
        Subset full = (Subset{1} << n) - 1;
        if (n > 0) p.push_back(std::countr_zero(full & ~prev));
        return p;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t k = 0; k < chain.size(); ++k) {
            if (k) s += " < ";
            s += "{";
            bool first = true;
            for (int i = 0; i < n; ++i)
                if ((chain[k] >> i) & 1u) {
                    if (!first) s += ",";
                    s += std::to_string(i + 1);
                    first = false;
                }
            s += "}";
        }
        return s + "]";
    }

    bool operator==(const PermFace&) const = default;
    auto operator<=>(const PermFace&) const = default;

    static bool by_size(Subset a, Subset b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    }
};

inline PermFace vertex_face(const std::vector<int>& sigma) {
    PermFace f;
    f.n = static_cast<int>(sigma.size());
    Subset acc = 0;
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
        acc |= Subset{1} << sigma[k];
        f.chain.push_back(acc);
    }
    return f;
}

inline bool nested_chain(const std::vector<Subset>& c, int n) {
    Subset full = (Subset{1} << n) - 1;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0 || c[k] == full || (c[k] & ~full)) return false;
        if (k && !((c[k - 1] & ~c[k]) == 0 && c[k - 1] != c[k])) return false;
    }
    return true;
}

class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t n) : w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += std::popcount(x);
        return c;
    }
    VertexSet operator&(const VertexSet& o) const {
        VertexSet r = *this;
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
        return r;
    }
    bool none() const {
        for (auto x : w_)
            if (x) return false;
        return true;
    }
    bool operator==(const VertexSet&) const = default;

private:
    std::vector<std::uint64_t> w_;
};

struct FaceLattice {
    int n = 0;
    std::vector<PermFace> faces;
    std::map<std::vector<Subset>, std::uint32_t> index;
    std::vector<std::vector<std::uint32_t>> facets;    // codim-1 faces of each face
    std::vector<std::uint32_t> vertices;               // face ids of the vertices
    std::vector<VertexSet> vertex_sets;                // indexed by face id, bits over `vertices`
    std::vector<std::size_t> f_vector;                 // f_vector[d] = #faces of dimension d

    std::uint32_t id(const PermFace& f) const {
        auto it = index.find(f.chain);
        if (it == index.end()) throw std::out_of_range("face not in lattice: " + f.str());
        return it->second;
    }
    std::uint32_t top() const { return index.at({}); }

    // G <= F iff chain(F) is a subset of chain(G)
    bool below(std::uint32_t G, std::uint32_t F) const {
        const auto& g = faces[G].chain;
        for (Subset s : faces[F].chain)
            if (!std::binary_search(g.begin(), g.end(), s, PermFace::by_size)) return false;
        return true;
    }

    long euler() const {
        long e = 0;
        for (std::size_t d = 0; d < f_vector.size(); ++d) e += (d % 2 ? -1L : 1L) * static_cast<long>(f_vector[d]);
        return e;
    }
};

inline FaceLattice face_lattice(int n) {
    if (n < 1 || n > 7) throw std::invalid_argument("face_lattice: n must be in 1..7");
    FaceLattice L;
    L.n = n;
    const Subset full = (Subset{1} << n) - 1;
    std::vector<Subset> cur;
    auto rec = [&](auto&& self, Subset last) -> void {
        PermFace f{n, cur};
        L.index[cur] = static_cast<std::uint32_t>(L.faces.size());
        L.faces.push_back(std::move(f));
        for (Subset s = 1; s < full; ++s)
            if ((s & last) == last && s != last) {
                cur.push_back(s);
                self(self, s);
                cur.pop_back();
            }
    };
    rec(rec, 0);
    L.facets.resize(L.faces.size());
    L.f_vector.assign(static_cast<std::size_t>(n), 0);
    for (std::uint32_t g = 0; g < L.faces.size(); ++g) {
        const auto& c = L.faces[g].chain;
        ++L.f_vector[static_cast<std::size_t>(L.faces[g].dimension())];
        if (L.faces[g].is_vertex()) L.vertices.push_back(g);
        for (std::size_t k = 0; k < c.size(); ++k) {
            std::vector<Subset> smaller = c;
            smaller.erase(smaller.begin() + static_cast<long>(k));
            L.facets[L.index.at(smaller)].push_back(g);
        }
    }
    L.vertex_sets.assign(L.faces.size(), VertexSet(L.vertices.size()));
    for (std::size_t vi = 0; vi < L.vertices.size(); ++vi) {
        const auto& vc = L.faces[L.vertices[vi]].chain;
        // every subchain of a maximal chain is a face containing that vertex
        std::size_t m = vc.size();
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::vector<Subset> sub;
            for (std::size_t k = 0; k < m; ++k)
                if ((mask >> k) & 1u) sub.push_back(vc[k]);
            L.vertex_sets[L.index.at(sub)].set(vi);
        }
    }
    return L;
}

// ---------------------------------------------------------------- facets F_S

inline Subset compress(Subset a, Subset mask) {
    Subset r = 0;
    int out = 0;
    for (int i = 0; i < 32; ++i)
        if ((mask >> i) & 1u) {
            if ((a >> i) & 1u) r |= Subset{1} << out;
            ++out;
        }
    return r;
}

inline Subset expand(Subset a, Subset mask) {
    Subset r = 0;
    int in = 0;
    for (int i = 0; i < 32; ++i)
        if ((mask >> i) & 1u) {
            if ((a >> in) & 1u) r |= Subset{1} << i;
            ++in;
        }
    return r;
}

inline void check_facet_subset(int n, Subset S) {
    Subset full = (Subset{1} << n) - 1;
    if (S == 0 || S == full || (S & ~full)) throw std::invalid_argument("facet subset must be proper and non-empty");
}

// F_S -> Pi^{|S|-1} x Pi^{n-1-|S|}: the part of the chain inside S, and the part above S
// relabeled into the complement.
inline std::pair<PermFace, PermFace> split_face(const PermFace& f, Subset S) {
    check_facet_subset(f.n, S);
    if (!f.contains_subset(S)) throw std::invalid_argument("face " + f.str() + " is not in F_S");
    int k = std::popcount(S);
    Subset comp = ((Subset{1} << f.n) - 1) & ~S;
    PermFace lo{k, {}}, hi{f.n - k, {}};
    for (Subset a : f.chain) {
        if ((a & S) == a && a != S) lo.chain.push_back(compress(a, S));
        else if ((a & S) == S && a != S) hi.chain.push_back(compress(a & ~S, comp));
    }
    return {lo, hi};
}

inline PermFace join_face(int n, Subset S, const PermFace& lo, const PermFace& hi) {
    check_facet_subset(n, S);
    int k = std::popcount(S);
    if (lo.n != k || hi.n != n - k) throw std::invalid_argument("join_face: factor sizes do not match S");
    Subset comp = ((Subset{1} << n) - 1) & ~S;
    PermFace f{n, {}};
    for (Subset a : lo.chain) f.chain.push_back(expand(a, S));
    f.chain.push_back(S);
    for (Subset a : hi.chain) f.chain.push_back(S | expand(a, comp));
    return f;
}

struct FacetSplitting {
    int n = 0;
    Subset S = 0;
    std::vector<std::pair<PermFace, std::pair<PermFace, PermFace>>> pairs;
    bool bijective = false;
    bool incidence_preserving = false;
    bool dimension_preserving = false;
};

inline FacetSplitting facet_splitting(int n, Subset S) {
    check_facet_subset(n, S);
    FaceLattice L = face_lattice(n);
    int k = std::popcount(S);
    FaceLattice A = face_lattice(k), B = face_lattice(n - k);
    FacetSplitting R;
    R.n = n;
    R.S = S;
    std::set<std::pair<std::uint32_t, std::uint32_t>> hit;
    std::map<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>> img;
    R.dimension_preserving = true;
    for (std::uint32_t g = 0; g < L.faces.size(); ++g) {
        const PermFace& f = L.faces[g];
        if (!f.contains_subset(S)) continue;
        auto [lo, hi] = split_face(f, S);
        if (join_face(n, S, lo, hi) != f) throw std::logic_error("facet splitting does not invert");
        if (lo.dimension() + hi.dimension() != f.dimension()) R.dimension_preserving = false;
        auto key = std::make_pair(A.id(lo), B.id(hi));
        hit.insert(key);
        img[g] = key;
        R.pairs.push_back({f, {lo, hi}});
    }
    R.bijective = hit.size() == R.pairs.size() && hit.size() == A.faces.size() * B.faces.size();
    R.incidence_preserving = true;
    for (auto& [g1, p1] : img)
        for (auto& [g2, p2] : img) {
            bool lhs = L.below(g1, g2);
            bool rhs = A.below(p1.first, p2.first) && B.below(p1.second, p2.second);
            if (lhs != rhs) R.incidence_preserving = false;
        }
    return R;
}

// ---------------------------------------------------------------- boundary partition

struct BoundaryPartition {
    int n = 0;
    std::vector<std::vector<Subset>> parts;  // parts[i-1] = facets F_S with |S| = i
    bool disjoint_within = false;
    bool corner_faces_ok = false;  // F_S meets F_T (|S| != |T|) exactly in the face {S,T} or not at all
    bool vertex_degree_ok = false; // each vertex lies in exactly n-1 facets
};

inline BoundaryPartition boundary_partition(int n, const FaceLattice* lattice = nullptr) {
    if (n < 2) throw std::invalid_argument("boundary_partition: n must be >= 2");
    FaceLattice own;
    if (!lattice) {
        own = face_lattice(n);
        lattice = &own;
    }
    const FaceLattice& L = *lattice;
    BoundaryPartition P;
    P.n = n;
    P.parts.resize(static_cast<std::size_t>(n - 1));
    Subset full = (Subset{1} << n) - 1;
    for (Subset s = 1; s < full; ++s) P.parts[static_cast<std::size_t>(std::popcount(s) - 1)].push_back(s);
    auto vs = [&](Subset s) { return L.vertex_sets[L.index.at({s})]; };
    P.disjoint_within = true;
    for (auto& part : P.parts)
        for (std::size_t a = 0; a < part.size(); ++a)
            for (std::size_t b = a + 1; b < part.size(); ++b)
                if (!(vs(part[a]) & vs(part[b])).none()) P.disjoint_within = false;
    P.corner_faces_ok = true;
    for (Subset s = 1; s < full; ++s)
        for (Subset t = 1; t < full; ++t) {
            if (std::popcount(s) == std::popcount(t)) continue;
            VertexSet meet = vs(s) & vs(t);
            bool nested = (s & t) == s || (s & t) == t;
            if (!nested) {
                if (!meet.none()) P.corner_faces_ok = false;
                continue;
            }
            std::vector<Subset> c{s, t};
            std::sort(c.begin(), c.end(), PermFace::by_size);
            auto id = L.index.at(c);
            if (!(meet == L.vertex_sets[id])) P.corner_faces_ok = false;
            // the corner is a facet of F_s
            if (L.faces[id].dimension() + 1 != L.faces[L.index.at({s})].dimension()) P.corner_faces_ok = false;
        }
    P.vertex_degree_ok = true;
    for (std::size_t vi = 0; vi < L.vertices.size(); ++vi) {
        int deg = 0;
        for (Subset s = 1; s < full; ++s)
            if (vs(s).get(vi)) ++deg;
        if (deg != n - 1) P.vertex_degree_ok = false;
    }
    return P;
}

// ---------------------------------------------------------------- cubical decomposition

struct CellCensus {
    std::vector<std::size_t> by_dim;
    std::size_t boundary = 0;
    long euler() const {
        long e = 0;
        for (std::size_t d = 0; d < by_dim.size(); ++d) e += (d % 2 ? -1L : 1L) * static_cast<long>(by_dim[d]);
        return e;
    }
    bool operator==(const CellCensus&) const = default;
};

struct CubeGluing {
    std::uint32_t cube_a = 0, cube_b = 0;  // indices into cubes
    int coord = 0;                         // t_coord = 1 facet of both
};

struct CubicalDecomposition {
    int n = 0;
    FaceLattice lattice;
    std::vector<std::uint32_t> cubes;  // vertex face id of each cube C_sigma
    std::vector<CubeGluing> gluings;
    std::size_t boundary_facets = 0;
    std::size_t interior_facets = 0;
    bool vertex_sets_ok = false;  // cube vertices = faces containing v_sigma
    // cells as sorted lists of face ids (barycenters), deduplicated across cubes
    std::set<std::vector<std::uint32_t>> cells;
    CellCensus census;
};

// Cube vertex t in {0,1}^{n-1}: the subchain keeping S_i where t_i = 0.
inline std::uint32_t cube_vertex_face(const FaceLattice& L, std::uint32_t sigma, std::uint32_t t) {
    const auto& c = L.faces[sigma].chain;
    std::vector<Subset> sub;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!((t >> i) & 1u)) sub.push_back(c[i]);
    return L.index.at(sub);
}

inline CubicalDecomposition cubical_decomposition(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("cubical_decomposition: n must be in 1..6");
    CubicalDecomposition D;
    D.n = n;
    D.lattice = face_lattice(n);
    const FaceLattice& L = D.lattice;
    D.cubes = L.vertices;
    const int dim = n - 1;
    Subset full = (Subset{1} << n) - 1;
    std::map<std::uint32_t, std::uint32_t> cube_of;
    for (std::uint32_t k = 0; k < D.cubes.size(); ++k) cube_of[D.cubes[k]] = k;
    D.vertex_sets_ok = true;
    for (std::uint32_t k = 0; k < D.cubes.size(); ++k) {
        std::uint32_t sigma = D.cubes[k];
        const auto& c = L.faces[sigma].chain;
        // vertices
        std::set<std::uint32_t> verts, containing;
        for (std::uint32_t t = 0; t < (1u << dim); ++t) verts.insert(cube_vertex_face(L, sigma, t));
        std::size_t vi = static_cast<std::size_t>(
            std::find(L.vertices.begin(), L.vertices.end(), sigma) - L.vertices.begin());
        for (std::uint32_t g = 0; g < L.faces.size(); ++g)
            if (L.vertex_sets[g].get(vi)) containing.insert(g);
        if (verts != containing) D.vertex_sets_ok = false;
        // facets
        for (int i = 0; i < dim; ++i) {
            ++D.boundary_facets;  // t_i = 0 lies in F_{S_i}
            Subset below = i ? c[static_cast<std::size_t>(i - 1)] : 0;
            Subset above = i + 1 < dim ? c[static_cast<std::size_t>(i + 1)] : full;
            Subset other = below | (above & ~c[static_cast<std::size_t>(i)]);
            std::vector<Subset> c2 = c;
            c2[static_cast<std::size_t>(i)] = other;
            std::uint32_t partner = cube_of.at(L.index.at(c2));
            ++D.interior_facets;
            if (k < partner) D.gluings.push_back({k, partner, i});
        }
        // all faces of the cube: each coordinate fixed 0, fixed 1, or free
        std::uint32_t total = 1;
        for (int i = 0; i < dim; ++i) total *= 3;
        for (std::uint32_t code = 0; code < total; ++code) {
            std::uint32_t zero = 0, one = 0, freem = 0, x = code;
            for (int i = 0; i < dim; ++i) {
                std::uint32_t digit = x % 3;
                x /= 3;
                if (digit == 0) zero |= 1u << i;
                else if (digit == 1) one |= 1u << i;
                else freem |= 1u << i;
            }
            std::vector<std::uint32_t> cell;
            for (std::uint32_t sub = freem;; sub = (sub - 1) & freem) {
                cell.push_back(cube_vertex_face(L, sigma, one | sub));
                if (sub == 0) break;
            }
            std::sort(cell.begin(), cell.end());
            D.cells.insert(std::move(cell));
        }
    }
    D.census.by_dim.assign(static_cast<std::size_t>(n), 0);
    std::uint32_t top = L.top();
    for (const auto& cell : D.cells) {
        std::size_t d = static_cast<std::size_t>(std::countr_zero(cell.size()));
        ++D.census.by_dim[d];
        if (!std::binary_search(cell.begin(), cell.end(), top)) ++D.census.boundary;
    }
    return D;
}

// Independent count: cells are intervals G <= F of the face poset, dimension dim F - dim G.
inline CellCensus interval_census(const FaceLattice& L) {
    CellCensus c;
    c.by_dim.assign(static_cast<std::size_t>(L.n), 0);
    std::uint32_t top = L.top();
    for (std::uint32_t g = 0; g < L.faces.size(); ++g)
        for (std::uint32_t f = 0; f < L.faces.size(); ++f)
            if (L.below(g, f)) {
                ++c.by_dim[static_cast<std::size_t>(L.faces[f].dimension() - L.faces[g].dimension())];
                if (f != top) ++c.boundary;
            }
    return c;
}

// ---------------------------------------------------------------- cube flow category

// Face of M(u,v): a chain u = u^0 > u^1 > ... > u^m = v of cube vertices.
struct ModuliFace {
    CubeVertex u, v;
    std::vector<std::uint32_t> chain;  // bit masks, u first, v last

    int length() const { return static_cast<int>(chain.size()) - 1; }
    int dimension() const { return u.weight() - v.weight() - length(); }
    bool operator==(const ModuliFace& o) const { return chain == o.chain && u.n == o.u.n; }
    std::string str() const {
        std::string s;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            if (k) s += ">";
            s += CubeVertex(chain[k], u.n).str();
        }
        return s;
    }
};

inline void check_moduli_pair(const CubeVertex& u, const CubeVertex& v) {
    if (u.n != v.n) throw std::invalid_argument("moduli: cube dimensions differ");
    if (u.bits == v.bits) throw std::invalid_argument("moduli: u = v (only the identity morphism)");
    if (!u.gt(v)) throw std::invalid_argument("moduli: need u > v");
}

// Nested-subset chain of the corresponding face of Pi^{k-1}, k = |u|-|v|.
inline PermFace to_perm_face(const ModuliFace& f) {
    std::uint32_t diff = f.u.bits & ~f.v.bits;
    int k = std::popcount(diff);
    PermFace p{k, {}};
    for (std::size_t j = f.chain.size() - 2; j >= 1; --j) p.chain.push_back(compress(f.chain[j] & diff, diff));
    return p;
}

inline ModuliFace from_perm_face(const CubeVertex& u, const CubeVertex& v, const PermFace& p) {
    std::uint32_t diff = u.bits & ~v.bits;
    ModuliFace f{u, v, {u.bits}};
    for (auto it = p.chain.rbegin(); it != p.chain.rend(); ++it) f.chain.push_back(v.bits | expand(*it, diff));
    f.chain.push_back(v.bits);
    return f;
}

struct ModuliLattice {
    CubeVertex u, v;
    std::vector<ModuliFace> faces;
    std::map<std::vector<std::uint32_t>, std::uint32_t> index;
    std::size_t maximal_chains() const {
        std::size_t c = 0;
        for (auto& f : faces)
            if (f.dimension() == 0) ++c;
        return c;
    }
};

inline ModuliLattice moduli(const CubeVertex& u, const CubeVertex& v) {
    check_moduli_pair(u, v);
    ModuliLattice M{u, v, {}, {}};
    std::vector<std::uint32_t> cur{u.bits};
    auto rec = [&](auto&& self, std::uint32_t last) -> void {
        if (last == v.bits) {
            M.index[cur] = static_cast<std::uint32_t>(M.faces.size());
            M.faces.push_back({u, v, cur});
            return;
        }
        std::uint32_t free = last & ~v.bits;
        // next vertex: v plus a proper subset of the remaining free coordinates
        for (std::uint32_t sub = (free - 1) & free;; sub = (sub - 1) & free) {
            cur.push_back(v.bits | sub);
            self(self, v.bits | sub);
            cur.pop_back();
            if (sub == 0) break;
        }
    };
    rec(rec, u.bits);
    return M;
}

// g in M(u,v), f in M(v,w) -> composite in M(u,w)
inline ModuliFace compose(const ModuliFace& f, const ModuliFace& g) {
    if (g.v.bits != f.u.bits || g.v.n != f.u.n) throw std::invalid_argument("compose: middle vertices differ");
    ModuliFace r{g.u, f.v, g.chain};
    r.chain.insert(r.chain.end(), f.chain.begin() + 1, f.chain.end());
    return r;
}

// S of the facet F_S receiving M(v,w) x M(u,v): the v-coordinates among those where u and w differ.
inline Subset composition_facet(const CubeVertex& u, const CubeVertex& v, const CubeVertex& w) {
    std::uint32_t diff = u.bits & ~w.bits;
    return compress(v.bits & diff, diff);
}

// ---------------------------------------------------------------- cubical model of M(u,v)

// Cell of the cube complex: a chain c with the cube [0,1]^{m-1}; coordinates in `zero`
// fixed to 0, others open. Faces t_i = 1 are glued to the cube of c without u^i.
struct ModuliCell {
    std::uint32_t face = 0;  // index into the moduli lattice (the chain c)
    std::uint32_t zero = 0;  // bit i-1 for intermediate vertex u^i
    int dimension = 0;
    bool boundary = false;
};

struct CubicalModel {
    ModuliLattice lattice;
    std::vector<ModuliCell> cells;
    std::vector<std::vector<std::uint32_t>> cell_vertices;  // moduli face ids, sorted
    CellCensus census;
    bool iso_ok = false;  // cells match the cubical decomposition of Pi^{k-1}
};

inline CubicalModel cubical_model(const CubeVertex& u, const CubeVertex& v) {
    CubicalModel C;
    C.lattice = moduli(u, v);
    const auto& M = C.lattice;
    int k = u.weight() - v.weight();
    C.census.by_dim.assign(static_cast<std::size_t>(k), 0);
    for (std::uint32_t fi = 0; fi < M.faces.size(); ++fi) {
        const auto& c = M.faces[fi].chain;
        int inner = static_cast<int>(c.size()) - 2;
        for (std::uint32_t z = 0; z < (1u << inner); ++z) {
            ModuliCell cell{fi, z, inner - std::popcount(z), z != 0};
            // vertices: drop any subset of the open coordinates (t = 1 gluings)
            std::uint32_t open = ((1u << inner) - 1) & ~z;
            std::vector<std::uint32_t> vs;
            for (std::uint32_t drop = open;; drop = (drop - 1) & open) {
                std::vector<std::uint32_t> sub{c.front()};
                for (int i = 0; i < inner; ++i)
                    if (!((drop >> i) & 1u)) sub.push_back(c[static_cast<std::size_t>(i + 1)]);
                sub.push_back(c.back());
                vs.push_back(M.index.at(sub));
                if (drop == 0) break;
            }
            std::sort(vs.begin(), vs.end());
            ++C.census.by_dim[static_cast<std::size_t>(cell.dimension)];
            if (cell.boundary) ++C.census.boundary;
            C.cells.push_back(cell);
            C.cell_vertices.push_back(std::move(vs));
        }
    }
    if (k <= 6) {
        CubicalDecomposition D = cubical_decomposition(k);
        std::set<std::vector<std::uint32_t>> seen;
        bool ok = C.census == D.census && C.cells.size() == D.cells.size();
        for (std::size_t i = 0; ok && i < C.cells.size(); ++i) {
            std::vector<std::uint32_t> img;
            for (auto mf : C.cell_vertices[i]) img.push_back(D.lattice.id(to_perm_face(M.faces[mf])));
            std::sort(img.begin(), img.end());
            if (!D.cells.count(img)) ok = false;
            if (std::countr_zero(img.size()) != static_cast<unsigned>(C.cells[i].dimension)) ok = false;
            bool in_boundary = !std::binary_search(img.begin(), img.end(), D.lattice.top());
            if (in_boundary != C.cells[i].boundary) ok = false;
            seen.insert(std::move(img));
        }
        C.iso_ok = ok && seen.size() == C.cells.size();
    }
    return C;
}

// ---------------------------------------------------------------- reports

// Facet t_coord = 1 of both cubes in a gluing has the same vertex faces.
inline bool gluings_consistent(const CubicalDecomposition& D) {
    const int dim = D.n - 1;
    auto facet = [&](std::uint32_t cube, int coord) {
        std::set<std::uint32_t> vs;
        for (std::uint32_t t = 0; t < (1u << dim); ++t)
            if ((t >> coord) & 1u) vs.insert(cube_vertex_face(D.lattice, D.cubes[cube], t));
        return vs;
    };
    if (2 * D.gluings.size() != D.interior_facets) return false;
    for (const auto& g : D.gluings)
        if (facet(g.cube_a, g.coord) != facet(g.cube_b, g.coord)) return false;
    return true;
}

// Composition in the cube flow category is associative and lands in the expected facet,
// for every u > v > w > x with |u| - |x| <= max_span inside a cube of dimension n.
struct AssociativityReport {
    std::size_t triples = 0;
    std::size_t facet_checks = 0;
    bool ok = true;
    std::string witness;
};

inline AssociativityReport check_flow_associativity(int n, int max_span) {
    AssociativityReport R;
    const std::uint32_t N = 1u << n;
    std::map<std::pair<std::uint32_t, std::uint32_t>, ModuliLattice> cache;
    auto lat = [&](std::uint32_t a, std::uint32_t b) -> const ModuliLattice& {
        auto it = cache.find({a, b});
        if (it == cache.end()) it = cache.emplace(std::make_pair(a, b), moduli(CubeVertex(a, n), CubeVertex(b, n))).first;
        return it->second;
    };
    auto below = [](std::uint32_t a, std::uint32_t b) { return a != b && (b & ~a) == 0; };
    for (std::uint32_t u = 0; u < N; ++u)
        for (std::uint32_t x = 0; x < N; ++x) {
            if (!below(u, x) || std::popcount(u) - std::popcount(x) > max_span) continue;
            for (std::uint32_t v = x; v < N; ++v) {
                if (!below(u, v) || !below(v, x)) continue;
                // two-step compositions land in F_S
                for (auto& g : lat(u, v).faces)
                    for (auto& f : lat(v, x).faces) {
                        ModuliFace c = compose(f, g);
                        ++R.facet_checks;
                        Subset S = composition_facet(CubeVertex(u, n), CubeVertex(v, n), CubeVertex(x, n));
                        if (!to_perm_face(c).contains_subset(S) || c.dimension() != f.dimension() + g.dimension()) {
                            R.ok = false;
                            if (R.witness.empty()) R.witness = "composite " + c.str() + " misses its facet";
                        }
                    }
                for (std::uint32_t w = x; w < v; ++w) {
                    if (!below(v, w) || !below(w, x)) continue;
                    for (auto& h : lat(u, v).faces)
                        for (auto& g : lat(v, w).faces)
                            for (auto& f : lat(w, x).faces) {
                                ++R.triples;
                                if (!(compose(f, compose(g, h)) == compose(compose(f, g), h))) {
                                    R.ok = false;
                                    if (R.witness.empty()) R.witness = "non-associative at " + h.str() + " | " + g.str() + " | " + f.str();
                                }
                            }
                }
            }
        }
    return R;
}

struct PermutohedronReport {
    int n = 0;
    std::vector<std::size_t> f_vector;
    std::size_t vertices = 0, facets = 0;
    long euler = 0;
    bool partition_ok = false;
    bool splitting_ok = false;
    std::size_t cubes = 0, gluings = 0;
    bool cubes_ok = false;
    bool census_ok = false;
    bool ok() const {
        std::size_t fact = 1;
        for (int k = 2; k <= n; ++k) fact *= static_cast<std::size_t>(k);
        return vertices == fact && facets == (std::size_t{1} << n) - 2 && euler == 1 && partition_ok &&
               splitting_ok && cubes == fact && cubes_ok && census_ok;
    }
};

inline PermutohedronReport permutohedron_report(int n) {
    if (n < 2 || n > 6) throw std::invalid_argument("permutohedron_report: n must be in 2..6");
    PermutohedronReport R;
    R.n = n;
    CubicalDecomposition D = cubical_decomposition(n);
    const FaceLattice& L = D.lattice;
    R.f_vector = L.f_vector;
    R.vertices = L.f_vector.front();
    R.facets = L.f_vector.size() >= 2 ? L.f_vector[L.f_vector.size() - 2] : 0;
    R.euler = L.euler();
    auto P = boundary_partition(n, &L);
    R.partition_ok = P.disjoint_within && P.corner_faces_ok && P.vertex_degree_ok;
    R.splitting_ok = true;
    Subset full = (Subset{1} << n) - 1;
    for (Subset S = 1; S < full; ++S) {
        auto F = facet_splitting(n, S);
        if (!(F.bijective && F.incidence_preserving && F.dimension_preserving)) R.splitting_ok = false;
    }
    R.cubes = D.cubes.size();
    R.gluings = D.gluings.size();
    R.cubes_ok = D.vertex_sets_ok && gluings_consistent(D);
    R.census_ok = D.census == interval_census(L);
    return R;
}

}  // namespace khoverture

#endif
