#ifndef KHOVERTURE_BURNSIDE_HPP
#define KHOVERTURE_BURNSIDE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "khoverture/cube.hpp"
#include "khoverture/parallel.hpp"
#include "khoverture/resolution_cube.hpp"

namespace khoverture {

// A span X <- A -> Y: s into the upper vertex, t into the lower one.
struct Correspondence {
    std::uint32_t source_size = 0;
    std::uint32_t target_size = 0;
    std::vector<std::uint32_t> s, t;
    std::vector<std::uint32_t> src_offset, src_elems;  // elements grouped by source

    std::size_t size() const { return s.size(); }

    void add(std::uint32_t x, std::uint32_t y) {
        s.push_back(x);
        t.push_back(y);
    }

    void index() {
        src_offset.assign(source_size + 1, 0);
        for (auto x : s) ++src_offset[x + 1];
        for (std::uint32_t k = 0; k < source_size; ++k) src_offset[k + 1] += src_offset[k];
        src_elems.assign(s.size(), 0);
        std::vector<std::uint32_t> fill(src_offset.begin(), src_offset.end() - 1);
        for (std::uint32_t e = 0; e < s.size(); ++e) src_elems[fill[s[e]]++] = e;
    }

    // elements whose source is x
    std::pair<const std::uint32_t*, const std::uint32_t*> from(std::uint32_t x) const {
        return {src_elems.data() + src_offset[x], src_elems.data() + src_offset[x + 1]};
    }

    static Correspondence identity(std::uint32_t n) {
        Correspondence c;
        c.source_size = c.target_size = n;
        for (std::uint32_t k = 0; k < n; ++k) c.add(k, k);
        c.index();
        return c;
    }
};

inline std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
    return (std::uint64_t{a} << 32) | b;
}
inline std::uint32_t first_of(std::uint64_t p) { return static_cast<std::uint32_t>(p >> 32); }
inline std::uint32_t second_of(std::uint64_t p) { return static_cast<std::uint32_t>(p); }

// Comparison bijection on a 2-face with bottom w and coordinates i<j.
// Keys are composites (a,b) along "remove i first", values along "remove j first".
struct FaceBijection {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> fwd;  // sorted by first
    std::vector<std::pair<std::uint64_t, std::uint64_t>> bwd;  // sorted by first

    void finalize() {
        std::sort(fwd.begin(), fwd.end());
        bwd.clear();
        bwd.reserve(fwd.size());
        for (auto [a, b] : fwd) bwd.emplace_back(b, a);
        std::sort(bwd.begin(), bwd.end());
    }

    static std::optional<std::uint64_t> find(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& v,
                                             std::uint64_t key) {
        auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(key, std::uint64_t{0}));
        if (it == v.end() || it->first != key) return std::nullopt;
        return it->second;
    }
};

class BurnsideCubeFunctor {
public:
    BurnsideCubeFunctor() = default;
    explicit BurnsideCubeFunctor(int n) : n_(n) {
        if (n < 0 || n > kMaxCubeDim) throw std::invalid_argument("cube dimension out of range");
        sizes_.assign(std::size_t{1} << n, 0);
        edges_.resize((std::size_t{1} << n) * static_cast<std::size_t>(std::max(n, 1)));
        faces_.resize((std::size_t{1} << n) * static_cast<std::size_t>(std::max(n * n, 1)));
    }

    int dim() const { return n_; }
    std::uint32_t vertex_count() const { return 1u << n_; }

    std::uint32_t size(std::uint32_t v) const { return sizes_[v]; }
    void set_size(std::uint32_t v, std::uint32_t k) { sizes_[v] = k; }

    // edge from v | e_i down to v
    Correspondence& edge(std::uint32_t v, int i) { return edges_[v * slot_n() + i]; }
    const Correspondence& edge(std::uint32_t v, int i) const { return edges_[v * slot_n() + i]; }

    // 2-face with bottom w, coordinates i<j
    FaceBijection& face(std::uint32_t w, int i, int j) { return faces_[(w * slot_n() + i) * slot_n() + j]; }
    const FaceBijection& face(std::uint32_t w, int i, int j) const {
        return faces_[(w * slot_n() + i) * slot_n() + j];
    }

    // Apply the comparison bijection on face (w; x, y) to a composite along
    // "remove x first", returning the composite along "remove y first".
    std::optional<std::uint64_t> swap_on_face(std::uint32_t w, int x, int y, std::uint64_t comp) const {
        if (x < y) return FaceBijection::find(face(w, x, y).fwd, comp);
        return FaceBijection::find(face(w, y, x).bwd, comp);
    }

    // Composites along "remove i first" (path through w|e_j), in order.
    std::vector<std::uint64_t> composites(std::uint32_t w, int first, int second) const {
        const auto& A = edge(w | (1u << second), first);
        const auto& B = edge(w, second);
        std::vector<std::uint64_t> out;
        for (std::uint32_t a = 0; a < A.size(); ++a) {
            auto [lo, hi] = B.from(A.t[a]);
            for (auto p = lo; p != hi; ++p) out.push_back(pack(a, *p));
        }
        return out;
    }

    void index_edges() {
        for (std::uint32_t v = 0; v < vertex_count(); ++v)
            for (int i = 0; i < n_; ++i) {
                if (v & (1u << i)) continue;
                auto& e = edge(v, i);
                e.source_size = sizes_[v | (1u << i)];
                e.target_size = sizes_[v];
                e.index();
            }
    }

    // optional quantum gradings of the elements of F(v)
    std::vector<std::vector<int>> qgrading;

private:
    std::size_t slot_n() const { return static_cast<std::size_t>(std::max(n_, 1)); }
    int n_ = 0;
    std::vector<std::uint32_t> sizes_;
    std::vector<Correspondence> edges_;
    std::vector<FaceBijection> faces_;
};

// ------------------------------------------------------------- Khovanov functor

struct FaceId {
    std::uint32_t w = 0;
    int i = 0, j = 0;
};

struct KhovanovFunctor {
    BurnsideCubeFunctor functor;
    std::size_t ladybug_fibers = 0;  // size-2 composite fibers
    std::size_t ladybug_faces = 0;
};

namespace detail {

struct FiberGroup {
    std::uint64_t key;  // (x at top, z at bottom)
    std::uint64_t comp;
};

inline std::vector<FiberGroup> grouped(const BurnsideCubeFunctor& F, std::uint32_t w, int first, int second) {
    const auto& A = F.edge(w | (1u << second), first);
    const auto& B = F.edge(w, second);
    std::vector<FiberGroup> out;
    for (auto c : F.composites(w, first, second))
        out.push_back({pack(A.s[first_of(c)], B.t[second_of(c)]), c});
    std::sort(out.begin(), out.end(), [](const FiberGroup& a, const FiberGroup& b) {
        return a.key != b.key ? a.key < b.key : a.comp < b.comp;
    });
    return out;
}

}  // namespace detail

// F(v) = labelings of P(v); edge elements (x,y) for every x appearing in delta(y).
// If `left_pair_face` is set, that one face uses the left pair instead (mutation test).
inline KhovanovFunctor build_khovanov_functor(const ResolutionCube& cube,
                                              std::optional<FaceId> left_pair_face = std::nullopt,
                                              int jobs = 1) {
    const int n = cube.dim();
    KhovanovFunctor out;
    BurnsideCubeFunctor& F = out.functor;
    F = BurnsideCubeFunctor(n);
    F.qgrading.resize(cube.vertex_count());
    for (std::uint32_t v = 0; v < cube.vertex_count(); ++v) {
        F.set_size(v, static_cast<std::uint32_t>(cube.generators(v)));
        auto& q = F.qgrading[v];
        q.resize(cube.generators(v));
        for (Labeling x = 0; x < q.size(); ++x) q[x] = cube.gr_q(v, x);
    }
    parallel_for(jobs, cube.vertex_count(), [&](std::size_t vv) {
        auto v = static_cast<std::uint32_t>(vv);
        for (int i = 0; i < n; ++i) {
            if (v & (1u << i)) continue;
            EdgeMap em = cube.edge(v, i);
            auto& C = F.edge(v, i);
            for (Labeling y = 0; y < cube.generators(v); ++y)
                apply_edge(em, y, Specialization{}, [&](Labeling x, long) { C.add(x, y); });
        }
    });
    F.index_edges();

    const LinkDiagram& d = cube.diagram();
    std::vector<std::size_t> lb_fibers(cube.vertex_count(), 0), lb_faces(cube.vertex_count(), 0);
    parallel_for(jobs, cube.vertex_count(), [&](std::size_t ww) {
        auto w = static_cast<std::uint32_t>(ww);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                auto P = detail::grouped(F, w, i, j);  // middle w|e_j
                auto Q = detail::grouped(F, w, j, i);  // middle w|e_i
                if (P.size() != Q.size())
                    throw std::logic_error("2-face composites differ in size at w=" +
                                           CubeVertex(w, n).str());
                auto& fb = F.face(w, i, j);
                std::optional<Ladybug> lb;
                bool lb_done = false;
                bool any_lb = false;
                for (std::size_t k = 0; k < P.size();) {
                    std::size_t e = k;
                    while (e < P.size() && P[e].key == P[k].key) ++e;
                    if (Q[k].key != P[k].key || (e < Q.size() && Q[e].key == P[k].key) ||
                        Q[e - 1].key != P[k].key)
                        throw std::logic_error("2-face fiber sizes differ");
                    if (e - k == 1) {
                        fb.fwd.emplace_back(P[k].comp, Q[k].comp);
                    } else if (e - k == 2) {
                        if (!lb_done) {
                            lb = ladybug(d, cube.at(w), i, j);
                            lb_done = true;
                        }
                        if (!lb) throw std::logic_error("2-element fiber without a ladybug configuration");
                        any_lb = true;
                        ++lb_fibers[w];
                        bool left = left_pair_face && left_pair_face->w == w && left_pair_face->i == i &&
                                    left_pair_face->j == j;
                        int arc = left ? lb->left_arcs[0] : lb->right_arcs[0];
                        const auto& A = F.edge(w | (1u << j), i);
                        const auto& A2 = F.edge(w | (1u << i), j);
                        std::uint32_t vj = w | (1u << j), vi = w | (1u << i);
                        auto lab = [&](std::uint32_t vert, std::uint32_t y) {
                            return (y >> cube.circle_of(vert, arc)) & 1u;
                        };
                        std::uint32_t yP0 = A.t[first_of(P[k].comp)];
                        std::uint32_t yQ0 = A2.t[first_of(Q[k].comp)];
                        if (lab(vj, yP0) == lab(vj, A.t[first_of(P[k + 1].comp)]))
                            throw std::logic_error("ladybug arc does not separate the fiber");
                        bool same = lab(vj, yP0) == lab(vi, yQ0);
                        fb.fwd.emplace_back(P[k].comp, Q[same ? k : k + 1].comp);
                        fb.fwd.emplace_back(P[k + 1].comp, Q[same ? k + 1 : k].comp);
                    } else {
                        throw std::logic_error("2-face fiber of size > 2");
                    }
                    k = e;
                }
                if (any_lb) ++lb_faces[w];
                fb.finalize();
            }
    });
    for (auto c : lb_fibers) out.ladybug_fibers += c;
    for (auto c : lb_faces) out.ladybug_faces += c;
    return out;
}

// ------------------------------------------------------------- coherence

struct CoherenceViolation {
    std::uint32_t bottom = 0;
    std::array<int, 3> coords{};
    std::array<std::uint32_t, 3> start{};  // composite along (i,j,k)
    std::string what;
};

struct CoherenceReport {
    std::size_t faces_checked = 0;
    std::size_t triples_checked = 0;
    std::size_t violation_count = 0;
    std::vector<CoherenceViolation> violations;  // witnesses, capped
    bool ok() const { return violation_count == 0; }
};

namespace detail {

inline std::vector<std::array<std::uint32_t, 3>> triples(const BurnsideCubeFunctor& F, std::uint32_t u,
                                                         const std::array<int, 3>& order) {
    std::uint32_t v1 = u & ~(1u << order[0]);
    std::uint32_t v2 = v1 & ~(1u << order[1]);
    std::uint32_t v3 = v2 & ~(1u << order[2]);
    const auto& A = F.edge(v1, order[0]);
    const auto& B = F.edge(v2, order[1]);
    const auto& C = F.edge(v3, order[2]);
    std::vector<std::array<std::uint32_t, 3>> out;
    for (std::uint32_t a = 0; a < A.size(); ++a) {
        auto [lb, hb] = B.from(A.t[a]);
        for (auto pb = lb; pb != hb; ++pb) {
            auto [lc, hc] = C.from(B.t[*pb]);
            for (auto pc = lc; pc != hc; ++pc) out.push_back({a, *pb, *pc});
        }
    }
    return out;
}

}  // namespace detail

inline CoherenceReport verify_coherence(const BurnsideCubeFunctor& F, int jobs = 1,
                                        std::size_t max_witnesses = 16) {
    const int n = F.dim();
    CoherenceReport rep;
    if (n < 3) return rep;
    std::vector<CoherenceReport> per(F.vertex_count());
    parallel_for(jobs, F.vertex_count(), [&](std::size_t ww) {
        auto w = static_cast<std::uint32_t>(ww);
        auto& r = per[w];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    std::uint32_t mask = (1u << i) | (1u << j) | (1u << k);
                    if (w & mask) continue;
                    std::uint32_t u = w | mask;
                    ++r.faces_checked;
                    for (auto tr : detail::triples(F, u, {i, j, k})) {
                        ++r.triples_checked;
                        std::array<int, 3> ord{i, j, k};
                        auto cur = tr;
                        std::string err;
                        for (int step = 0; step < 6 && err.empty(); ++step) {
                            if (step % 2 == 0) {
                                // swap the first two steps: face bottom u - ord0 - ord1
                                std::uint32_t bot = u & ~(1u << ord[0]) & ~(1u << ord[1]);
                                auto res = F.swap_on_face(bot, ord[0], ord[1], pack(cur[0], cur[1]));
                                if (!res) err = "missing face entry";
                                else {
                                    cur[0] = first_of(*res);
                                    cur[1] = second_of(*res);
                                    std::swap(ord[0], ord[1]);
                                }
                            } else {
                                auto res = F.swap_on_face(w, ord[1], ord[2], pack(cur[1], cur[2]));
                                if (!res) err = "missing face entry";
                                else {
                                    cur[1] = first_of(*res);
                                    cur[2] = second_of(*res);
                                    std::swap(ord[1], ord[2]);
                                }
                            }
                        }
                        if (err.empty() && cur != tr) err = "hexagon does not close";
                        if (!err.empty()) {
                            ++r.violation_count;
                            if (r.violations.size() < max_witnesses) r.violations.push_back({w, {i, j, k}, tr, err});
                        }
                    }
                }
    });
    for (auto& r : per) {
        rep.faces_checked += r.faces_checked;
        rep.triples_checked += r.triples_checked;
        rep.violation_count += r.violation_count;
        for (auto& v : r.violations)
            if (rep.violations.size() < max_witnesses) rep.violations.push_back(v);
    }
    return rep;
}

// 2-face sanity: every face bijection respects s and t and is a bijection.
inline bool faces_respect_endpoints(const BurnsideCubeFunctor& F, std::string* why = nullptr) {
    const int n = F.dim();
    for (std::uint32_t w = 0; w < F.vertex_count(); ++w)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                const auto& fb = F.face(w, i, j);
                auto P = F.composites(w, i, j);
                auto Q = F.composites(w, j, i);
                if (fb.fwd.size() != P.size() || P.size() != Q.size()) {
                    if (why) *why = "face size mismatch at " + CubeVertex(w, n).str();
                    return false;
                }
                const auto& A = F.edge(w | (1u << j), i);
                const auto& B = F.edge(w, j);
                const auto& A2 = F.edge(w | (1u << i), j);
                const auto& B2 = F.edge(w, i);
                std::vector<std::uint64_t> images;
                for (auto [p, q] : fb.fwd) {
                    if (A.s[first_of(p)] != A2.s[first_of(q)] || B.t[second_of(p)] != B2.t[second_of(q)]) {
                        if (why) *why = "face bijection moves endpoints at " + CubeVertex(w, n).str();
                        return false;
                    }
                    images.push_back(q);
                }
                std::sort(images.begin(), images.end());
                if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
                    if (why) *why = "face map not injective";
                    return false;
                }
            }
    return true;
}

// ------------------------------------------------------------- algebra of functors

inline BurnsideCubeFunctor one_point_functor() {
    BurnsideCubeFunctor F(0);
    F.set_size(0, 1);
    F.qgrading = {{0}};
    return F;
}

inline BurnsideCubeFunctor product(const BurnsideCubeFunctor& F, const BurnsideCubeFunctor& G) {
    const int m = F.dim(), k = G.dim();
    BurnsideCubeFunctor H(m + k);
    auto split = [&](std::uint32_t v) { return std::make_pair(v & ((1u << m) - 1u), v >> m); };
    bool graded = !F.qgrading.empty() && !G.qgrading.empty();
    if (graded) H.qgrading.resize(H.vertex_count());
    for (std::uint32_t v = 0; v < H.vertex_count(); ++v) {
        auto [a, b] = split(v);
        H.set_size(v, F.size(a) * G.size(b));
        if (graded) {
            auto& q = H.qgrading[v];
            for (std::uint32_t x = 0; x < F.size(a); ++x)
                for (std::uint32_t y = 0; y < G.size(b); ++y) q.push_back(F.qgrading[a][x] + G.qgrading[b][y]);
        }
    }
    for (std::uint32_t v = 0; v < H.vertex_count(); ++v) {
        auto [a, b] = split(v);
        for (int c = 0; c < m + k; ++c) {
            if (v & (1u << c)) continue;
            auto& E = H.edge(v, c);
            if (c < m) {
                const auto& A = F.edge(a, c);
                std::uint32_t gs = G.size(b);
                for (std::uint32_t e = 0; e < A.size(); ++e)
                    for (std::uint32_t y = 0; y < gs; ++y) E.add(A.s[e] * gs + y, A.t[e] * gs + y);
            } else {
                const auto& B = G.edge(b, c - m);
                std::uint32_t gu = G.size(b | (1u << (c - m))), gl = G.size(b);
                for (std::uint32_t x = 0; x < F.size(a); ++x)
                    for (std::uint32_t e = 0; e < B.size(); ++e) E.add(x * gu + B.s[e], x * gl + B.t[e]);
            }
        }
    }
    H.index_edges();
    // element index of a product edge element
    auto f_elem = [&](std::uint32_t a_elem, std::uint32_t y, std::uint32_t b) { return a_elem * G.size(b) + y; };
    for (std::uint32_t w = 0; w < H.vertex_count(); ++w) {
        auto [a, b] = split(w);
        for (int i = 0; i < m + k; ++i)
            for (int j = i + 1; j < m + k; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                auto& fb = H.face(w, i, j);
                if (j < m) {
                    // both coordinates in F; the G element rides along
                    const auto& ff = F.face(a, i, j);
                    std::uint32_t gs = G.size(b);
                    for (auto [p, q] : ff.fwd)
                        for (std::uint32_t y = 0; y < gs; ++y)
                            fb.fwd.emplace_back(pack(f_elem(first_of(p), y, b), f_elem(second_of(p), y, b)),
                                                pack(f_elem(first_of(q), y, b), f_elem(second_of(q), y, b)));
                } else if (i >= m) {
                    const auto& gf = G.face(b, i - m, j - m);
                    std::uint32_t bj = b | (1u << (j - m)), bi = b | (1u << (i - m));
                    std::size_t nA = G.edge(bj, i - m).size(), nB = G.edge(b, j - m).size();
                    std::size_t nA2 = G.edge(bi, j - m).size(), nB2 = G.edge(b, i - m).size();
                    for (auto [p, q] : gf.fwd)
                        for (std::uint32_t x = 0; x < F.size(a); ++x)
                            fb.fwd.emplace_back(
                                pack(static_cast<std::uint32_t>(x * nA + first_of(p)),
                                     static_cast<std::uint32_t>(x * nB + second_of(p))),
                                pack(static_cast<std::uint32_t>(x * nA2 + first_of(q)),
                                     static_cast<std::uint32_t>(x * nB2 + second_of(q))));
                } else {
                    // i in F, j in G: both composites are indexed by (F element, G element)
                    int gj = j - m;
                    const auto& A = F.edge(a, i);
                    const auto& B = G.edge(b, gj);
                    std::uint32_t bj = b | (1u << gj);
                    std::uint32_t g_up = G.size(bj), g_lo = G.size(b);
                    std::size_t nB = B.size();
                    for (std::uint32_t ea = 0; ea < A.size(); ++ea)
                        for (std::uint32_t eb = 0; eb < nB; ++eb) {
                            // remove i first: F-edge at G vertex bj, then G-edge at F vertex a
                            std::uint32_t p1 = ea * g_up + B.s[eb];
                            std::uint32_t p2 = static_cast<std::uint32_t>(A.t[ea] * nB + eb);
                            // remove j first: G-edge at F vertex a|e_i, then F-edge at G vertex b
                            std::uint32_t q1 = static_cast<std::uint32_t>(A.s[ea] * nB + eb);
                            std::uint32_t q2 = ea * g_lo + B.t[eb];
                            fb.fwd.emplace_back(pack(p1, p2), pack(q1, q2));
                        }
                }
                fb.finalize();
            }
    }
    return H;
}

inline BurnsideCubeFunctor disjoint_union(const BurnsideCubeFunctor& F, const BurnsideCubeFunctor& G) {
    if (F.dim() != G.dim()) throw std::invalid_argument("disjoint_union: dimension mismatch");
    const int n = F.dim();
    BurnsideCubeFunctor H(n);
    bool graded = !F.qgrading.empty() && !G.qgrading.empty();
    if (graded) H.qgrading.resize(H.vertex_count());
    for (std::uint32_t v = 0; v < H.vertex_count(); ++v) {
        H.set_size(v, F.size(v) + G.size(v));
        if (graded) {
            H.qgrading[v] = F.qgrading[v];
            H.qgrading[v].insert(H.qgrading[v].end(), G.qgrading[v].begin(), G.qgrading[v].end());
        }
    }
    for (std::uint32_t v = 0; v < H.vertex_count(); ++v)
        for (int i = 0; i < n; ++i) {
            if (v & (1u << i)) continue;
            auto& E = H.edge(v, i);
            const auto& A = F.edge(v, i);
            const auto& B = G.edge(v, i);
            std::uint32_t up = F.size(v | (1u << i)), lo = F.size(v);
            for (std::uint32_t e = 0; e < A.size(); ++e) E.add(A.s[e], A.t[e]);
            for (std::uint32_t e = 0; e < B.size(); ++e) E.add(B.s[e] + up, B.t[e] + lo);
        }
    H.index_edges();
    for (std::uint32_t w = 0; w < H.vertex_count(); ++w)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                auto& fb = H.face(w, i, j);
                for (auto pq : F.face(w, i, j).fwd) fb.fwd.push_back(pq);
                auto oA = static_cast<std::uint32_t>(F.edge(w | (1u << j), i).size());
                auto oB = static_cast<std::uint32_t>(F.edge(w, j).size());
                auto oA2 = static_cast<std::uint32_t>(F.edge(w | (1u << i), j).size());
                auto oB2 = static_cast<std::uint32_t>(F.edge(w, i).size());
                for (auto [p, q] : G.face(w, i, j).fwd)
                    fb.fwd.emplace_back(pack(first_of(p) + oA, second_of(p) + oB),
                                        pack(first_of(q) + oA2, second_of(q) + oB2));
                fb.finalize();
            }
    return H;
}

// Restriction to the elements selected by keep[v][x]; composites must stay inside.
inline BurnsideCubeFunctor restrict_functor(const BurnsideCubeFunctor& F,
                                            const std::vector<std::vector<char>>& keep,
                                            std::vector<std::vector<std::uint32_t>>* new_index = nullptr) {
    const int n = F.dim();
    BurnsideCubeFunctor H(n);
    std::vector<std::vector<std::uint32_t>> idx(F.vertex_count());
    if (!F.qgrading.empty()) H.qgrading.resize(F.vertex_count());
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
        idx[v].assign(F.size(v), UINT32_MAX);
        std::uint32_t c = 0;
        for (std::uint32_t x = 0; x < F.size(v); ++x)
            if (keep[v][x]) {
                idx[v][x] = c++;
                if (!F.qgrading.empty()) H.qgrading[v].push_back(F.qgrading[v][x]);
            }
        H.set_size(v, c);
    }
    // element renumbering per edge
    std::vector<std::vector<std::uint32_t>> eidx(F.vertex_count() * static_cast<std::size_t>(std::max(n, 1)));
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (int i = 0; i < n; ++i) {
            if (v & (1u << i)) continue;
            const auto& A = F.edge(v, i);
            auto& E = H.edge(v, i);
            auto& map = eidx[v * static_cast<std::size_t>(n) + i];
            map.assign(A.size(), UINT32_MAX);
            std::uint32_t u = v | (1u << i);
            for (std::uint32_t e = 0; e < A.size(); ++e)
                if (keep[u][A.s[e]] && keep[v][A.t[e]]) {
                    map[e] = static_cast<std::uint32_t>(E.size());
                    E.add(idx[u][A.s[e]], idx[v][A.t[e]]);
                }
        }
    H.index_edges();
    for (std::uint32_t w = 0; w < F.vertex_count(); ++w)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                const auto& mA = eidx[(w | (1u << j)) * static_cast<std::size_t>(n) + i];
                const auto& mB = eidx[w * static_cast<std::size_t>(n) + j];
                const auto& mA2 = eidx[(w | (1u << i)) * static_cast<std::size_t>(n) + j];
                const auto& mB2 = eidx[w * static_cast<std::size_t>(n) + i];
                auto& fb = H.face(w, i, j);
                for (auto [p, q] : F.face(w, i, j).fwd) {
                    auto a = mA[first_of(p)], b = mB[second_of(p)];
                    auto a2 = mA2[first_of(q)], b2 = mB2[second_of(q)];
                    bool in1 = a != UINT32_MAX && b != UINT32_MAX;
                    bool in2 = a2 != UINT32_MAX && b2 != UINT32_MAX;
                    if (in1 != in2) throw std::logic_error("restriction is not closed under face bijections");
                    if (in1) fb.fwd.emplace_back(pack(a, b), pack(a2, b2));
                }
                fb.finalize();
            }
    if (new_index) *new_index = std::move(idx);
    return H;
}

// ------------------------------------------------------------- natural isomorphism

struct IsoReport {
    bool ok = true;
    std::string witness;
};

// `phi[v][x]` maps F(v) into G(v). Edge elements are matched through their
// endpoints, which requires multiplicity-free edges in G.
inline IsoReport check_natural_isomorphism(const BurnsideCubeFunctor& F, const BurnsideCubeFunctor& G,
                                           const std::vector<std::vector<std::uint32_t>>& phi,
                                           bool check_grading = true) {
    IsoReport rep;
    auto fail = [&](std::string s) {
        rep.ok = false;
        rep.witness = std::move(s);
        return rep;
    };
    const int n = F.dim();
    if (G.dim() != n) return fail("dimension mismatch");
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
        if (F.size(v) != G.size(v)) return fail("vertex size mismatch at " + CubeVertex(v, n).str());
        std::vector<char> hit(G.size(v), 0);
        for (std::uint32_t x = 0; x < F.size(v); ++x) {
            auto y = phi[v][x];
            if (y >= G.size(v) || hit[y]) return fail("vertex map not bijective at " + CubeVertex(v, n).str());
            hit[y] = 1;
            if (check_grading && !F.qgrading.empty() && !G.qgrading.empty() &&
                F.qgrading[v][x] != G.qgrading[v][y])
                return fail("grading mismatch at " + CubeVertex(v, n).str());
        }
    }
    std::vector<std::vector<std::uint32_t>> psi(F.vertex_count() * static_cast<std::size_t>(std::max(n, 1)));
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (int i = 0; i < n; ++i) {
            if (v & (1u << i)) continue;
            std::uint32_t u = v | (1u << i);
            const auto& A = F.edge(v, i);
            const auto& B = G.edge(v, i);
            if (A.size() != B.size()) return fail("edge size mismatch at " + CubeVertex(v, n).str());
            std::unordered_map<std::uint64_t, std::uint32_t> where;
            for (std::uint32_t e = 0; e < B.size(); ++e)
                if (!where.emplace(pack(B.s[e], B.t[e]), e).second)
                    return fail("target functor has a repeated edge fiber");
            auto& map = psi[v * static_cast<std::size_t>(n) + i];
            map.resize(A.size());
            std::vector<char> hit(B.size(), 0);
            for (std::uint32_t e = 0; e < A.size(); ++e) {
                auto it = where.find(pack(phi[u][A.s[e]], phi[v][A.t[e]]));
                if (it == where.end() || hit[it->second])
                    return fail("edge correspondence not preserved at " + CubeVertex(v, n).str() + " coord " +
                                std::to_string(i));
                hit[it->second] = 1;
                map[e] = it->second;
            }
        }
    for (std::uint32_t w = 0; w < F.vertex_count(); ++w)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (w & ((1u << i) | (1u << j))) continue;
                const auto& mA = psi[(w | (1u << j)) * static_cast<std::size_t>(n) + i];
                const auto& mB = psi[w * static_cast<std::size_t>(n) + j];
                const auto& mA2 = psi[(w | (1u << i)) * static_cast<std::size_t>(n) + j];
                const auto& mB2 = psi[w * static_cast<std::size_t>(n) + i];
                for (auto [p, q] : F.face(w, i, j).fwd) {
                    auto img = G.swap_on_face(w, i, j, pack(mA[first_of(p)], mB[second_of(p)]));
                    if (!img || *img != pack(mA2[first_of(q)], mB2[second_of(q)]))
                        return fail("face bijection not preserved at " + CubeVertex(w, n).str() + " coords " +
                                    std::to_string(i) + "," + std::to_string(j));
                }
            }
    return rep;
}

// ------------------------------------------------------------- flow category shadow

// Number of elements of the composite correspondence from x in F(u) to y in F(v)
// along the maximal path removing coordinates in `order`.
inline std::size_t composite_fiber(const BurnsideCubeFunctor& F, std::uint32_t u, std::uint32_t x,
                                   std::uint32_t v, std::uint32_t y, const std::vector<int>& order) {
    std::map<std::uint32_t, std::size_t> cur{{x, 1}};
    std::uint32_t at = u;
    for (int c : order) {
        std::uint32_t lo = at & ~(1u << c);
        const auto& A = F.edge(lo, c);
        std::map<std::uint32_t, std::size_t> nxt;
        for (auto [g, cnt] : cur) {
            auto [b, e] = A.from(g);
            for (auto p = b; p != e; ++p) nxt[A.t[*p]] += cnt;
        }
        cur.swap(nxt);
        at = lo;
    }
    (void)v;
    auto it = cur.find(y);
    return it == cur.end() ? 0 : it->second;
}

struct FlowCensus {
    std::size_t components = 0;
    int dimension = 0;
};

inline FlowCensus flow_moduli_census(const BurnsideCubeFunctor& F, std::uint32_t u, std::uint32_t x,
                                     std::uint32_t v, std::uint32_t y) {
    if (!CubeVertex(u, F.dim()).gt(CubeVertex(v, F.dim())))
        throw std::invalid_argument("flow_moduli_census: need u > v");
    std::vector<int> order;
    for (int c = 0; c < F.dim(); ++c)
        if ((u & ~v) & (1u << c)) order.push_back(c);
    FlowCensus fc;
    fc.components = composite_fiber(F, u, x, v, y, order);
    fc.dimension = std::popcount(u) - std::popcount(v) - 1;
    return fc;
}

}  // namespace khoverture

#endif
