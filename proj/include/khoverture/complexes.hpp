#ifndef KHOVERTURE_COMPLEXES_HPP
#define KHOVERTURE_COMPLEXES_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "khoverture/algebra.hpp"
#include "khoverture/burnside.hpp"
#include "khoverture/chain_complex.hpp"
#include "khoverture/cube.hpp"
#include "khoverture/resolution_cube.hpp"

namespace khoverture {

// Khovanov complex with its generator dictionary: generator g sits at
// vertex[g] and labels the circles of P(vertex[g]) by label[g].
struct KhovanovComplex {
    ChainComplex complex;
    std::vector<std::uint32_t> vertex;
    std::vector<Labeling> label;
    int q_shift = 0;  // extra shift applied on top of the standard grading (reduced: +1)
};

inline KhovanovComplex totalize(const ResolutionCube& cube, Specialization ht = {}) {
    KhovanovComplex K;
    ChainComplex& C = K.complex;
    C.ht = ht;
    for (std::uint32_t v = 0; v < cube.vertex_count(); ++v)
        for (Labeling y = 0; y < cube.generators(v); ++y) {
            C.add_generator(cube.gr_h(v), cube.gr_q(v, y));
            K.vertex.push_back(v);
            K.label.push_back(y);
        }
    SignAssignment s = standard_sign_assignment(cube.dim());
    for (std::uint32_t v = 0; v < cube.vertex_count(); ++v)
        for (int i = 0; i < cube.dim(); ++i) {
            if (v & (1u << i)) continue;
            std::uint32_t u = v | (1u << i);
            long sign = s(u, i) ? -1 : 1;
            EdgeMap em = cube.edge(v, i);
            for (Labeling y = 0; y < cube.generators(v); ++y) {
                auto src = static_cast<std::uint32_t>(cube.offset(v) + y);
                apply_edge(em, y, ht, [&](Labeling x, long c) {
                    C.add_entry(src, static_cast<std::uint32_t>(cube.offset(u) + x), sign * c);
                });
            }
        }
    C.normalize();
    return K;
}

// Signed totalization of a Burnside functor: d(y) = sum over edge elements with t = y.
inline ChainComplex totalize(const BurnsideCubeFunctor& F, const SignAssignment& s, int h_shift = 0) {
    ChainComplex C;
    std::vector<std::size_t> off(F.vertex_count() + 1, 0);
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v) off[v + 1] = off[v] + F.size(v);
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (std::uint32_t x = 0; x < F.size(v); ++x)
            C.add_generator(std::popcount(v) + h_shift, F.qgrading.empty() ? 0 : F.qgrading[v][x]);
    for (std::uint32_t v = 0; v < F.vertex_count(); ++v)
        for (int i = 0; i < F.dim(); ++i) {
            if (v & (1u << i)) continue;
            std::uint32_t u = v | (1u << i);
            long sign = s(u, i) ? -1 : 1;
            const auto& A = F.edge(v, i);
            for (std::size_t e = 0; e < A.size(); ++e)
                C.add_entry(static_cast<std::uint32_t>(off[v] + A.t[e]),
                            static_cast<std::uint32_t>(off[u] + A.s[e]), sign);
        }
    C.normalize();
    return C;
}

inline bool identical(const ChainComplex& a, const ChainComplex& b, std::string* why = nullptr) {
    if (a.size() != b.size()) {
        if (why) *why = "generator counts differ";
        return false;
    }
    for (std::size_t g = 0; g < a.size(); ++g) {
        if (a.h[g] != b.h[g] || a.q[g] != b.q[g]) {
            if (why) *why = "gradings differ at generator " + std::to_string(g);
            return false;
        }
        if (a.d[g] != b.d[g]) {
            if (why) *why = "differential differs at generator " + std::to_string(g);
            return false;
        }
    }
    return true;
}

inline int pointed_circle(const ResolutionCube& cube, std::uint32_t v) {
    const auto& d = cube.diagram();
    if (!d.basepoint) throw DiagramError("diagram has no basepoint");
    return cube.circle_of(v, *d.basepoint);
}

// Subcomplex on generators labeling the pointed circle x-, q shifted by +1.
inline KhovanovComplex reduced_complex(const ResolutionCube& cube, Specialization ht = {}) {
    if (!cube.diagram().basepoint) throw DiagramError("reduced complex needs a basepoint");
    if (ht.t != 0) throw std::invalid_argument("reduced complex needs t = 0");
    KhovanovComplex full = totalize(cube, ht);
    std::vector<std::uint32_t> idx(full.complex.size(), UINT32_MAX);
    KhovanovComplex R;
    R.q_shift = 1;
    R.complex.ht = ht;
    for (std::uint32_t g = 0; g < full.complex.size(); ++g) {
        int pc = pointed_circle(cube, full.vertex[g]);
        if (!((full.label[g] >> pc) & 1u)) continue;
        idx[g] = R.complex.add_generator(full.complex.h[g], full.complex.q[g] + 1);
        R.vertex.push_back(full.vertex[g]);
        R.label.push_back(full.label[g]);
    }
    for (std::uint32_t g = 0; g < full.complex.size(); ++g) {
        if (idx[g] == UINT32_MAX) continue;
        for (auto [r, c] : full.complex.d[g]) {
            if (idx[r] == UINT32_MAX) throw std::logic_error("reduced generators are not a subcomplex");
            R.complex.add_entry(idx[g], idx[r], c);
        }
    }
    R.complex.normalize();
    return R;
}

// Dual complex regraded (i,j) -> (-i,-j); labels swap x+ <-> x-.
inline KhovanovComplex mirror_complex(const KhovanovComplex& K, const ResolutionCube* cube = nullptr) {
    if (!(K.complex.ht == Specialization{})) throw std::invalid_argument("mirror_complex needs (h,t) = (0,0)");
    KhovanovComplex M;
    M.complex.ht = K.complex.ht;
    for (std::size_t g = 0; g < K.complex.size(); ++g) {
        M.complex.add_generator(-K.complex.h[g], -K.complex.q[g]);
        M.vertex.push_back(K.vertex.empty() ? 0 : K.vertex[g]);
        Labeling lab = K.label.empty() ? 0 : K.label[g];
        if (cube && !K.vertex.empty()) {
            int c = cube->circles(K.vertex[g]);
            lab = ~lab & ((Labeling{1} << c) - 1u);
        }
        M.label.push_back(lab);
    }
    M.complex.d = K.complex.transpose();
    M.complex.normalize();
    return M;
}

inline ChainComplex mirror_complex(const ChainComplex& C) {
    KhovanovComplex K;
    K.complex = C;
    return mirror_complex(K).complex;
}

// ---------------------------------------------------------------- KA1 action

// Psi kills x- pointed generators and relabels pointed x+ -> x-.
inline ChainMap ka1_action(const ResolutionCube& cube, const KhovanovComplex& K) {
    ChainMap f;
    f.source_size = f.target_size = K.complex.size();
    f.image.resize(K.complex.size());
    for (std::uint32_t g = 0; g < K.complex.size(); ++g) {
        std::uint32_t v = K.vertex[g];
        int pc = pointed_circle(cube, v);
        if ((K.label[g] >> pc) & 1u) continue;
        Labeling y = K.label[g] | (Labeling{1} << pc);
        f.image[g].emplace_back(static_cast<std::uint32_t>(cube.offset(v) + y), 1L);
    }
    return f;
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
    ChainMap h;
    h.source_size = f.source_size;
    h.target_size = g.target_size;
    h.image.resize(f.source_size);
    for (std::size_t j = 0; j < f.source_size; ++j) {
        for (auto [r, c] : f.image[j])
            for (auto [r2, c2] : g.image[r]) h.image[j].emplace_back(r2, c * c2);
        ChainComplex::normalize_column(h.image[j]);
    }
    return h;
}

// ---------------------------------------------------------------- split map

// Comultiplication on the sum circle of a # diagram, landing in the complex of
// the split union (d1 crossings first). `sum` must be connect_sum(d1,b1,d2,b2)
// and `split` must be disjoint_union(d1, d2) with the same labels.
struct SplitData {
    long b1 = 0;       // label of the arc through the sum region on the d1 side
    long b2 = 0;       // label of the d2 arc, already offset into the union
};

inline ChainMap split_map(const ResolutionCube& sum, const ResolutionCube& split, const SplitData& sd,
                          Specialization ht = {}) {
    const LinkDiagram& ds = sum.diagram();
    const LinkDiagram& du = split.diagram();
    if (ds.crossing_count() != du.crossing_count())
        throw DiagramError("split_map: crossing counts differ");
    int sb1 = ds.arc_index(sd.b1);
    int ub1 = du.arc_index(sd.b1), ub2 = du.arc_index(sd.b2);
    KhovanovComplex Ks = totalize(sum, ht);
    ChainMap f;
    f.source_size = Ks.complex.size();
    f.target_size = split.total_generators();
    f.image.resize(f.source_size);
    for (std::uint32_t v = 0; v < sum.vertex_count(); ++v) {
        const Resolution& rs = sum.at(v);
        const Resolution& ru = split.at(v);
        if (ru.circle_count() != rs.circle_count() + 1)
            throw DiagramError("split_map: # presentation mismatch at " + CubeVertex(v, ds.crossing_count()).str());
        int sigma = rs.arc_to_circle[sb1];
        int p1 = ru.arc_to_circle[ub1], p2 = ru.arc_to_circle[ub2];
        if (p1 == p2) throw DiagramError("split_map: basepoints on one circle of the split diagram");
        // other circles by arc identity
        std::vector<int> carry(rs.circle_count(), -1);
        for (int k = 0; k < rs.circle_count(); ++k) {
            if (k == sigma) continue;
            long lab = ds.labels[rs.circles[k].front().arc];
            carry[k] = ru.arc_to_circle[du.arc_index(lab)];
        }
        for (Labeling y = 0; y < sum.generators(v); ++y) {
            Labeling base = 0;
            for (int k = 0; k < rs.circle_count(); ++k)
                if (k != sigma && ((y >> k) & 1u)) base |= Labeling{1} << carry[k];
            auto& img = f.image[sum.offset(v) + y];
            auto put = [&](Labeling x, long c) {
                if (c) img.emplace_back(static_cast<std::uint32_t>(split.offset(v) + x), c);
            };
            Labeling b1m = Labeling{1} << p1, b2m = Labeling{1} << p2;
            if (!((y >> sigma) & 1u)) {
                put(base | b2m, 1);
                put(base | b1m, 1);
                put(base, -ht.h);
            } else {
                put(base | b1m | b2m, 1);
                put(base, ht.t);
            }
            ChainComplex::normalize_column(img);
        }
    }
    return f;
}

// ---------------------------------------------------------------- induced maps over F2

// Rank over F2 of the map induced on homology, degree by degree.
// `shift_q` is the q-degree of f (blocks (h,q) -> (h, q+shift_q)).
inline std::size_t induced_rank_f2(const ChainComplex& src, const ChainComplex& tgt, const ChainMap& f,
                                   std::size_t* source_dim = nullptr) {
    Blocks bs = make_blocks(src, false), bt = make_blocks(tgt, false);
    std::size_t total = 0, sdim = 0;
    for (auto& [key, mem] : bs.members) {
        auto [h, q] = key;
        IntColumns M = block_matrix(src, bs, h, q);
        std::vector<BitVec> cycles;
        if (M.rows == 0) {
            for (std::size_t j = 0; j < mem.size(); ++j) {
                BitVec v(mem.size());
                v.set(j);
                cycles.push_back(v);
            }
        } else {
            cycles = f2_kernel(M);
        }
        // source homology dimension
        F2Echelon Bs(mem.size());
        for (auto& col : block_matrix(src, bs, h - 1, q).cols) {
            BitVec v(mem.size());
            for (auto [r, c] : col)
                if (c & 1) v.flip(r);
            Bs.insert(v);
        }
        std::size_t bdim = Bs.rank();
        for (auto& z : cycles) Bs.insert(z);
        sdim += Bs.rank() - bdim;
        auto tm = bt.members.find({h, 0});
        std::size_t n = tm == bt.members.end() ? 0 : tm->second.size();
        F2Echelon Bt(n);
        for (auto& col : block_matrix(tgt, bt, h - 1, 0).cols) {
            BitVec v(n);
            for (auto [r, c] : col)
                if (c & 1) v.flip(r);
            Bt.insert(v);
        }
        std::size_t base = Bt.rank();
        for (auto& z : cycles) {
            BitVec w(n);
            for (std::size_t j = 0; j < mem.size(); ++j)
                if (z.get(j))
                    for (auto [r, c] : f.image[mem[j]])
                        if (c & 1) {
                            if (tgt.h[r] != h) throw std::logic_error("induced map: degree mismatch");
                            w.flip(bt.local[r]);
                        }
            Bt.insert(w);
        }
        total += Bt.rank() - base;
    }
    if (source_dim) *source_dim = sdim;
    return total;
}

// ---------------------------------------------------------------- derived cotensor

// A based complex: a Khovanov complex plus, per generator, the pointed-circle split
// data needed for the unknot coaction.
struct BasedComplex {
    ChainComplex complex;
    // coaction on the pointed circle at h=t=0: for pointed x+ generator g,
    // relabel[g] is the same generator with the pointed circle x-, else UINT32_MAX
    std::vector<std::uint32_t> to_minus;
    std::vector<char> pointed_minus;
};

inline BasedComplex based_complex(const ResolutionCube& cube) {
    KhovanovComplex K = totalize(cube);
    BasedComplex B;
    B.complex = K.complex;
    B.to_minus.assign(K.complex.size(), UINT32_MAX);
    B.pointed_minus.assign(K.complex.size(), 0);
    for (std::uint32_t g = 0; g < K.complex.size(); ++g) {
        int pc = pointed_circle(cube, K.vertex[g]);
        bool minus = (K.label[g] >> pc) & 1u;
        B.pointed_minus[g] = minus;
        if (!minus)
            B.to_minus[g] = static_cast<std::uint32_t>(cube.offset(K.vertex[g]) + (K.label[g] | (Labeling{1} << pc)));
    }
    return B;
}

struct DerivedCotensor {
    ChainComplex complex;
    int N = 0;
    int window_max = 0;  // homology trusted in degrees <= window_max
    std::vector<int> stage;
};

// Stages 1..N of C1 (x) A^(n-1) (x) C2, A = Kh(unknot) with x- as bit 1.
// The delta part at stage n carries an extra (-1)^(n-1) so that d^2 = 0.
inline DerivedCotensor derived_cotensor(const BasedComplex& B1, const BasedComplex& B2, int N) {
    if (N < 1) throw std::invalid_argument("derived_cotensor: N must be >= 1");
    const std::size_t n1 = B1.complex.size(), n2 = B2.complex.size();
    DerivedCotensor D;
    D.N = N;
    ChainComplex& C = D.complex;
    // index: stage n (1-based), x0, middle word m (n-1 bits), xn
    std::vector<std::size_t> stage_off(static_cast<std::size_t>(N) + 2, 0);
    for (int n = 1; n <= N; ++n)
        stage_off[n + 1] = stage_off[n] + n1 * n2 * (std::size_t{1} << (n - 1));
    if (stage_off[N + 1] > (std::size_t{1} << 31)) throw std::length_error("derived cotensor too large");
    auto index = [&](int n, std::size_t x0, std::size_t m, std::size_t xn) {
        std::size_t words = std::size_t{1} << (n - 1);
        return static_cast<std::uint32_t>(stage_off[n] + (x0 * words + m) * n2 + xn);
    };
    int minh = 1 << 30;
    for (int n = 1; n <= N; ++n)
        for (std::size_t x0 = 0; x0 < n1; ++x0)
            for (std::size_t m = 0; m < (std::size_t{1} << (n - 1)); ++m)
                for (std::size_t xn = 0; xn < n2; ++xn) {
                    int minus = std::popcount(m);
                    int qm = (n - 1 - minus) - minus;
                    int hh = B1.complex.h[x0] + B2.complex.h[xn] + (n - 1);
                    C.add_generator(hh, B1.complex.q[x0] + B2.complex.q[xn] + qm + (n - 1));
                    D.stage.push_back(n);
                    if (n == 1) minh = std::min(minh, hh);
                }
    for (int n = 1; n <= N; ++n) {
        long twist = (n - 1) % 2 ? -1 : 1;
        std::size_t words = std::size_t{1} << (n - 1);
        for (std::size_t x0 = 0; x0 < n1; ++x0)
            for (std::size_t m = 0; m < words; ++m)
                for (std::size_t xn = 0; xn < n2; ++xn) {
                    std::uint32_t g = index(n, x0, m, xn);
                    // delta part
                    for (auto [r, c] : B1.complex.d[x0]) C.add_entry(g, index(n, r, m, xn), twist * c);
                    long kos = (B1.complex.h[x0] % 2) ? -1 : 1;
                    for (auto [r, c] : B2.complex.d[xn]) C.add_entry(g, index(n, x0, m, r), twist * kos * c);
                    if (n == N) continue;
                    // S part: sum_i (-1)^(i+n) S_i, factor positions 0..n
                    // insert a new middle bit at position p (0..n-1) of the word
                    auto insert_bit = [&](std::size_t word, int p, bool bit) {
                        std::size_t low = word & ((std::size_t{1} << p) - 1);
                        std::size_t high = word >> p;
                        return low | (std::size_t(bit) << p) | (high << (p + 1));
                    };
                    for (int i = 0; i <= n; ++i) {
                        long sgn = ((i + n) % 2) ? -1 : 1;
                        if (i == 0) {
                            // split the unknot off the pointed circle of x0; new factor at word position 0
                            if (B1.pointed_minus[x0]) {
                                C.add_entry(g, index(n + 1, x0, insert_bit(m, 0, true), xn), sgn);
                            } else {
                                C.add_entry(g, index(n + 1, x0, insert_bit(m, 0, true), xn), sgn);
                                C.add_entry(g, index(n + 1, B1.to_minus[x0], insert_bit(m, 0, false), xn), sgn);
                            }
                        } else if (i == n) {
                            // new factor at the last word position (n-1)
                            if (B2.pointed_minus[xn]) {
                                C.add_entry(g, index(n + 1, x0, insert_bit(m, n - 1, true), xn), sgn);
                            } else {
                                C.add_entry(g, index(n + 1, x0, insert_bit(m, n - 1, true), xn), sgn);
                                C.add_entry(g, index(n + 1, x0, insert_bit(m, n - 1, false), B2.to_minus[xn]), sgn);
                            }
                        } else {
                            // comultiply the middle factor at word position i-1
                            int p = i - 1;
                            bool bit = (m >> p) & 1u;
                            std::size_t without = (m & ((std::size_t{1} << p) - 1)) | ((m >> (p + 1)) << p);
                            if (bit) {
                                C.add_entry(g, index(n + 1, x0, insert_bit(insert_bit(without, p, true), p, true), xn),
                                            sgn);
                            } else {
                                // x+ -> x+ (x) x- + x- (x) x+
                                C.add_entry(g,
                                            index(n + 1, x0, insert_bit(insert_bit(without, p, true), p, false), xn),
                                            sgn);
                                C.add_entry(g,
                                            index(n + 1, x0, insert_bit(insert_bit(without, p, false), p, true), xn),
                                            sgn);
                            }
                        }
                    }
                }
    }
    C.normalize();
    D.window_max = minh + N - 2;
    return D;
}

// ---------------------------------------------------------------- filtration

// q -> dim im(H_i(F_q) -> H_i) over a field, F_q = span of generators with gr_q >= q.
// Evaluated at every q where the function can change, plus one level above the top.
inline std::map<int, std::size_t> filtered_homology_image(const ChainComplex& C, int i, const Coefficients& k) {
    if (!k.is_field()) throw std::invalid_argument("filtered_homology_image needs a field");
    for (std::uint32_t g = 0; g < C.size(); ++g)
        for (auto [r, c] : C.d[g])
            if (C.q[r] < C.q[g]) throw std::logic_error("differential lowers the filtration");
    std::vector<std::uint32_t> Ci, Cim1;
    for (std::uint32_t g = 0; g < C.size(); ++g) {
        if (C.h[g] == i) Ci.push_back(g);
        if (C.h[g] == i - 1) Cim1.push_back(g);
    }
    std::vector<std::uint32_t> local(C.size(), UINT32_MAX);
    for (std::uint32_t k2 = 0; k2 < Ci.size(); ++k2) local[Ci[k2]] = k2;
    std::map<std::uint32_t, std::uint32_t> next_local;
    std::vector<std::uint32_t> loc_next(C.size(), UINT32_MAX);
    std::uint32_t cnt = 0;
    for (std::uint32_t g = 0; g < C.size(); ++g)
        if (C.h[g] == i + 1) loc_next[g] = cnt++;
    // d_i restricted to columns with q >= level
    auto rank_di = [&](int level) {
        IntColumns M;
        M.rows = cnt;
        for (auto g : Ci)
            if (C.q[g] >= level) {
                SparseColumn col;
                for (auto [r, c] : C.d[g]) col.emplace_back(loc_next[r], c);
                M.cols.push_back(std::move(col));
            }
        return rank_over(M, k);
    };
    // d_{i-1} with rows of q < level kept (all rows when level is +inf)
    auto rank_dim1 = [&](int level, bool all) {
        IntColumns M;
        M.rows = Ci.size();
        for (auto g : Cim1) {
            SparseColumn col;
            for (auto [r, c] : C.d[g])
                if (all || C.q[r] < level) col.emplace_back(local[r], c);
            M.cols.push_back(std::move(col));
        }
        return rank_over(M, k);
    };
    std::set<int> levels;
    for (auto g : Ci) levels.insert(C.q[g]);
    std::map<int, std::size_t> f;
    if (levels.empty()) return f;
    levels.insert(*levels.rbegin() + 1);
    std::size_t full_b = rank_dim1(0, true);
    for (int level : levels) {
        std::size_t fq = 0;
        for (auto g : Ci)
            if (C.q[g] >= level) ++fq;
        std::size_t val = fq - rank_di(level) - full_b + rank_dim1(level, false);
        f[level] = val;
    }
    return f;
}

inline std::size_t image_at(const std::map<int, std::size_t>& f, int q) {
    // f is a step function; value at q is the value at the least level >= q
    auto it = f.lower_bound(q);
    if (it == f.end()) return 0;
    return it->second;
}

}  // namespace khoverture

#endif
