#ifndef KHOVERTURE_INVARIANTS_HPP
#define KHOVERTURE_INVARIANTS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "khoverture/algebra.hpp"
#include "khoverture/burnside.hpp"
#include "khoverture/complexes.hpp"
#include "khoverture/diagram.hpp"
#include "khoverture/functor_ops.hpp"
#include "khoverture/resolution_cube.hpp"

namespace khoverture {

using DimTable = std::map<std::pair<int, int>, std::size_t>;

inline DimTable dims(const HomologyTable& T) {
    DimTable out;
    for (auto& [k, g] : T.groups)
        if (g.rank) out[k] = g.rank;
    return out;
}

inline DimTable convolve(const DimTable& a, const DimTable& b) {
    DimTable out;
    for (auto& [ka, da] : a)
        for (auto& [kb, db] : b) out[{ka.first + kb.first, ka.second + kb.second}] += da * db;
    return out;
}

inline DimTable negate(const DimTable& a) {
    DimTable out;
    for (auto& [k, d] : a) out[{-k.first, -k.second}] = d;
    return out;
}

inline std::string describe_difference(const DimTable& lhs, const DimTable& rhs) {
    std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> all;
    for (auto& [k, d] : lhs) all[k].first = d;
    for (auto& [k, d] : rhs) all[k].second = d;
    for (auto& [k, p] : all)
        if (p.first != p.second)
            return "(" + std::to_string(k.first) + "," + std::to_string(k.second) + "): " + std::to_string(p.first) +
                   " vs " + std::to_string(p.second);
    return {};
}

// ---------------------------------------------------------------- tables

inline HomologyTable kh_table(const LinkDiagram& d, const Coefficients& k, bool reduced = false, int jobs = 1) {
    ResolutionCube cube(d);
    if (reduced) return homology(reduced_complex(cube).complex, k, jobs);
    return homology(totalize(cube).complex, k, jobs);
}

inline Sq1Result sq1_table(const LinkDiagram& d) {
    ResolutionCube cube(d);
    return bockstein_sq1(totalize(cube).complex);
}

// ---------------------------------------------------------------- s-invariant

struct SInvariantResult {
    Coefficients field;
    int q_lo = 0, q_hi = 0;
    int s = 0;
    std::map<int, std::size_t> image;  // q -> dim im(H_0(F_q) -> H_0)
};

inline Specialization deformation_for(const Coefficients& field) {
    if (field.kind == Coefficients::Fp && field.p == 2) return {1, 0};
    if (field.kind == Coefficients::Q) return {0, 1};
    throw std::invalid_argument("s-invariant is defined over F2 (Bar-Natan) or Q (Lee)");
}

inline SInvariantResult s_invariant(const LinkDiagram& d, const Coefficients& field) {
    if (d.component_count != 1) throw DiagramError("s-invariant needs a knot");
    Specialization ht = deformation_for(field);
    ResolutionCube cube(d);
    KhovanovComplex K = totalize(cube, ht);
    SInvariantResult r;
    r.field = field;
    r.image = filtered_homology_image(K.complex, 0, field);
    bool have_lo = false, have_hi = false;
    for (auto& [q, dim] : r.image) {
        if (dim >= 2) {
            r.q_lo = q;
            have_lo = true;
        }
        if (dim >= 1) {
            r.q_hi = q;
            have_hi = true;
        }
    }
    if (!have_lo || !have_hi) throw std::logic_error("degree-0 deformed homology has dimension < 2");
    if (r.q_hi - r.q_lo != 2)
        throw std::logic_error("filtration jumps " + std::to_string(r.q_lo) + ", " + std::to_string(r.q_hi) +
                               " are not two apart");
    r.s = (r.q_lo + r.q_hi) / 2;
    return r;
}

// s of the closure of a positive braid knot: crossings - strands + 1.
inline int positive_braid_s(int strands, const std::vector<int>& word) {
    for (int g : word)
        if (g <= 0) throw std::invalid_argument("positive_braid_s: word has a negative generator");
    return static_cast<int>(word.size()) - strands + 1;
}

// ---------------------------------------------------------------- verifiers

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string witness;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool ok() const {
        for (auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
    void add(std::string name, bool ok, std::string witness = {}) {
        checks.push_back({std::move(name), ok, std::move(witness)});
    }
};

// dim Kh(L1 u L2) = Kh(L1) * Kh(L2); the reduced variant uses the basepoint of d1.
inline VerifyReport verify_kunneth(const LinkDiagram& d1, const LinkDiagram& d2, const Coefficients& k,
                                   bool reduced = false, int jobs = 1) {
    if (!k.is_field()) throw std::invalid_argument("verify_kunneth needs a field");
    VerifyReport rep;
    LinkDiagram du = disjoint_union(d1, d2);
    DimTable lhs = dims(kh_table(du, k, reduced, jobs));
    DimTable rhs = convolve(dims(kh_table(d1, k, reduced, jobs)), dims(kh_table(d2, k, false, jobs)));
    rep.add(std::string(reduced ? "reduced " : "") + "kunneth over " + k.name(), lhs == rhs,
            describe_difference(lhs, rhs));
    return rep;
}

struct ConnectSumInput {
    LinkDiagram d1, d2;
    long b1 = 0, b2 = 0;  // arc labels in d1 and in d2 (d2's own labels)
};

inline VerifyReport verify_connect_sum(const ConnectSumInput& in, const Coefficients& k, int jobs = 1,
                                       bool check_s = true) {
    if (!k.is_field()) throw std::invalid_argument("verify_connect_sum needs a field");
    VerifyReport rep;
    LinkDiagram d1 = with_basepoint(in.d1, in.b1);
    LinkDiagram d2 = with_basepoint(in.d2, in.b2);
    LinkDiagram dsum = connect_sum(in.d1, in.b1, in.d2, in.b2);
    long off = max_label(in.d1);
    LinkDiagram dsplit = disjoint_union(d1, in.d2);
    // (a) reduced Kunneth
    DimTable lhs = dims(kh_table(dsum, k, true, jobs));
    DimTable rhs = convolve(dims(kh_table(d1, k, true, jobs)), dims(kh_table(d2, k, true, jobs)));
    rep.add("reduced kunneth for # over " + k.name(), lhs == rhs, describe_difference(lhs, rhs));
    // (b) functor level
    ResolutionCube split(dsplit), sum(dsum);
    auto Fsplit = build_khovanov_functor(split, std::nullopt, jobs).functor;
    auto Fsum = build_khovanov_functor(sum, std::nullopt, jobs).functor;
    PointedPair pp{in.b1, in.b2 + off};
    ConnectSumFunctor Q = connect_sum_functor(Fsplit, split, pp);
    IsoReport iso = check_connect_sum_iso(Q, split, pp, Fsum, sum);
    rep.add("connect_sum_functor iso", iso.ok, iso.witness);
    auto coh = verify_coherence(Q.functor, jobs, 1);
    rep.add("quotient coherence", coh.ok(), coh.ok() ? "" : coh.violations.front().what);
    // (c) additivity of s over F2
    if (check_s && in.d1.component_count == 1 && in.d2.component_count == 1) {
        auto F2 = Coefficients::parse("F2");
        int s1 = s_invariant(in.d1, F2).s, s2 = s_invariant(in.d2, F2).s, s12 = s_invariant(dsum, F2).s;
        rep.add("s additive", s12 == s1 + s2,
                "s(#)=" + std::to_string(s12) + " s1=" + std::to_string(s1) + " s2=" + std::to_string(s2));
    }
    return rep;
}

// dim Kh^{i,j}(m(L)) = dim Kh^{-i,-j}(L) over F_p, computed two ways.
inline VerifyReport verify_mirror(const LinkDiagram& d, const Coefficients& k, int jobs = 1) {
    if (!k.is_field()) throw std::invalid_argument("verify_mirror needs a field");
    VerifyReport rep;
    ResolutionCube cube(d);
    KhovanovComplex K = totalize(cube);
    DimTable base = dims(homology(K.complex, k, jobs));
    DimTable from_diagram = dims(kh_table(mirror(d), k, false, jobs));
    DimTable from_dual = dims(homology(mirror_complex(K, &cube).complex, k, jobs));
    rep.add("mirror diagram over " + k.name(), from_diagram == negate(base),
            describe_difference(from_diagram, negate(base)));
    rep.add("dual complex over " + k.name(), from_dual == from_diagram, describe_difference(from_dual, from_diagram));
    return rep;
}

// Lee over Q and Bar-Natan over F2 have total dimension 2^components; d^2 = 0 at (1,1).
inline VerifyReport verify_deformations(const LinkDiagram& d, int jobs = 1) {
    VerifyReport rep;
    ResolutionCube cube(d);
    std::size_t expect = std::size_t{1} << d.component_count;
    auto lee = homology(totalize(cube, {0, 1}).complex, Coefficients::parse("Q"), jobs);
    auto bn = homology(totalize(cube, {1, 0}).complex, Coefficients::parse("F2"), jobs);
    rep.add("lee dimension", lee.total_rank() == expect,
            std::to_string(lee.total_rank()) + " vs " + std::to_string(expect));
    rep.add("bar-natan dimension", bn.total_rank() == expect,
            std::to_string(bn.total_rank()) + " vs " + std::to_string(expect));
    auto w = totalize(cube, {1, 1}).complex.d_squared_witness();
    rep.add("d^2 = 0 at (1,1)", !w, w ? "generator " + std::to_string(*w) : "");
    return rep;
}

// Burnside totalization equals the TQFT complex, signs included.
inline VerifyReport verify_cells(const LinkDiagram& d, int jobs = 1) {
    VerifyReport rep;
    ResolutionCube cube(d);
    auto F = build_khovanov_functor(cube, std::nullopt, jobs).functor;
    ChainComplex a = totalize(F, standard_sign_assignment(cube.dim()), -d.n_minus);
    ChainComplex b = totalize(cube).complex;
    std::string why;
    rep.add("burnside totalization = tqft complex", identical(a, b, &why), why);
    return rep;
}


// Truncated derived cotensor against the direct # diagram, over F2, in the trusted window.
// H^{i,j-1} of the cotensor complex matches Kh^{i,j}(K1 # K2); stage N+1 must agree in the window.
struct CotensorReport {
    VerifyReport report;
    int window_max = 0;
    std::size_t generators = 0;
};

inline DimTable window_dims(const DimTable& t, int hmax, int qshift = 0) {
    DimTable out;
    for (auto& [k, d] : t)
        if (k.first <= hmax) out[{k.first, k.second + qshift}] = d;
    return out;
}

inline CotensorReport verify_derived_cotensor(const ConnectSumInput& in, int N, int jobs = 1) {
    CotensorReport R;
    auto F2 = Coefficients::parse("F2");
    ResolutionCube c1(with_basepoint(in.d1, in.b1)), c2(with_basepoint(in.d2, in.b2));
    BasedComplex B1 = based_complex(c1), B2 = based_complex(c2);
    DerivedCotensor D = derived_cotensor(B1, B2, N);
    DerivedCotensor D1 = derived_cotensor(B1, B2, N + 1);
    R.window_max = D.window_max;
    R.generators = D.complex.size();
    auto w = D.complex.d_squared_witness();
    R.report.add("d^2 = 0 at N=" + std::to_string(N), !w, w ? "generator " + std::to_string(*w) : "");
    if (w) return R;
    DimTable got = window_dims(dims(homology(D.complex, F2, jobs)), D.window_max, 1);
    DimTable next = window_dims(dims(homology(D1.complex, F2, jobs)), D.window_max, 1);
    DimTable want = window_dims(dims(kh_table(connect_sum(in.d1, in.b1, in.d2, in.b2), F2, false, jobs)), D.window_max);
    R.report.add("stable from N to N+1", got == next, describe_difference(got, next));
    R.report.add("window homology = Kh(#) over F2 (h <= " + std::to_string(D.window_max) + ")", got == want,
                 describe_difference(got, want));
    return R;
}

}  // namespace khoverture

#endif
