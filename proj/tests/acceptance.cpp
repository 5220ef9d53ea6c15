// One PASS/FAIL line per acceptance criterion, with wall time.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "khoverture/khoverture.hpp"
#include "support/oracles.hpp"

using namespace khoverture;

namespace {

LinkDiagram entry(const std::string& name) { return find_entry(builtin_corpus(), name)->diagram(); }

const Coefficients ZZ = Coefficients::integers();
const Coefficients QQ = Coefficients::rationals();
const Coefficients F2 = Coefficients::prime(2);
const Coefficients F3 = Coefficients::prime(3);

struct Outcome {
    bool ok = true;
    std::string note;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!note.empty()) note += "; ";
            note += what;
        }
    }
    void absorb(const VerifyReport& r, const std::string& where) {
        for (auto& c : r.checks) require(c.ok, where + ": " + c.name + (c.witness.empty() ? "" : " (" + c.witness + ")"));
    }
};

using Table = std::map<std::pair<int, int>, oracle::IntegerGroup>;

Table integral(const HomologyTable& T) {
    Table out;
    for (auto& [k, g] : T.groups) {
        oracle::IntegerGroup og{g.rank, {}};
        for (auto& t : g.torsion) og.torsion.push_back(static_cast<long>(t));
        out[k] = og;
    }
    return out;
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0) {
        std::ostringstream b;
        b << "took " << secs << " s, budget " << budget_s << " s";
        o.require(secs < budget_s, b.str());
    }
    if (!o.ok) ++failures;
    std::printf("%s %d: %s [%.3f s]%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs, o.note.empty() ? "" : " -- ",
                o.note.c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    auto corpus = builtin_corpus();

    criterion(1, "unknot homology and reduced homology", 0.001, [](Outcome& o) {
        auto d = entry("unknot");
        Table want{{{0, 1}, {1, {}}}, {{0, -1}, {1, {}}}};
        Table want_red{{{0, 0}, {1, {}}}};
        o.require(integral(kh_table(d, ZZ)) == want, "Kh(unknot)");
        o.require(integral(kh_table(d, ZZ, true)) == want_red, "reduced Kh(unknot)");
    });

    criterion(2, "right trefoil integral homology, torsion and Sq1 on the mirror", 1.0, [](Outcome& o) {
        auto d = entry("3_1");
        auto C = totalize(ResolutionCube(d)).complex;
        Table got = integral(homology(C, ZZ));
        Table brute = oracle::integer_homology(C);
        Table want{{{0, 1}, {1, {}}}, {{0, 3}, {1, {}}}, {{2, 5}, {1, {}}}, {{3, 7}, {0, {2}}}, {{3, 9}, {1, {}}}};
        o.require(got == want, "Kh(3_1;Z) table");
        o.require(brute == want, "dense invariant-factor oracle");
        auto sq = sq1_table(entry("m3_1"));
        std::size_t nonzero = 0;
        for (auto& b : sq.blocks)
            if (b.rank) {
                ++nonzero;
                o.require(b.h == -3, "Sq1 source degree " + std::to_string(b.h));
            }
        o.require(nonzero == 1, "Sq1 nonzero in " + std::to_string(nonzero) + " bidegrees");
        o.require(sq.square_zero, "Sq1 o Sq1 = 0");
    });

    criterion(3, "s-invariants of 3_1, m3_1, 4_1, 9_42", 10.0, [](Outcome& o) {
        auto check = [&](const char* name, const Coefficients& k, int want) {
            int s = s_invariant(entry(name), k).s;
            o.require(s == want, std::string("s(") + name + ";" + k.name() + ")=" + std::to_string(s));
        };
        check("3_1", F2, 2);
        check("3_1", QQ, 2);
        o.require(positive_braid_s(2, {1, 1, 1}) == 2, "positive braid formula");
        check("m3_1", F2, -2);
        check("m3_1", QQ, -2);
        check("4_1", F2, 0);
        check("4_1", QQ, 0);
        auto t0 = std::chrono::steady_clock::now();
        check("9_42", F2, 0);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs < 10.0, "9_42 took " + std::to_string(secs) + " s");
    });

    criterion(4, "Kunneth over F2, F3, Q for split unions, plus reduced", 120.0, [](Outcome& o) {
        auto t = entry("3_1"), f = entry("4_1"), u = entry("unknot");
        for (auto& k : {F2, F3, QQ}) {
            o.absorb(verify_kunneth(t, t, k), "3_1 u 3_1");
            o.absorb(verify_kunneth(t, f, k), "3_1 u 4_1");
            o.absorb(verify_kunneth(t, u, k), "3_1 u unknot");
            o.absorb(verify_kunneth(t, t, k, true), "reduced 3_1 u 3_1");
            o.absorb(verify_kunneth(t, f, k, true), "reduced 3_1 u 4_1");
            o.absorb(verify_kunneth(t, u, k, true), "reduced 3_1 u unknot");
        }
    });

    criterion(5, "connected sum: functor isomorphism, reduced Kunneth, s additivity", 300.0, [](Outcome& o) {
        auto t = entry("3_1"), m = entry("m3_1");
        auto r = verify_connect_sum({t, t, 1, 1}, F2);
        o.absorb(r, "3_1 # 3_1");
        o.require(r.checks.size() == 4, "expected four checks");
        o.require(connect_sum(t, 1, t, 1).crossing_count() == 6, "direct # diagram has 6 crossings");
        o.absorb(verify_connect_sum({t, m, 1, 1}, F2), "3_1 # m3_1");
        int s1 = s_invariant(connect_sum(t, 1, t, 1), F2).s;
        int s2 = s_invariant(connect_sum(t, 1, m, 1), F2).s;
        o.require(s1 == 4, "s(3_1#3_1)=" + std::to_string(s1));
        o.require(s2 == 0, "s(3_1#m3_1)=" + std::to_string(s2));
    });

    criterion(6, "derived cotensor at N=6 for (3_1, 3_1)", 600.0, [](Outcome& o) {
        auto R = verify_derived_cotensor({entry("3_1"), entry("3_1"), 1, 1}, 6);
        o.absorb(R.report, "cotensor");
        o.require(R.report.checks.size() == 3, "d^2, stability and window checks all ran");
        o.require(R.window_max >= 0, "window is nonempty");
        std::cout << "    window h <= " << R.window_max << ", " << R.generators << " generators\n";
    });

    criterion(7, "mirror symmetry over F2 and F3 on the corpus", 0, [&](Outcome& o) {
        for (auto& e : corpus)
            for (auto& k : {F2, F3}) o.absorb(verify_mirror(e.diagram(), k), e.name);
    });

    criterion(8, "coherence on the corpus and ladybug mutation", 0, [&](Outcome& o) {
        for (auto& e : corpus) {
            ResolutionCube cube(e.diagram());
            auto r = verify_coherence(build_khovanov_functor(cube).functor);
            o.require(r.ok(), e.name + ": " + (r.ok() ? "" : r.violations.front().what));
        }
        ResolutionCube lbu(entry("ladybug_unlink"));
        auto K = build_khovanov_functor(lbu);
        o.require(K.ladybug_faces > 0 && K.ladybug_fibers > 0, "ladybug unlink has ladybug faces");
        auto M = build_khovanov_functor(lbu, FaceId{0b0011, 2, 3});
        auto bad = verify_coherence(M.functor);
        o.require(bad.violation_count >= 1, "mutation produced no hexagon violation");
        std::cout << "    mutated face 1100 (2,3): " << bad.violation_count << " violations\n";
    });

    criterion(9, "Lee and Bar-Natan ranks, d^2 = 0 at (1,1)", 0, [&](Outcome& o) {
        for (auto& e : corpus) o.absorb(verify_deformations(e.diagram()), e.name);
    });

    criterion(10, "permutohedron census, cubical decomposition, flow category", 60.0, [](Outcome& o) {
        std::size_t fact = 1;
        for (int n = 2; n <= 6; ++n) {
            fact *= static_cast<std::size_t>(n);
            auto R = permutohedron_report(n);
            o.require(R.ok(), "report n=" + std::to_string(n));
            o.require(R.vertices == fact, "vertices n=" + std::to_string(n));
            o.require(R.facets == (std::size_t{1} << n) - 2, "facets n=" + std::to_string(n));
            o.require(R.cubes == fact, "cubes n=" + std::to_string(n));
            auto D = cubical_decomposition(n);
            o.require(gluings_consistent(D), "gluings n=" + std::to_string(n));
            o.require(D.census == interval_census(D.lattice), "interval census n=" + std::to_string(n));
        }
        auto A = check_flow_associativity(5, 4);
        o.require(A.ok, A.witness);
        o.require(A.triples > 0, "no triples checked");
        for (int k = 1; k <= 4; ++k) {
            auto M = cubical_model(CubeVertex((1u << k) - 1, 5), CubeVertex(0, 5));
            o.require(M.iso_ok, "cubical model k=" + std::to_string(k));
        }
        std::cout << "    associativity: " << A.triples << " triples, " << A.facet_checks << " facet checks\n";
    });

    criterion(11, "Burnside totalization equals the TQFT complex", 0, [&](Outcome& o) {
        for (auto& e : corpus) o.absorb(verify_cells(e.diagram()), e.name);
    });

    return failures == 0 ? 0 : 1;
}
