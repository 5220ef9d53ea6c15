#ifndef KHOVERTURE_CLI_HPP
#define KHOVERTURE_CLI_HPP

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "khoverture/khoverture.hpp"

namespace khoverture::cli {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Target {
    std::string name;
    LinkDiagram diagram;
    const CorpusEntry* entry = nullptr;
};

struct Options {
    std::vector<std::string> knots;
    std::string pd_file;
    std::optional<long> base;
    std::string ring;  // empty: subcommand default
    std::string ht = "0,0";
    std::string field = "F2";
    bool json_out = false;
    int jobs = 1;
    bool reduced = false;
    std::string emit;
    bool check_coherence = false;
    std::string mutate;
    int n = 0;
    bool report = false;
    std::string what;
};

inline Specialization parse_ht(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("--ht expects a,b");
    try {
        return {std::stol(s.substr(0, comma)), std::stol(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("--ht expects integers a,b");
    }
}

inline Coefficients parse_ring(const std::string& s) {
    try {
        return Coefficients::parse(s);
    } catch (const std::exception&) {
        throw UsageError("unknown ring '" + s + "'");
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string to_string(const Integer& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

class Session {
public:
    Session(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {
        corpus_ = full_corpus();
    }

    std::vector<Target> targets() {
        std::vector<Target> ts;
        for (const auto& k : o_.knots) {
            if (k == "all") {
                for (const auto& e : corpus_) ts.push_back({e.name, e.diagram(), &e});
                continue;
            }
            const CorpusEntry* hit = nullptr;
            for (const auto& e : corpus_)
                if (e.name == k) hit = &e;
            if (!hit) throw UsageError("unknown knot '" + k + "'");
            ts.push_back({hit->name, hit->diagram(), hit});
        }
        if (!o_.pd_file.empty()) {
            std::string text = read_file(o_.pd_file);
            if (text.find('\t') != std::string::npos) {
                std::istringstream in(text);
                file_entries_ = parse_corpus(in, o_.pd_file);
                for (const auto& e : file_entries_) ts.push_back({e.name, e.diagram(), &e});
            } else {
                ts.push_back({o_.pd_file, parse_pd(text), nullptr});
            }
        }
        if (ts.empty()) throw UsageError("give --knot NAME or --pd FILE");
        if (o_.base)
            for (auto& t : ts) t.diagram = with_basepoint(t.diagram, *o_.base);
        return ts;
    }

    int kh(bool reduced) {
        Coefficients k = parse_ring(o_.ring.empty() ? "Z" : o_.ring);
        Specialization ht = parse_ht(o_.ht);
        json arr = json::array();
        int rc = 0;
        for (auto& t : targets()) {
            ResolutionCube cube(t.diagram);
            ChainComplex C = reduced ? reduced_complex(cube, ht).complex : totalize(cube, ht).complex;
            HomologyTable T = homology(C, k, o_.jobs);
            std::optional<std::string> expect;
            if (t.entry && !reduced && k.kind == Coefficients::Q && ht == Specialization{})
                if (auto it = t.entry->expected.find("kh"); it != t.entry->expected.end()) expect = it->second;
            bool ok = !expect || *expect == T.poincare();
            if (!ok) rc = 1;
            if (o_.json_out) {
                json groups = json::array();
                for (auto& [key, g] : T.groups) {
                    json tors = json::array();
                    for (auto& x : g.torsion) tors.push_back(to_string(x));
                    groups.push_back({{"h", key.first}, {"q", key.second}, {"rank", g.rank}, {"torsion", tors}});
                }
                arr.push_back({{"knot", t.name},
                               {"ring", k.name()},
                               {"ht", {ht.h, ht.t}},
                               {"reduced", reduced},
                               {"graded", T.graded},
                               {"poincare", T.poincare()},
                               {"groups", groups}});
                if (expect) arr.back()["expected"] = *expect;
            } else {
                out_ << t.name << " [" << k.name() << (reduced ? ", reduced" : "") << "]: " << T.poincare();
                if (expect) out_ << (ok ? "  matches corpus" : "  EXPECTED " + *expect);
                out_ << "\n";
                for (auto& [key, g] : T.groups) {
                    out_ << "  h=" << key.first;
                    if (T.graded) out_ << " q=" << key.second;
                    out_ << "  rank " << g.rank;
                    for (auto& x : g.torsion) out_ << " + Z/" << x;
                    out_ << "\n";
                }
            }
        }
        if (o_.json_out) out_ << arr.dump(2) << "\n";
        return rc;
    }

    int s() {
        std::vector<Coefficients> fields;
        if (o_.field == "both") fields = {parse_ring("F2"), parse_ring("Q")};
        else if (o_.field == "F2" || o_.field == "Q") fields = {parse_ring(o_.field)};
        else throw UsageError("--field must be F2, Q or both");
        int rc = 0;
        json arr = json::array();
        bool all = std::find(o_.knots.begin(), o_.knots.end(), "all") != o_.knots.end();
        for (auto& t : targets()) {
            if (all && t.diagram.component_count != 1) {
                if (!o_.json_out) out_ << t.name << " skipped (" << t.diagram.component_count << " components)\n";
                continue;
            }
            for (auto& f : fields) {
                SInvariantResult r = s_invariant(t.diagram, f);
                std::optional<int> expect;
                if (t.entry) expect = t.entry->expected_int(f.kind == Coefficients::Q ? "s_Q" : "s_F2");
                bool ok = !expect || *expect == r.s;
                if (!ok) rc = 1;
                if (o_.json_out) {
                    json j = {{"knot", t.name}, {"field", f.name()}, {"s", r.s}, {"q_lo", r.q_lo}, {"q_hi", r.q_hi}};
                    if (expect) j["expected"] = *expect;
                    arr.push_back(j);
                } else {
                    out_ << t.name << " " << f.name() << " s=" << r.s << " (q_lo=" << r.q_lo << ", q_hi=" << r.q_hi
                         << ")";
                    if (expect) out_ << (ok ? " matches " : " EXPECTED ") << *expect;
                    out_ << "\n";
                }
            }
        }
        if (o_.json_out) out_ << arr.dump(2) << "\n";
        return rc;
    }

    int sq1() {
        json arr = json::array();
        int rc = 0;
        for (auto& t : targets()) {
            Sq1Result r = sq1_table(t.diagram);
            if (!r.square_zero) rc = 1;
            json blocks = json::array();
            if (!o_.json_out) out_ << t.name << ": Sq1 o Sq1 " << (r.square_zero ? "= 0" : "!= 0") << "\n";
            for (auto& b : r.blocks) {
                if (!b.rank) continue;
                if (o_.json_out)
                    blocks.push_back({{"h", b.h}, {"q", b.q}, {"rank", b.rank}, {"src_dim", b.src_dim},
                                      {"tgt_dim", b.tgt_dim}});
                else
                    out_ << "  (" << b.h << "," << b.q << ") -> (" << b.h + 1 << "," << b.q << ")  rank " << b.rank
                         << "\n";
            }
            if (o_.json_out) arr.push_back({{"knot", t.name}, {"square_zero", r.square_zero}, {"nonzero", blocks}});
        }
        if (o_.json_out) out_ << arr.dump(2) << "\n";
        return rc;
    }

    // Schema: {"knot", "ht", "ring": "Z", "generators": [{"id", "vertex", "labels", "h", "q"}],
    //          "differential": [{"from", "to", "coeff"}]}, labels as a bit string over circles (1 = x-).
    static json emission(const std::string& name, const ResolutionCube& cube, const KhovanovComplex& K) {
        const ChainComplex& C = K.complex;
        json gens = json::array(), diff = json::array();
        for (std::uint32_t g = 0; g < C.size(); ++g) {
            std::string labels;
            for (int k = 0; k < cube.circles(K.vertex[g]); ++k) labels += ((K.label[g] >> k) & 1u) ? '1' : '0';
            gens.push_back({{"id", g},
                            {"vertex", CubeVertex(K.vertex[g], cube.dim()).str()},
                            {"labels", labels},
                            {"h", C.h[g]},
                            {"q", C.q[g]}});
            for (auto [r, c] : C.d[g]) diff.push_back({{"from", g}, {"to", r}, {"coeff", c}});
        }
        return {{"knot", name}, {"ht", {C.ht.h, C.ht.t}}, {"ring", "Z"}, {"generators", gens}, {"differential", diff}};
    }

    int complex() {
        Specialization ht = parse_ht(o_.ht);
        json arr = json::array(), emitted = json::array();
        for (auto& t : targets()) {
            ResolutionCube cube(t.diagram);
            KhovanovComplex K = o_.reduced ? reduced_complex(cube, ht) : totalize(cube, ht);
            const ChainComplex& C = K.complex;
            std::map<int, std::size_t> per_h;
            for (int h : C.h) ++per_h[h];
            std::size_t entries = 0;
            for (auto& col : C.d) entries += col.size();
            auto w = C.d_squared_witness();
            if (!o_.emit.empty()) emitted.push_back(emission(t.name, cube, K));
            if (o_.json_out) {
                json ph = json::object();
                for (auto& [h, c] : per_h) ph[std::to_string(h)] = c;
                arr.push_back({{"knot", t.name},
                               {"ht", {ht.h, ht.t}},
                               {"generators", C.size()},
                               {"entries", entries},
                               {"per_h", ph},
                               {"d_squared_zero", !w}});
            } else {
                std::ostream& os = o_.emit == "-" ? err_ : out_;
                os << t.name << ": " << C.size() << " generators, " << entries << " differential entries, d^2 "
                   << (w ? "!= 0" : "= 0") << "\n";
                for (auto& [h, c] : per_h) os << "  h=" << h << ": " << c << "\n";
            }
        }
        if (!o_.emit.empty()) {
            json doc = emitted.size() == 1 ? emitted.front() : emitted;
            if (o_.emit == "-") {
                out_ << doc.dump(2) << "\n";
            } else {
                std::ofstream f(o_.emit);
                if (!f) throw UsageError("cannot write " + o_.emit);
                f << doc.dump(2) << "\n";
            }
        }
        if (o_.json_out) (o_.emit == "-" ? err_ : out_) << arr.dump(2) << "\n";
        return 0;
    }

    std::optional<FaceId> mutation(const LinkDiagram& d) const {
        if (o_.mutate.empty()) return std::nullopt;
        // w,i,j with w a bit string (character k is coordinate k)
        std::istringstream ss(o_.mutate);
        std::string w, i, j;
        if (!std::getline(ss, w, ',') || !std::getline(ss, i, ',') || !std::getline(ss, j, ','))
            throw UsageError("--mutate expects BITS,i,j");
        if (static_cast<int>(w.size()) != d.crossing_count()) throw UsageError("--mutate: vertex length mismatch");
        FaceId f;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (w[k] != '0' && w[k] != '1') throw UsageError("--mutate: bad vertex");
            if (w[k] == '1') f.w |= 1u << k;
        }
        f.i = std::stoi(i);
        f.j = std::stoi(j);
        return f;
    }

    int functor() {
        json arr = json::array();
        int rc = 0;
        for (auto& t : targets()) {
            ResolutionCube cube(t.diagram);
            KhovanovFunctor K = build_khovanov_functor(cube, mutation(t.diagram), o_.jobs);
            const auto& F = K.functor;
            std::size_t elems = 0, edges = 0;
            for (std::uint32_t v = 0; v < F.vertex_count(); ++v) {
                elems += F.size(v);
                for (int i = 0; i < F.dim(); ++i)
                    if (!(v & (1u << i))) edges += F.edge(v, i).size();
            }
            json j = {{"knot", t.name},
                      {"dimension", F.dim()},
                      {"objects", elems},
                      {"edge_elements", edges},
                      {"ladybug_faces", K.ladybug_faces},
                      {"ladybug_fibers", K.ladybug_fibers}};
            if (!o_.json_out)
                out_ << t.name << ": dim " << F.dim() << ", " << elems << " objects, " << edges << " edge elements, "
                     << K.ladybug_faces << " ladybug faces (" << K.ladybug_fibers << " two-element fibers)\n";
            if (o_.check_coherence) {
                CoherenceReport r = verify_coherence(F, o_.jobs, 5);
                if (!r.ok()) rc = 1;
                json vs = json::array();
                for (auto& v : r.violations)
                    vs.push_back({{"bottom", CubeVertex(v.bottom, F.dim()).str()},
                                  {"coords", v.coords},
                                  {"start", v.start},
                                  {"what", v.what}});
                j["coherence"] = {{"faces", r.faces_checked},
                                  {"triples", r.triples_checked},
                                  {"violations", r.violation_count},
                                  {"witnesses", vs}};
                if (!o_.json_out) {
                    out_ << "  coherence: " << r.triples_checked << " hexagons, " << r.violation_count
                         << " violations\n";
                    for (auto& v : r.violations)
                        out_ << "    at " << CubeVertex(v.bottom, F.dim()).str() << " coords " << v.coords[0] << ","
                             << v.coords[1] << "," << v.coords[2] << ": " << v.what << "\n";
                }
            }
            arr.push_back(j);
        }
        if (o_.json_out) out_ << arr.dump(2) << "\n";
        return rc;
    }

    int permutohedron() {
        std::vector<int> ns;
        if (o_.n) {
            if (o_.n < 2 || o_.n > 6) throw UsageError("--n must be in 2..6");
            ns = {o_.n};
        } else {
            ns = {2, 3, 4, 5, 6};
        }
        int rc = 0;
        json arr = json::array();
        for (int n : ns) {
            PermutohedronReport R = permutohedron_report(n);
            if (!R.ok()) rc = 1;
            json j = {{"n", n},
                      {"f_vector", R.f_vector},
                      {"vertices", R.vertices},
                      {"facets", R.facets},
                      {"euler", R.euler},
                      {"ok", R.ok()}};
            if (o_.report) {
                j["partition_ok"] = R.partition_ok;
                j["splitting_ok"] = R.splitting_ok;
                j["cubes"] = R.cubes;
                j["gluings"] = R.gluings;
                j["cubes_ok"] = R.cubes_ok;
                j["census_ok"] = R.census_ok;
            }
            if (o_.json_out) {
                arr.push_back(j);
                continue;
            }
            out_ << "Pi^" << n - 1 << ": f-vector";
            for (auto f : R.f_vector) out_ << " " << f;
            out_ << ", " << R.vertices << " vertices, " << R.facets << " facets, euler " << R.euler << " : "
                 << (R.ok() ? "ok" : "FAIL") << "\n";
            if (o_.report)
                out_ << "  boundary partition " << (R.partition_ok ? "ok" : "FAIL") << ", facet products "
                     << (R.splitting_ok ? "ok" : "FAIL") << ", " << R.cubes << " cubes, " << R.gluings
                     << " interior gluings " << (R.cubes_ok ? "ok" : "FAIL") << ", cell census "
                     << (R.census_ok ? "ok" : "FAIL") << "\n";
        }
        if (o_.json_out) out_ << arr.dump(2) << "\n";
        return rc;
    }

    int verify() {
        std::vector<std::pair<std::string, VerifyReport>> reps;
        auto fields = [&](std::vector<std::string> dflt) {
            std::vector<Coefficients> fs;
            if (!o_.ring.empty()) dflt = {o_.ring};
            for (auto& r : dflt) {
                Coefficients k = parse_ring(r);
                if (!k.is_field()) throw UsageError("verify needs a field (F2, F3, Q)");
                fs.push_back(k);
            }
            return fs;
        };
        auto ts = targets();
        if (o_.what == "kunneth") {
            auto fs = fields({"F2"});
            bool all = std::find(o_.knots.begin(), o_.knots.end(), "all") != o_.knots.end();
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            if (all) {
                for (std::size_t a = 0; a < ts.size(); ++a)
                    for (std::size_t b = a; b < ts.size(); ++b)
                        if (ts[a].diagram.crossing_count() + ts[b].diagram.crossing_count() <= 12) pairs.push_back({a, b});
            } else {
                if (ts.size() != 2) throw UsageError("verify kunneth needs two knots (or --knot all)");
                pairs.push_back({0, 1});
            }
            for (auto [a, b] : pairs) {
                if (o_.reduced && !ts[a].diagram.basepoint) continue;
                for (auto& k : fs)
                    reps.push_back({ts[a].name + " u " + ts[b].name,
                                    verify_kunneth(ts[a].diagram, ts[b].diagram, k, o_.reduced, o_.jobs)});
            }
        } else if (o_.what == "connectsum") {
            if (ts.size() != 2) throw UsageError("verify connectsum needs two knots");
            for (auto& t : ts)
                if (!t.diagram.basepoint) throw UsageError(t.name + " has no basepoint (use --base)");
            auto label = [](const LinkDiagram& d) { return d.labels[static_cast<std::size_t>(*d.basepoint)]; };
            for (auto& k : fields({"F2"}))
                reps.push_back({ts[0].name + " # " + ts[1].name,
                                verify_connect_sum({ts[0].diagram, ts[1].diagram, label(ts[0].diagram),
                                                    label(ts[1].diagram)},
                                                   k, o_.jobs)});
        } else if (o_.what == "mirror") {
            auto fs = fields({"F2", "F3"});
            for (auto& t : ts)
                for (auto& k : fs) reps.push_back({t.name, verify_mirror(t.diagram, k, o_.jobs)});
        } else if (o_.what == "coherence") {
            for (auto& t : ts) {
                ResolutionCube cube(t.diagram);
                KhovanovFunctor K = build_khovanov_functor(cube, mutation(t.diagram), o_.jobs);
                CoherenceReport r = verify_coherence(K.functor, o_.jobs, 1);
                VerifyReport v;
                v.add("coherence (" + std::to_string(r.triples_checked) + " hexagons, " +
                          std::to_string(K.ladybug_faces) + " ladybug faces)",
                      r.ok(),
                      r.ok() ? "" : CubeVertex(r.violations.front().bottom, K.functor.dim()).str() + ": " +
                                        r.violations.front().what);
                reps.push_back({t.name, v});
            }
        } else if (o_.what == "deformation") {
            for (auto& t : ts) reps.push_back({t.name, verify_deformations(t.diagram, o_.jobs)});
        } else if (o_.what == "cells") {
            for (auto& t : ts) reps.push_back({t.name, verify_cells(t.diagram, o_.jobs)});
        } else {
            throw UsageError("unknown verification '" + o_.what + "'");
        }
        bool ok = true;
        json arr = json::array();
        for (auto& [name, r] : reps) {
            ok = ok && r.ok();
            json checks = json::array();
            for (auto& c : r.checks) {
                checks.push_back({{"check", c.name}, {"ok", c.ok}, {"witness", c.witness}});
                if (!o_.json_out)
                    out_ << (c.ok ? "PASS " : "FAIL ") << name << ": " << c.name
                         << (c.witness.empty() ? "" : " [" + c.witness + "]") << "\n";
            }
            arr.push_back({{"target", name}, {"ok", r.ok()}, {"checks", checks}});
        }
        if (o_.json_out) out_ << json({{"verify", o_.what}, {"ok", ok}, {"results", arr}}).dump(2) << "\n";
        return ok ? 0 : 1;
    }

private:
    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    std::vector<CorpusEntry> corpus_;
    std::vector<CorpusEntry> file_entries_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"Khovanov homology, Burnside functors and their structure"};
    app.name("khoverture");
    app.require_subcommand(1);

    auto common = [&](CLI::App* c) {
        c->add_option("--knot", o.knots, "corpus name (repeatable, or 'all')");
        c->add_option("--pd", o.pd_file, "file with a PD code or corpus records");
        c->add_option("--base", o.base, "basepoint arc label");
        c->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256));
        c->add_flag("--json", o.json_out, "machine-readable output");
    };

    auto* kh = app.add_subcommand("kh", "bigraded Khovanov homology");
    common(kh);
    kh->add_option("--ring", o.ring, "Z, Q, F2 or F3");
    kh->add_option("--ht", o.ht, "specialization h,t");
    auto* red = app.add_subcommand("reduced", "reduced Khovanov homology");
    common(red);
    red->add_option("--ring", o.ring, "Z, Q, F2 or F3");
    red->add_option("--ht", o.ht, "specialization h,t (t must be 0)");
    auto* s = app.add_subcommand("s", "s-invariant from the quantum filtration");
    common(s);
    s->add_option("--field", o.field, "F2, Q or both");
    auto* sq = app.add_subcommand("sq1", "Bockstein Sq1 ranks");
    common(sq);
    auto* cx = app.add_subcommand("complex", "totalized chain complex");
    common(cx);
    cx->add_option("--ht", o.ht, "specialization h,t");
    cx->add_option("--emit", o.emit, "write generators and differential as JSON to FILE (- for stdout)");
    cx->add_flag("--reduced", o.reduced, "reduced complex");
    auto* fn = app.add_subcommand("functor", "Khovanov Burnside functor");
    common(fn);
    fn->add_flag("--check-coherence", o.check_coherence, "verify hexagons on every 3-face");
    fn->add_option("--mutate", o.mutate, "swap the ladybug matching on face BITS,i,j");
    auto* pm = app.add_subcommand("permutohedron", "permutohedron and cube flow category census");
    pm->add_option("--n", o.n, "Pi^{n-1}");
    pm->add_flag("--report", o.report, "boundary partition, cubes and cell census");
    pm->add_flag("--json", o.json_out, "machine-readable output");
    auto* vf = app.add_subcommand("verify", "structural checks");
    common(vf);
    vf->add_option("what", o.what, "kunneth | connectsum | mirror | coherence | deformation | cells")
        ->required()
        ->check(CLI::IsMember({"kunneth", "connectsum", "mirror", "coherence", "deformation", "cells"}));
    vf->add_option("--ring", o.ring, "F2, F3 or Q (default depends on the check)");
    vf->add_flag("--reduced", o.reduced, "reduced Kunneth, basepoint on the first factor");
    vf->add_option("--mutate", o.mutate, "swap the ladybug matching on face BITS,i,j");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        Session S(o, out, err);
        if (*kh) return S.kh(false);
        if (*red) return S.kh(true);
        if (*s) return S.s();
        if (*sq) return S.sq1();
        if (*cx) return S.complex();
        if (*fn) return S.functor();
        if (*pm) return S.permutohedron();
        if (*vf) return S.verify();
    } catch (const UsageError& e) {
        err << "khoverture: " << e.what() << "\n";
        return 2;
    } catch (const DiagramError& e) {
        err << "khoverture: " << e.what() << "\n";
        return 2;
    } catch (const CorpusError& e) {
        err << "khoverture: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "khoverture: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace khoverture::cli

#endif
