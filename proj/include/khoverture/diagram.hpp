#ifndef KHOVERTURE_DIAGRAM_HPP
#define KHOVERTURE_DIAGRAM_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "khoverture/cube.hpp"

namespace khoverture {

class DiagramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A place where an arc meets a crossing. Position 0..3 follows the PD tuple.
struct Slot {
    int crossing = -1;
    int pos = -1;
    bool operator==(const Slot&) const = default;
    bool operator<(const Slot& o) const {
        return crossing != o.crossing ? crossing < o.crossing : pos < o.pos;
    }
};

// Arcs are stored densely (0..arc_count-1) in increasing order of their labels.
class LinkDiagram {
public:
    std::vector<std::array<int, 4>> crossings;
    std::vector<long> labels;        // dense index -> PD label
    std::vector<int> free_loops;     // arcs of crossingless components
    std::vector<Slot> tail, head;    // orientation: arc runs tail -> head
    std::vector<int> signs;          // +1 / -1 per crossing
    std::vector<int> component;      // per arc
    int n_plus = 0, n_minus = 0;
    int component_count = 0;
    std::optional<int> basepoint;    // dense arc index

    int crossing_count() const { return static_cast<int>(crossings.size()); }
    int arc_count() const { return static_cast<int>(labels.size()); }
    int writhe() const { return n_plus - n_minus; }

    int arc_index(long label) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label)
            throw DiagramError("unknown arc label " + std::to_string(label));
        return static_cast<int>(it - labels.begin());
    }

    bool is_free_loop(int arc) const {
        return std::find(free_loops.begin(), free_loops.end(), arc) != free_loops.end();
    }

    // the two crossing slots of an arc (none for free loops)
    std::array<Slot, 2> slots(int arc) const { return {tail[arc], head[arc]}; }

    Slot other_end(int arc, const Slot& s) const { return tail[arc] == s ? head[arc] : tail[arc]; }

    int arc_at(const Slot& s) const { return crossings[s.crossing][s.pos]; }

    std::string pd_string() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& x : crossings) {
            if (!first) os << ' ';
            first = false;
            os << "X(" << labels[x[0]] << ',' << labels[x[1]] << ',' << labels[x[2]] << ','
               << labels[x[3]] << ')';
        }
        for (int a : free_loops) {
            if (!first) os << ' ';
            first = false;
            os << "O(" << labels[a] << ')';
        }
        if (basepoint) os << " base=" << labels[*basepoint];
        return os.str();
    }
};

namespace detail {

inline std::vector<long> parse_int_list(const std::string& body, const std::string& tok) {
    std::vector<long> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        try {
            std::size_t used = 0;
            long v = std::stol(cur, &used);
            if (used != cur.size()) throw std::invalid_argument(cur);
            out.push_back(v);
        } catch (const std::exception&) {
            throw DiagramError("malformed token '" + tok + "'");
        }
        cur.clear();
    };
    for (char ch : body) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) flush();
        else cur.push_back(ch);
    }
    flush();
    return out;
}

// straight-through partner at a crossing
inline int opposite(int pos) { return (pos + 2) & 3; }

}  // namespace detail

// Orientation, signs and components from raw tuples. Labels must already be dense.
inline void orient_diagram(LinkDiagram& d) {
    const int E = d.arc_count();
    std::vector<std::vector<Slot>> where(static_cast<std::size_t>(E));
    for (int c = 0; c < d.crossing_count(); ++c)
        for (int p = 0; p < 4; ++p) where[d.crossings[c][p]].push_back({c, p});
    for (int a = 0; a < E; ++a) {
        bool loop = d.is_free_loop(a);
        if (loop && !where[a].empty())
            throw DiagramError("arc " + std::to_string(d.labels[a]) +
                               " is both a crossingless component and a crossing arc");
        if (!loop && where[a].size() != 2)
            throw DiagramError("arc " + std::to_string(d.labels[a]) + " appears " +
                               std::to_string(where[a].size()) + " times (expected 2)");
    }
    d.tail.assign(E, Slot{});
    d.head.assign(E, Slot{});
    d.component.assign(E, -1);
    int comp = 0;
    for (int start = 0; start < E; ++start) {
        if (d.component[start] != -1) continue;
        if (d.is_free_loop(start)) {
            d.component[start] = comp++;
            continue;
        }
        // walk the component with `start` running where[start][0] -> where[start][1]
        std::vector<std::pair<int, Slot>> walk;  // (arc, head slot)
        Slot from = where[start][0];
        int arc = start;
        while (true) {
            Slot to = (where[arc][0] == from) ? where[arc][1] : where[arc][0];
            walk.emplace_back(arc, to);
            d.component[arc] = comp;
            Slot next{to.crossing, detail::opposite(to.pos)};
            int narc = d.arc_at(next);
            from = next;
            arc = narc;
            if (arc == start && from == where[start][0]) break;
            if (walk.size() > static_cast<std::size_t>(2 * E + 2))
                throw DiagramError("component walk did not close");
        }
        int forward = 0, backward = 0;
        for (auto& [a, h] : walk) {
            Slot t = (where[a][0] == h) ? where[a][1] : where[a][0];
            if (h.pos == 0 || t.pos == 2) ++forward;
            if (h.pos == 2 || t.pos == 0) ++backward;
        }
        if (forward && backward)
            throw DiagramError("inconsistent orientations on the component through arc " +
                               std::to_string(d.labels[start]));
        // over-only components keep the walk direction fixed by their least arc
        bool flip = backward > 0;
        for (auto& [a, h] : walk) {
            Slot t = (where[a][0] == h) ? where[a][1] : where[a][0];
            d.head[a] = flip ? t : h;
            d.tail[a] = flip ? h : t;
        }
        ++comp;
    }
    d.component_count = comp;
    d.signs.assign(d.crossings.size(), 0);
    d.n_plus = d.n_minus = 0;
    for (int c = 0; c < d.crossing_count(); ++c) {
        int over = d.crossings[c][1];
        bool enters_at_b = d.head[over] == Slot{c, 1};
        // over strand running d -> b is a positive crossing
        d.signs[c] = enters_at_b ? -1 : 1;
        (d.signs[c] > 0 ? d.n_plus : d.n_minus)++;
    }
}

inline LinkDiagram make_diagram(const std::vector<std::array<long, 4>>& xs,
                                const std::vector<long>& loops, std::optional<long> base) {
    std::vector<long> labels;
    for (const auto& x : xs) labels.insert(labels.end(), x.begin(), x.end());
    labels.insert(labels.end(), loops.begin(), loops.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    LinkDiagram d;
    d.labels = labels;
    for (const auto& x : xs) {
        std::array<int, 4> y{};
        for (int p = 0; p < 4; ++p) y[p] = d.arc_index(x[p]);
        d.crossings.push_back(y);
    }
    for (long l : loops) {
        int a = d.arc_index(l);
        if (d.is_free_loop(a)) throw DiagramError("duplicate O(" + std::to_string(l) + ")");
        d.free_loops.push_back(a);
    }
    if (d.crossing_count() > kMaxCubeDim)
        throw DiagramError("too many crossings for the cube (" + std::to_string(d.crossing_count()) + ")");
    orient_diagram(d);
    if (base) d.basepoint = d.arc_index(*base);
    return d;
}

// Accepts X(a,b,c,d) / X[a,b,c,d], O(id) and base=<arc>, separated by
// whitespace or commas. An optional PD[ ... ] wrapper is ignored.
inline LinkDiagram parse_pd(const std::string& text) {
    std::vector<std::array<long, 4>> xs;
    std::vector<long> loops;
    std::optional<long> base;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip = [&] {
        while (i < n && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
    };
    skip();
    if (text.compare(i, 3, "PD[") == 0 || text.compare(i, 3, "PD(") == 0) {
        i += 3;
        std::size_t close = text.find_last_of("])");
        if (close == std::string::npos || close < i) throw DiagramError("unterminated PD wrapper");
        return parse_pd(text.substr(i, close - i) + " " + text.substr(close + 1));
    }
    while (true) {
        skip();
        if (i >= n) break;
        if (text.compare(i, 5, "base=") == 0) {
            i += 5;
            std::size_t j = i;
            while (j < n && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') ++j;
            auto v = detail::parse_int_list(text.substr(i, j - i), "base=" + text.substr(i, j - i));
            if (v.size() != 1) throw DiagramError("malformed token 'base='");
            base = v[0];
            i = j;
            continue;
        }
        char kind = text[i];
        if ((kind != 'X' && kind != 'O') || i + 1 >= n || (text[i + 1] != '(' && text[i + 1] != '['))
            throw DiagramError("malformed token at offset " + std::to_string(i) + ": '" +
                               text.substr(i, 12) + "'");
        char close = text[i + 1] == '(' ? ')' : ']';
        std::size_t j = text.find(close, i + 2);
        if (j == std::string::npos) throw DiagramError("unterminated token at offset " + std::to_string(i));
        std::string tok = text.substr(i, j - i + 1);
        auto vals = detail::parse_int_list(text.substr(i + 2, j - i - 2), tok);
        if (kind == 'X') {
            if (vals.size() != 4) throw DiagramError("malformed token '" + tok + "'");
            xs.push_back({vals[0], vals[1], vals[2], vals[3]});
        } else {
            if (vals.size() != 1) throw DiagramError("malformed token '" + tok + "'");
            loops.push_back(vals[0]);
        }
        i = j + 1;
    }
    if (xs.empty() && loops.empty()) throw DiagramError("empty PD code");
    return make_diagram(xs, loops, base);
}

inline std::vector<std::array<long, 4>> raw_crossings(const LinkDiagram& d) {
    std::vector<std::array<long, 4>> xs;
    for (const auto& x : d.crossings)
        xs.push_back({d.labels[x[0]], d.labels[x[1]], d.labels[x[2]], d.labels[x[3]]});
    return xs;
}

inline std::vector<long> raw_loops(const LinkDiagram& d) {
    std::vector<long> out;
    for (int a : d.free_loops) out.push_back(d.labels[a]);
    return out;
}

inline std::optional<long> raw_base(const LinkDiagram& d) {
    if (!d.basepoint) return std::nullopt;
    return d.labels[*d.basepoint];
}

inline LinkDiagram with_basepoint(const LinkDiagram& d, std::optional<long> label) {
    LinkDiagram out = d;
    out.basepoint.reset();
    if (label) out.basepoint = out.arc_index(*label);
    return out;
}

// Reflection: every crossing changes. The new tuple starts at the new incoming under-strand.
inline LinkDiagram mirror(const LinkDiagram& d) {
    std::vector<std::array<long, 4>> xs;
    for (int c = 0; c < d.crossing_count(); ++c) {
        const auto& x = d.crossings[c];
        std::array<long, 4> r{d.labels[x[0]], d.labels[x[1]], d.labels[x[2]], d.labels[x[3]]};
        bool enters_at_b = d.head[x[1]] == Slot{c, 1};
        if (enters_at_b) xs.push_back({r[1], r[2], r[3], r[0]});
        else xs.push_back({r[3], r[0], r[1], r[2]});
    }
    return make_diagram(xs, raw_loops(d), raw_base(d));
}

inline long max_label(const LinkDiagram& d) {
    return d.labels.empty() ? 0 : d.labels.back();
}

// Split union: d2 relabeled past d1; d1 crossings come first. Basepoint of d1 kept.
inline LinkDiagram disjoint_union(const LinkDiagram& d1, const LinkDiagram& d2) {
    long off = max_label(d1);
    auto xs = raw_crossings(d1);
    for (auto x : raw_crossings(d2)) {
        for (auto& l : x) l += off;
        xs.push_back(x);
    }
    auto loops = raw_loops(d1);
    for (long l : raw_loops(d2)) loops.push_back(l + off);
    return make_diagram(xs, loops, raw_base(d1));
}

// Connected sum along arc b1 of d1 and arc b2 of d2 (d2 relabeled past d1).
// The result is based at b1, which lies on the sum circle together with b2's image.
inline LinkDiagram connect_sum(const LinkDiagram& d1, long b1_label, const LinkDiagram& d2,
                               long b2_label) {
    long off = max_label(d1);
    int b1 = d1.arc_index(b1_label);
    int b2 = d2.arc_index(b2_label);
    long B = off + max_label(d2) + 1;
    auto xs1 = raw_crossings(d1);
    auto xs2 = raw_crossings(d2);
    for (auto& x : xs2)
        for (auto& l : x) l += off;
    auto loops = raw_loops(d1);
    for (long l : raw_loops(d2)) loops.push_back(l + off);
    long lb1 = b1_label, lb2 = b2_label + off;
    bool loop1 = d1.is_free_loop(b1), loop2 = d2.is_free_loop(b2);
    if (loop1 && loop2) {
        loops.erase(std::find(loops.begin(), loops.end(), lb2));
    } else if (loop1) {
        // the free loop just disappears into b2
        loops.erase(std::find(loops.begin(), loops.end(), lb1));
        for (auto& x : xs2)
            for (auto& l : x)
                if (l == lb2) l = lb1;
    } else if (loop2) {
        loops.erase(std::find(loops.begin(), loops.end(), lb2));
    } else {
        Slot h1 = d1.head[b1];
        xs1[h1.crossing][h1.pos] = B;
        Slot h2 = d2.head[b2];
        xs2[h2.crossing][h2.pos] = lb1;
        Slot t2 = d2.tail[b2];
        xs2[t2.crossing][t2.pos] = B;
    }
    auto xs = xs1;
    xs.insert(xs.end(), xs2.begin(), xs2.end());
    return make_diagram(xs, loops, lb1);
}

// Closure of a braid word on `strands` strands; generator k>0 is sigma_k (positive), k<0 its inverse.
inline LinkDiagram braid_closure(int strands, const std::vector<int>& word) {
    if (strands < 1) throw DiagramError("braid needs at least one strand");
    std::vector<long> cur(static_cast<std::size_t>(strands));
    long next = 1;
    for (auto& c : cur) c = next++;
    std::vector<long> first = cur;
    std::vector<std::array<long, 4>> xs;
    for (int g : word) {
        int k = std::abs(g);
        if (k < 1 || k >= strands) throw DiagramError("braid generator out of range");
        long l = cur[k - 1], r = cur[k];
        long nl = next++, nr = next++;
        // strands run upward; sigma_k: left strand passes over to the right
        if (g > 0) xs.push_back({r, nr, nl, l});
        else xs.push_back({l, r, nr, nl});
        cur[k - 1] = nl;
        cur[k] = nr;
    }
    // close up: identify the final labels with the initial ones
    std::map<long, long> ren;
    for (int s = 0; s < strands; ++s) ren[cur[s]] = first[s];
    std::vector<long> loops;
    for (int s = 0; s < strands; ++s)
        if (cur[s] == first[s]) loops.push_back(first[s]);
    for (auto& x : xs)
        for (auto& l : x)
            if (auto it = ren.find(l); it != ren.end()) l = it->second;
    return make_diagram(xs, loops, std::nullopt);
}

// ---------------------------------------------------------------- resolutions

// One step of a circle: traverse `arc` into `crossing` at `in_pos`, follow the
// smoothing strand and leave at `out_pos`. Free loops have crossing == -1.
struct Pass {
    int arc = -1;
    int crossing = -1;
    int in_pos = -1;
    int out_pos = -1;
};

// smoothing partner of a corner; bit 0 joins (0,1),(2,3), bit 1 joins (0,3),(1,2)
inline int smoothing_partner(int pos, bool one) { return one ? 3 - pos : pos ^ 1; }

struct Resolution {
    CubeVertex vertex;
    std::vector<std::vector<Pass>> circles;
    std::vector<int> arc_to_circle;
    // slot (4*crossing+pos) -> (circle, index of the pass using that slot)
    std::vector<std::pair<int, int>> slot_pass;

    int circle_count() const { return static_cast<int>(circles.size()); }
};

inline Resolution resolve(const LinkDiagram& d, const CubeVertex& v) {
    if (v.n != d.crossing_count())
        throw DiagramError("vertex length " + std::to_string(v.n) + " does not match " +
                           std::to_string(d.crossing_count()) + " crossings");
    Resolution r;
    r.vertex = v;
    const int E = d.arc_count();
    r.arc_to_circle.assign(E, -1);
    r.slot_pass.assign(static_cast<std::size_t>(4 * d.crossing_count()), {-1, -1});
    for (int start = 0; start < E; ++start) {
        if (r.arc_to_circle[start] != -1) continue;
        int ci = r.circle_count();
        std::vector<Pass> circ;
        if (d.is_free_loop(start)) {
            circ.push_back({start, -1, -1, -1});
            r.arc_to_circle[start] = ci;
            r.circles.push_back(std::move(circ));
            continue;
        }
        int arc = start;
        Slot from = d.tail[start];
        do {
            r.arc_to_circle[arc] = ci;
            Slot to = d.other_end(arc, from);
            int out = smoothing_partner(to.pos, v[to.crossing]);
            int idx = static_cast<int>(circ.size());
            circ.push_back({arc, to.crossing, to.pos, out});
            r.slot_pass[4 * to.crossing + to.pos] = {ci, idx};
            r.slot_pass[4 * to.crossing + out] = {ci, idx};
            from = Slot{to.crossing, out};
            arc = d.arc_at(from);
        } while (!(arc == start && from == d.tail[start]));
        r.circles.push_back(std::move(circ));
    }
    return r;
}

// Independent check: union-find on the segment-gluing graph.
inline int circle_count_oracle(const LinkDiagram& d, const CubeVertex& v) {
    std::vector<int> parent(static_cast<std::size_t>(d.arc_count()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int c = 0; c < d.crossing_count(); ++c) {
        const auto& x = d.crossings[c];
        if (v[c]) {
            parent[find(x[0])] = find(x[3]);
            parent[find(x[1])] = find(x[2]);
        } else {
            parent[find(x[0])] = find(x[1]);
            parent[find(x[2])] = find(x[3]);
        }
    }
    int count = 0;
    for (int a = 0; a < d.arc_count(); ++a)
        if (find(a) == a) ++count;
    return count;
}

struct SurgeryEnd {
    int circle = -1;
    int position = -1;           // index of the pass in the circle
    std::array<int, 2> strand{}; // corner positions joined by this smoothing strand
};

struct SurgeryArc {
    int crossing = -1;
    std::array<SurgeryEnd, 2> ends;
    bool is_split() const { return ends[0].circle == ends[1].circle; }
};

inline SurgeryArc surgery_data(const LinkDiagram& d, const Resolution& r, int i) {
    if (i < 0 || i >= d.crossing_count()) throw DiagramError("crossing index out of range");
    if (r.vertex[i]) throw DiagramError("crossing " + std::to_string(i) + " is 1-resolved");
    SurgeryArc s;
    s.crossing = i;
    for (int k = 0; k < 2; ++k) {
        auto [c, p] = r.slot_pass[4 * i + 2 * k];
        s.ends[k] = {c, p, {2 * k, 2 * k + 1}};
    }
    return s;
}

inline SurgeryArc surgery_data(const LinkDiagram& d, const CubeVertex& v, int i) {
    return surgery_data(d, resolve(d, v), i);
}

// Ladybug data at a vertex w where crossings i and j are both 0-resolved and
// both surgery arcs sit on one circle with interleaved ends. `right_arcs` are
// representative arcs of the two pieces of the right pair.
struct Ladybug {
    int circle = -1;
    std::array<int, 2> right_arcs{-1, -1};
    std::array<int, 2> left_arcs{-1, -1};
};

namespace detail {

// piece index for each pass entry, given sorted special positions
inline int piece_of_entry(int entry, const std::array<int, 4>& special, int len) {
    // entry e's arc lies between pass e-1 and pass e
    int prev = (entry - 1 + len) % len;
    int piece = 3;
    for (int k = 0; k < 4; ++k)
        if (special[k] <= prev) piece = k;
    if (prev < special[0]) piece = 3;
    return piece;
}

// right piece next to one surgery end: corner 2 side on strand (2,3), corner 0 side on (0,1)
inline int right_entry(const Pass& ps, int idx, int len, int strand_low) {
    int corner = strand_low == 2 ? 2 : 0;
    return ps.out_pos == corner ? (idx + 1) % len : idx;
}

inline int left_entry(const Pass& ps, int idx, int len, int strand_low) {
    int corner = strand_low == 2 ? 2 : 0;
    return ps.out_pos == corner ? idx : (idx + 1) % len;
}

}  // namespace detail

inline std::optional<Ladybug> ladybug(const LinkDiagram& d, const Resolution& w, int i, int j) {
    SurgeryArc a = surgery_data(d, w, i);
    SurgeryArc b = surgery_data(d, w, j);
    int z = a.ends[0].circle;
    if (a.ends[1].circle != z || b.ends[0].circle != z || b.ends[1].circle != z) return std::nullopt;
    const auto& circ = w.circles[z];
    int len = static_cast<int>(circ.size());
    std::array<int, 4> special{a.ends[0].position, a.ends[1].position, b.ends[0].position,
                               b.ends[1].position};
    std::array<int, 4> sorted = special;
    std::sort(sorted.begin(), sorted.end());
    auto owner = [&](int pos) { return (pos == special[0] || pos == special[1]) ? 0 : 1; };
    bool interleaved = owner(sorted[0]) != owner(sorted[1]) && owner(sorted[1]) != owner(sorted[2]) &&
                       owner(sorted[2]) != owner(sorted[3]);
    if (!interleaved) return std::nullopt;
    Ladybug lb;
    lb.circle = z;
    std::array<int, 2> pieces{};
    for (int k = 0; k < 2; ++k) {
        const auto& e = a.ends[k];
        int r = detail::right_entry(circ[e.position], e.position, len, e.strand[0]);
        int l = detail::left_entry(circ[e.position], e.position, len, e.strand[0]);
        lb.right_arcs[k] = circ[r].arc;
        lb.left_arcs[k] = circ[l].arc;
        pieces[k] = detail::piece_of_entry(r, sorted, len);
    }
    if ((pieces[0] - pieces[1] + 4) % 4 != 2)
        throw DiagramError("right pair is not an opposite pair of pieces (non-planar input?)");
    return lb;
}

// The same right pair computed from the other surgery arc; used as a planarity sanity check.
inline std::array<int, 2> right_pieces_from(const LinkDiagram& d, const Resolution& w, int i, int j) {
    SurgeryArc a = surgery_data(d, w, i);
    SurgeryArc b = surgery_data(d, w, j);
    const auto& circ = w.circles[a.ends[0].circle];
    int len = static_cast<int>(circ.size());
    std::array<int, 4> sorted{a.ends[0].position, a.ends[1].position, b.ends[0].position,
                              b.ends[1].position};
    std::sort(sorted.begin(), sorted.end());
    std::array<int, 2> out{};
    for (int k = 0; k < 2; ++k) {
        const auto& e = a.ends[k];
        out[k] = detail::piece_of_entry(detail::right_entry(circ[e.position], e.position, len, e.strand[0]),
                                        sorted, len);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Faces of the 4-valent diagram graph; V - E + F = 2 per connected piece when planar.
inline bool is_planar(const LinkDiagram& d) {
    const int C = d.crossing_count();
    if (C == 0) return true;
    // darts: leaving slot (c,p) along its arc
    std::vector<char> seen(static_cast<std::size_t>(4 * C), 0);
    int faces = 0;
    for (int s = 0; s < 4 * C; ++s) {
        if (seen[s]) continue;
        ++faces;
        int cur = s;
        while (!seen[cur]) {
            seen[cur] = 1;
            Slot sl{cur / 4, cur % 4};
            int arc = d.arc_at(sl);
            Slot far = d.other_end(arc, sl);
            // turn to the next corner counterclockwise
            cur = 4 * far.crossing + ((far.pos + 1) & 3);
        }
    }
    // connected pieces of the crossing graph
    std::vector<int> parent(static_cast<std::size_t>(C));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int edges = 0;
    for (int a = 0; a < d.arc_count(); ++a) {
        if (d.is_free_loop(a)) continue;
        ++edges;
        parent[find(d.tail[a].crossing)] = find(d.head[a].crossing);
    }
    int pieces = 0;
    for (int c = 0; c < C; ++c)
        if (find(c) == c) ++pieces;
    return C - edges + faces == 2 * pieces;
}

}  // namespace khoverture

#endif
