#ifndef KHOVERTURE_RESOLUTION_CUBE_HPP
#define KHOVERTURE_RESOLUTION_CUBE_HPP

#include <bit>
#include <cstdint>
#include <vector>

#include "khoverture/diagram.hpp"

namespace khoverture {

// How the circles of P(v) map into P(u) for u = v + e_i.
struct EdgeMap {
    bool merge = false;
    int a = -1, b = -1;        // merge: the two circles of P(v); split: a is the circle of P(v)
    int m1 = -1, m2 = -1;      // merge: m1 the new circle; split: m1, m2 the two new circles
    std::vector<int> carry;    // untouched circle of P(v) -> circle of P(u), -1 for a/b
};

// Labelings are bit masks over circles: bit k set means circle k carries x-.
using Labeling = std::uint32_t;

struct Specialization {
    long h = 0;
    long t = 0;
    bool operator==(const Specialization&) const = default;
};

class ResolutionCube {
public:
    explicit ResolutionCube(LinkDiagram d) : diagram_(std::move(d)) {
        n_ = diagram_.crossing_count();
        std::uint32_t count = 1u << n_;
        res_.reserve(count);
        offset_.reserve(count + 1);
        std::size_t off = 0;
        for (std::uint32_t v = 0; v < count; ++v) {
            res_.push_back(resolve(diagram_, CubeVertex(v, n_)));
            if (res_.back().circle_count() > 30)
                throw DiagramError("too many circles in a resolution");
            offset_.push_back(off);
            off += std::size_t{1} << res_.back().circle_count();
        }
        offset_.push_back(off);
    }

    const LinkDiagram& diagram() const { return diagram_; }
    int dim() const { return n_; }
    std::uint32_t vertex_count() const { return 1u << n_; }
    const Resolution& at(std::uint32_t v) const { return res_[v]; }
    int circles(std::uint32_t v) const { return res_[v].circle_count(); }
    std::size_t generators(std::uint32_t v) const { return std::size_t{1} << circles(v); }
    std::size_t offset(std::uint32_t v) const { return offset_[v]; }
    std::size_t total_generators() const { return offset_.back(); }

    int gr_h(std::uint32_t v) const { return std::popcount(v) - diagram_.n_minus; }
    int gr_q(std::uint32_t v, Labeling x) const {
        int minus = std::popcount(x);
        int plus = circles(v) - minus;
        return std::popcount(v) + plus - minus + diagram_.n_plus - 2 * diagram_.n_minus;
    }

    // circle of P(v) containing the given arc
    int circle_of(std::uint32_t v, int arc) const { return res_[v].arc_to_circle[arc]; }

    EdgeMap edge(std::uint32_t v, int i) const {
        const Resolution& lo = res_[v];
        const Resolution& hi = res_[v | (1u << i)];
        const auto& x = diagram_.crossings[i];
        EdgeMap e;
        int c1 = lo.arc_to_circle[x[0]];
        int c2 = lo.arc_to_circle[x[2]];
        e.merge = c1 != c2;
        e.a = c1;
        e.b = e.merge ? c2 : -1;
        if (e.merge) {
            e.m1 = hi.arc_to_circle[x[0]];
        } else {
            e.m1 = hi.arc_to_circle[x[0]];
            e.m2 = hi.arc_to_circle[x[1]];
        }
        e.carry.assign(lo.circle_count(), -1);
        for (int k = 0; k < lo.circle_count(); ++k) {
            if (k == e.a || k == e.b) continue;
            e.carry[k] = hi.arc_to_circle[lo.circles[k].front().arc];
        }
        return e;
    }

private:
    LinkDiagram diagram_;
    int n_ = 0;
    std::vector<Resolution> res_;
    std::vector<std::size_t> offset_;
};

// Frobenius-algebra edge map on one labeling: emit(target labeling, coefficient).
template <class Emit>
void apply_edge(const EdgeMap& e, Labeling y, Specialization ht, Emit&& emit) {
    Labeling base = 0;
    for (std::size_t k = 0; k < e.carry.size(); ++k)
        if (e.carry[k] >= 0 && ((y >> k) & 1u)) base |= Labeling{1} << e.carry[k];
    const Labeling bm1 = Labeling{1} << e.m1;
    if (e.merge) {
        bool ma = (y >> e.a) & 1u, mb = (y >> e.b) & 1u;
        if (!ma && !mb) {
            emit(base, 1L);
        } else if (ma != mb) {
            emit(base | bm1, 1L);
        } else {
            if (ht.h) emit(base | bm1, ht.h);
            if (ht.t) emit(base, ht.t);
        }
    } else {
        const Labeling bm2 = Labeling{1} << e.m2;
        bool ma = (y >> e.a) & 1u;
        if (!ma) {
            emit(base | bm2, 1L);
            emit(base | bm1, 1L);
            if (ht.h) emit(base, -ht.h);
        } else {
            emit(base | bm1 | bm2, 1L);
            if (ht.t) emit(base, ht.t);
        }
    }
}

}  // namespace khoverture

#endif
