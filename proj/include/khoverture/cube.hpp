#ifndef KHOVERTURE_CUBE_HPP
#define KHOVERTURE_CUBE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace khoverture {

// Bit i of `bits` is cube coordinate i (coordinate 0 = crossing 0 = leftmost
// character of the string form).
struct CubeVertex {
    std::uint32_t bits = 0;
    int n = 0;

    CubeVertex() = default;
    CubeVertex(std::uint32_t b, int dim) : bits(b), n(dim) {}

    int weight() const { return std::popcount(bits); }
    bool operator[](int i) const { return (bits >> i) & 1u; }
    bool operator==(const CubeVertex&) const = default;

    // v >= w iff v contains w bitwise
    bool geq(const CubeVertex& w) const { return n == w.n && (bits & w.bits) == w.bits; }
    bool gt(const CubeVertex& w) const { return geq(w) && bits != w.bits; }

    std::string str() const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i)
            if ((*this)[i]) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    static CubeVertex parse(const std::string& s) {
        if (s.size() > 31) throw std::invalid_argument("cube vertex too long");
        CubeVertex v(0, static_cast<int>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') v.bits |= 1u << i;
            else if (s[i] != '0') throw std::invalid_argument("bad cube vertex '" + s + "'");
        }
        return v;
    }
};

inline constexpr int kMaxCubeDim = 24;

// Standard sign assignment: parity of the 1-bits of u before the flipped coordinate.
inline int edge_sign(std::uint32_t u, int coord) {
    return std::popcount(u & ((1u << coord) - 1u)) & 1;
}

class SignAssignment {
public:
    explicit SignAssignment(int n) : n_(n) {}
    int dim() const { return n_; }
    // edge from u down to u with `coord` cleared
    int operator()(std::uint32_t u, int coord) const { return edge_sign(u, coord); }

private:
    int n_;
};

inline SignAssignment standard_sign_assignment(int n) {
    if (n < 0) throw std::invalid_argument("negative cube dimension");
    return SignAssignment(n);
}

// every w with u >= w >= v, in lexicographic order of the string form
inline std::vector<CubeVertex> interval(const CubeVertex& u, const CubeVertex& v) {
    if (!u.geq(v)) throw std::invalid_argument("interval: u is not >= v");
    std::uint32_t free = u.bits & ~v.bits;
    std::vector<CubeVertex> out;
    std::uint32_t sub = free;
    while (true) {
        out.emplace_back(v.bits | sub, u.n);
        if (sub == 0) break;
        sub = (sub - 1) & free;
    }
    std::sort(out.begin(), out.end(),
              [](const CubeVertex& a, const CubeVertex& b) { return a.str() < b.str(); });
    return out;
}

}  // namespace khoverture

#endif
