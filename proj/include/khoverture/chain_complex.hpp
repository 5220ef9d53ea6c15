#ifndef KHOVERTURE_CHAIN_COMPLEX_HPP
#define KHOVERTURE_CHAIN_COMPLEX_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "khoverture/resolution_cube.hpp"

namespace khoverture {

using Entry = std::pair<std::uint32_t, long>;
using SparseColumn = std::vector<Entry>;  // sorted by row, no zeros

// Free bigraded complex with d of bidegree (1, *). Column j of `d` is d(e_j).
class ChainComplex {
public:
    std::vector<int> h, q;
    std::vector<SparseColumn> d;
    Specialization ht;

    std::size_t size() const { return h.size(); }

    std::uint32_t add_generator(int hd, int qd) {
        h.push_back(hd);
        q.push_back(qd);
        d.emplace_back();
        return static_cast<std::uint32_t>(h.size() - 1);
    }

    // accumulate coefficient of `row` in d(col); call normalize() afterwards
    void add_entry(std::uint32_t col, std::uint32_t row, long c) {
        if (c != 0) d[col].emplace_back(row, c);
    }

    void normalize() {
        for (auto& col : d) normalize_column(col);
    }

    static void normalize_column(SparseColumn& col) {
        std::sort(col.begin(), col.end());
        std::size_t out = 0;
        for (std::size_t k = 0; k < col.size();) {
            std::uint32_t r = col[k].first;
            long s = 0;
            while (k < col.size() && col[k].first == r) s += col[k++].second;
            if (s != 0) col[out++] = {r, s};
        }
        col.resize(out);
    }

    bool q_homogeneous() const {
        for (std::size_t j = 0; j < size(); ++j)
            for (auto [r, c] : d[j])
                if (q[r] != q[j]) return false;
        return true;
    }

    // first generator x with d(d(x)) != 0
    std::optional<std::uint32_t> d_squared_witness() const {
        std::map<std::uint32_t, long> acc;
        for (std::uint32_t j = 0; j < size(); ++j) {
            acc.clear();
            for (auto [r, c] : d[j])
                for (auto [r2, c2] : d[r]) acc[r2] += c * c2;
            for (auto& [r, v] : acc)
                if (v != 0) return j;
        }
        return std::nullopt;
    }

    void check_degrees() const {
        for (std::uint32_t j = 0; j < size(); ++j)
            for (auto [r, c] : d[j])
                if (h[r] != h[j] + 1)
                    throw std::logic_error("differential does not raise homological degree by one");
    }

    std::pair<int, int> h_range() const {
        if (h.empty()) return {0, -1};
        auto [lo, hi] = std::minmax_element(h.begin(), h.end());
        return {*lo, *hi};
    }

    // rows of the differential: transpose as columns
    std::vector<SparseColumn> transpose() const {
        std::vector<SparseColumn> t(size());
        for (std::uint32_t j = 0; j < size(); ++j)
            for (auto [r, c] : d[j]) t[r].emplace_back(j, c);
        return t;
    }

    void apply(const std::vector<long>& x, std::vector<long>& out) const {
        out.assign(size(), 0);
        for (std::uint32_t j = 0; j < size(); ++j)
            if (x[j])
                for (auto [r, c] : d[j]) out[r] += c * x[j];
    }
};

// A chain map given column-wise: image of each source generator in the target basis.
struct ChainMap {
    std::size_t source_size = 0, target_size = 0;
    std::vector<SparseColumn> image;
};

// returns the first source generator where f d != d f
inline std::optional<std::uint32_t> chain_map_witness(const ChainComplex& src, const ChainComplex& tgt,
                                                      const ChainMap& f, long sign = 1) {
    std::map<std::uint32_t, long> acc;
    for (std::uint32_t j = 0; j < src.size(); ++j) {
        acc.clear();
        for (auto [r, c] : src.d[j])
            for (auto [r2, c2] : f.image[r]) acc[r2] += c * c2;
        for (auto [r, c] : f.image[j])
            for (auto [r2, c2] : tgt.d[r]) acc[r2] -= sign * c * c2;
        for (auto& [r, v] : acc)
            if (v != 0) return j;
    }
    return std::nullopt;
}

}  // namespace khoverture

#endif
