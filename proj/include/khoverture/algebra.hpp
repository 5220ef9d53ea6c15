#ifndef KHOVERTURE_ALGEBRA_HPP
#define KHOVERTURE_ALGEBRA_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "khoverture/chain_complex.hpp"
#include "khoverture/parallel.hpp"

namespace khoverture {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------- coefficients

struct Coefficients {
    enum Kind { Z, Q, Fp } kind = Z;
    std::uint32_t p = 0;

    static Coefficients integers() { return {Z, 0}; }
    static Coefficients rationals() { return {Q, 0}; }
    static Coefficients prime(std::uint32_t p) {
        if (p < 2 || p > (1u << 31)) throw std::invalid_argument("prime out of range");
        for (std::uint32_t k = 2; k * k <= p; ++k)
            if (p % k == 0) throw std::invalid_argument(std::to_string(p) + " is not prime");
        return {Fp, p};
    }
    static Coefficients parse(const std::string& s) {
        if (s == "Z") return integers();
        if (s == "Q") return rationals();
        if (s.size() > 1 && s[0] == 'F') return prime(static_cast<std::uint32_t>(std::stoul(s.substr(1))));
        throw std::invalid_argument("unknown coefficient ring '" + s + "'");
    }
    bool is_field() const { return kind != Z; }
    std::string name() const {
        switch (kind) {
            case Z: return "Z";
            case Q: return "Q";
            default: return "F" + std::to_string(p);
        }
    }
    bool operator==(const Coefficients&) const = default;
};

struct IntegerOverflow : std::overflow_error {
    IntegerOverflow() : std::overflow_error("int64 overflow") {}
};

// ring policies for the eliminator
struct CheckedInt64 {
    using T = long long;
    static T from(long v) { return v; }
    static bool is_zero(T v) { return v == 0; }
    static bool is_unit(T v) { return v == 1 || v == -1; }
    static T inv(T v) { return v; }
    static T mul(T a, T b) {
        T r;
        if (__builtin_mul_overflow(a, b, &r)) throw IntegerOverflow();
        return r;
    }
    static T sub(T a, T b) {
        T r;
        if (__builtin_sub_overflow(a, b, &r)) throw IntegerOverflow();
        return r;
    }
    static double height(T v) { return static_cast<double>(v < 0 ? -v : v); }
};

struct BigInt {
    using T = Integer;
    static T from(long v) { return T(v); }
    static bool is_zero(const T& v) { return v.is_zero(); }
    static bool is_unit(const T& v) { return v == 1 || v == -1; }
    static T inv(const T& v) { return v; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static double height(const T& v) { return static_cast<double>(boost::multiprecision::msb(abs(v)) + 1); }
};

struct PrimeField {
    using T = std::uint32_t;
    std::uint32_t p = 2;
    T from(long v) const {
        long r = v % static_cast<long>(p);
        return static_cast<T>(r < 0 ? r + static_cast<long>(p) : r);
    }
    static bool is_zero(T v) { return v == 0; }
    static bool is_unit(T v) { return v != 0; }
    T mul(T a, T b) const { return static_cast<T>((std::uint64_t{a} * b) % p); }
    T sub(T a, T b) const { return a >= b ? a - b : static_cast<T>(a + (p - b)); }
    T inv(T a) const {
        // p prime: a^(p-2)
        std::uint64_t r = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return static_cast<T>(r);
    }
    static double height(T v) { return v == 1 ? 0.0 : 1.0; }
};

struct RationalField {
    using T = Rational;
    static T from(long v) { return T(v); }
    static bool is_zero(const T& v) { return v == 0; }
    static bool is_unit(const T& v) { return v != 0; }
    static T inv(const T& v) { return T(1) / v; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static double height(const T& v) {
        using boost::multiprecision::msb;
        Integer n = abs(numerator(v)), d = denominator(v);
        return static_cast<double>((n == 0 ? 0 : msb(n)) + msb(d));
    }
};

// Ring values are passed through a policy object so the prime field can carry p.
template <class R>
struct RingOps {
    R r;
    using T = typename R::T;
    T from(long v) const { return r.from(v); }
    bool is_zero(const T& v) const { return r.is_zero(v); }
    bool is_unit(const T& v) const { return r.is_unit(v); }
    T inv(const T& v) const { return r.inv(v); }
    T mul(const T& a, const T& b) const { return r.mul(a, b); }
    T sub(const T& a, const T& b) const { return r.sub(a, b); }
    double height(const T& v) const { return r.height(v); }
};

// ---------------------------------------------------------------- sparse matrices

// Integer matrix as (row, col, value) triples. No duplicates, no stored zeros.
struct SparseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::tuple<std::size_t, std::size_t, Integer>> entries;
    std::string ring = "Z";

    static SparseMatrix from_dense(const std::vector<std::vector<long>>& a) {
        SparseMatrix m;
        m.rows = a.size();
        m.cols = a.empty() ? 0 : a[0].size();
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j)
                if (a[i][j] != 0) m.entries.emplace_back(i, j, Integer(a[i][j]));
        return m;
    }

    void validate() const {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& [i, j, v] : entries) {
            if (i >= rows || j >= cols) throw std::invalid_argument("sparse entry out of range");
            if (v == 0) throw std::invalid_argument("stored zero in sparse matrix");
            if (!seen.emplace(i, j).second) throw std::invalid_argument("duplicate sparse entry");
        }
    }
};

using DenseMatrix = std::vector<std::vector<Integer>>;

inline DenseMatrix to_dense(const SparseMatrix& m) {
    DenseMatrix a(m.rows, std::vector<Integer>(m.cols));
    for (const auto& [i, j, v] : m.entries) a[i][j] = v;
    return a;
}

inline DenseMatrix identity_matrix(std::size_t n) {
    DenseMatrix a(n, std::vector<Integer>(n));
    for (std::size_t k = 0; k < n; ++k) a[k][k] = 1;
    return a;
}

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    DenseMatrix c(n, std::vector<Integer>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

inline Integer determinant(DenseMatrix a) {
    // fraction-free Bareiss
    std::size_t n = a.size();
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

struct SmithResult {
    DenseMatrix D, U, V;  // U * A * V = D
};

namespace detail {

// Dense Smith normal form; U and V tracked when the pointers are given.
inline void smith_dense(DenseMatrix& A, DenseMatrix* U, DenseMatrix* V) {
    const std::size_t n = A.size(), m = n ? A[0].size() : 0;
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        std::swap(A[a], A[b]);
        if (U) std::swap((*U)[a], (*U)[b]);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (auto& row : A) std::swap(row[a], row[b]);
        if (V)
            for (auto& row : *V) std::swap(row[a], row[b]);
    };
    auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {  // row dst -= f row src
        for (std::size_t j = 0; j < m; ++j)
            if (A[src][j] != 0) A[dst][j] -= f * A[src][j];
        if (U)
            for (std::size_t j = 0; j < n; ++j)
                if ((*U)[src][j] != 0) (*U)[dst][j] -= f * (*U)[src][j];
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {  // col dst -= f col src
        for (std::size_t i = 0; i < n; ++i)
            if (A[i][src] != 0) A[i][dst] -= f * A[i][src];
        if (V)
            for (std::size_t i = 0; i < m; ++i)
                if ((*V)[i][src] != 0) (*V)[i][dst] -= f * (*V)[i][src];
    };
    for (std::size_t t = 0; t < std::min(n, m); ++t) {
        // smallest nonzero magnitude in the trailing block
        while (true) {
            std::size_t bi = n, bj = m;
            Integer best;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < m; ++j)
                    if (A[i][j] != 0 && (bi == n || abs(A[i][j]) < best)) {
                        best = abs(A[i][j]);
                        bi = i;
                        bj = j;
                    }
            if (bi == n) return;
            if (bi != t) swap_rows(bi, t);
            if (bj != t) swap_cols(bj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i)
                if (A[i][t] != 0) {
                    Integer f = A[i][t] / A[t][t];
                    row_axpy(i, t, f);
                    if (A[i][t] != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < m; ++j)
                if (A[t][j] != 0) {
                    Integer f = A[t][j] / A[t][t];
                    col_axpy(j, t, f);
                    if (A[t][j] != 0) clean = false;
                }
            if (!clean) continue;
            // divisibility of the rest
            std::size_t bad = n;
            for (std::size_t i = t + 1; i < n && bad == n; ++i)
                for (std::size_t j = t + 1; j < m; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == n) break;
            row_axpy(t, bad, Integer(-1));
        }
        if (A[t][t] < 0) {
            for (auto& x : A[t]) x = -x;
            if (U)
                for (auto& x : (*U)[t]) x = -x;
        }
    }
}

}  // namespace detail

inline SmithResult smith_normal_form(const SparseMatrix& M) {
    M.validate();
    SmithResult r;
    r.D = to_dense(M);
    r.U = identity_matrix(M.rows);
    r.V = identity_matrix(M.cols);
    detail::smith_dense(r.D, &r.U, &r.V);
    return r;
}

inline std::vector<Integer> smith_diagonal(const SmithResult& r) {
    std::vector<Integer> out;
    for (std::size_t k = 0; k < std::min(r.D.size(), r.D.empty() ? 0 : r.D[0].size()); ++k)
        if (r.D[k][k] != 0) out.push_back(r.D[k][k]);
    return out;
}

// ---------------------------------------------------------------- sparse elimination

template <class R>
class Eliminator {
public:
    using T = typename R::T;

    Eliminator(R ring, std::size_t nrows, std::size_t ncols) : R_(ring), rows_(nrows), cols_(ncols) {}

    void set_row(std::size_t r, std::vector<std::pair<std::uint32_t, T>> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        rows_[r] = std::move(entries);
        for (auto& [c, v] : rows_[r]) cols_[c].push_back(static_cast<std::uint32_t>(r));
    }

    // Eliminates pivots that are units of the ring. Returns the number eliminated.
    // Pivot choice: shortest row first, then the unit entry with the shortest
    // column, then the smaller height.
    std::size_t eliminate_units() {
        std::set<std::pair<std::size_t, std::uint32_t>> queue;  // (length, row)
        std::vector<char> dead_row(rows_.size(), 0), dead_col(cols_.size(), 0);
        std::vector<char> stuck(rows_.size(), 0);
        for (std::uint32_t r = 0; r < rows_.size(); ++r)
            if (!rows_[r].empty()) queue.emplace(rows_[r].size(), r);
        std::size_t rank = 0;
        std::vector<std::pair<std::uint32_t, T>> scratch;
        while (!queue.empty()) {
            auto [len, p] = *queue.begin();
            queue.erase(queue.begin());
            auto& prow = rows_[p];
            std::size_t best = prow.size();
            std::size_t best_cost = 0;
            double best_h = 0;
            for (std::size_t k = 0; k < prow.size(); ++k) {
                if (!R_.is_unit(prow[k].second)) continue;
                std::size_t cost = cols_[prow[k].first].size();
                double hh = R_.height(prow[k].second);
                if (best == prow.size() || cost < best_cost || (cost == best_cost && hh < best_h)) {
                    best = k;
                    best_cost = cost;
                    best_h = hh;
                }
            }
            if (best == prow.size()) {
                stuck[p] = 1;
                continue;
            }
            std::uint32_t c = prow[best].first;
            T uinv = R_.inv(prow[best].second);
            ++rank;
            dead_row[p] = 1;
            dead_col[c] = 1;
            auto targets = cols_[c];
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            for (std::uint32_t r : targets) {
                if (r == p || dead_row[r]) continue;
                auto& row = rows_[r];
                auto it = std::lower_bound(row.begin(), row.end(), c,
                                           [](const auto& e, std::uint32_t key) { return e.first < key; });
                if (it == row.end() || it->first != c) continue;  // stale
                T f = R_.mul(it->second, uinv);
                if (!stuck[r]) queue.erase({row.size(), r});
                stuck[r] = 0;
                scratch.clear();
                std::size_t a = 0, b = 0;
                while (a < row.size() || b < prow.size()) {
                    if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
                        scratch.push_back(std::move(row[a++]));
                    } else if (a == row.size() || prow[b].first < row[a].first) {
                        T v = R_.sub(R_.from(0), R_.mul(f, prow[b].second));
                        cols_[prow[b].first].push_back(r);
                        scratch.emplace_back(prow[b].first, std::move(v));
                        ++b;
                    } else {
                        T v = R_.sub(row[a].second, R_.mul(f, prow[b].second));
                        if (!R_.is_zero(v)) scratch.emplace_back(row[a].first, std::move(v));
                        ++a;
                        ++b;
                    }
                }
                row.swap(scratch);
                if (!row.empty()) queue.emplace(row.size(), r);
            }
            prow.clear();
            cols_[c].clear();
            if ((rank & 1023) == 0) compact(dead_row);
        }
        stuck_.clear();
        for (std::uint32_t r = 0; r < rows_.size(); ++r)
            if (stuck[r] && !dead_row[r] && !rows_[r].empty()) stuck_.push_back(r);
        return rank;
    }

    // rows that still carry entries after unit elimination
    const std::vector<std::uint32_t>& residual_rows() const { return stuck_; }
    const std::vector<std::pair<std::uint32_t, T>>& row(std::size_t r) const { return rows_[r]; }

private:
    void compact(const std::vector<char>& dead_row) {
        for (std::uint32_t c = 0; c < cols_.size(); ++c) {
            auto& col = cols_[c];
            std::sort(col.begin(), col.end());
            col.erase(std::unique(col.begin(), col.end()), col.end());
            col.erase(std::remove_if(col.begin(), col.end(),
                                     [&](std::uint32_t r) {
                                         if (dead_row[r]) return true;
                                         const auto& row = rows_[r];
                                         auto it = std::lower_bound(row.begin(), row.end(), c,
                                                                    [](const auto& e, std::uint32_t k) {
                                                                        return e.first < k;
                                                                    });
                                         return it == row.end() || it->first != c;
                                     }),
                      col.end());
        }
    }

    RingOps<R> R_;
    std::vector<std::vector<std::pair<std::uint32_t, T>>> rows_;
    std::vector<std::vector<std::uint32_t>> cols_;
    std::vector<std::uint32_t> stuck_;
};

// A matrix given as columns of (row, value) pairs with integer values.
struct IntColumns {
    std::size_t rows = 0;
    std::vector<SparseColumn> cols;
};

namespace detail {

template <class R>
std::size_t field_rank(const IntColumns& M, R ring) {
    RingOps<R> ops{ring};
    Eliminator<R> el(ring, M.rows, M.cols.size());
    std::vector<std::vector<std::pair<std::uint32_t, typename R::T>>> rows(M.rows);
    for (std::uint32_t j = 0; j < M.cols.size(); ++j)
        for (auto [r, v] : M.cols[j]) {
            auto x = ops.from(v);
            if (!ops.is_zero(x)) rows[r].emplace_back(j, x);
        }
    for (std::size_t r = 0; r < M.rows; ++r)
        if (!rows[r].empty()) el.set_row(r, std::move(rows[r]));
    std::size_t rk = el.eliminate_units();
    if (!el.residual_rows().empty()) throw std::logic_error("field elimination left residual rows");
    return rk;
}

template <class R>
std::vector<Integer> integer_invariants(const IntColumns& M) {
    R ring{};
    RingOps<R> ops{ring};
    Eliminator<R> el(ring, M.rows, M.cols.size());
    std::vector<std::vector<std::pair<std::uint32_t, typename R::T>>> rows(M.rows);
    for (std::uint32_t j = 0; j < M.cols.size(); ++j)
        for (auto [r, v] : M.cols[j])
            if (v != 0) rows[r].emplace_back(j, ops.from(v));
    for (std::size_t r = 0; r < M.rows; ++r)
        if (!rows[r].empty()) el.set_row(r, std::move(rows[r]));
    std::size_t units = el.eliminate_units();
    std::vector<Integer> inv(units, Integer(1));
    const auto& rest = el.residual_rows();
    if (!rest.empty()) {
        std::map<std::uint32_t, std::size_t> colmap;
        for (auto r : rest)
            for (auto& [c, v] : el.row(r)) colmap.emplace(c, 0);
        std::size_t k = 0;
        for (auto& [c, idx] : colmap) idx = k++;
        DenseMatrix A(rest.size(), std::vector<Integer>(colmap.size()));
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (auto& [c, v] : el.row(rest[i])) A[i][colmap[c]] = Integer(v);
        smith_dense(A, nullptr, nullptr);
        for (std::size_t t = 0; t < std::min(A.size(), colmap.size()); ++t)
            if (A[t][t] != 0) inv.push_back(A[t][t]);
    }
    return inv;
}

}  // namespace detail

// Nonzero invariant factors (with the 1s), d1 | d2 | ...
inline std::vector<Integer> smith_invariants(const IntColumns& M) {
    try {
        return detail::integer_invariants<CheckedInt64>(M);
    } catch (const IntegerOverflow&) {
        return detail::integer_invariants<BigInt>(M);
    }
}

inline std::size_t rank_over(const IntColumns& M, const Coefficients& k) {
    switch (k.kind) {
        case Coefficients::Fp: return detail::field_rank(M, PrimeField{k.p});
        case Coefficients::Q: return detail::field_rank(M, RationalField{});
        default: return smith_invariants(M).size();
    }
}

inline IntColumns to_columns(const SparseMatrix& m) {
    IntColumns c;
    c.rows = m.rows;
    c.cols.resize(m.cols);
    for (const auto& [i, j, v] : m.entries) {
        if (v > std::numeric_limits<long>::max() || v < std::numeric_limits<long>::min())
            throw std::overflow_error("entry too large for column form");
        c.cols[j].emplace_back(static_cast<std::uint32_t>(i), static_cast<long>(v));
    }
    for (auto& col : c.cols) std::sort(col.begin(), col.end());
    return c;
}

// ---------------------------------------------------------------- homology

struct HomologyGroup {
    std::size_t rank = 0;               // free rank, or dimension over a field
    std::vector<Integer> torsion;       // orders >= 2, each dividing the next
    bool zero() const { return rank == 0 && torsion.empty(); }
    bool operator==(const HomologyGroup&) const = default;
};

struct HomologyTable {
    Coefficients ring;
    bool graded = true;                                  // false: key q is always 0
    std::map<std::pair<int, int>, HomologyGroup> groups; // (h, q) -> group, nonzero only

    std::size_t total_rank() const {
        std::size_t s = 0;
        for (auto& [k, g] : groups) s += g.rank;
        return s;
    }
    std::size_t dim(int h, int q) const {
        auto it = groups.find({h, q});
        return it == groups.end() ? 0 : it->second.rank;
    }
    std::size_t torsion_count() const {
        std::size_t s = 0;
        for (auto& [k, g] : groups) s += g.torsion.size();
        return s;
    }

    // e.g. "q^-1 + q + t^2 q^5 + [Z/2] t^3 q^7"
    std::string poincare() const {
        std::ostringstream os;
        bool first = true;
        for (auto& [k, g] : groups) {
            auto [hh, qq] = k;
            auto mono = [&] {
                std::string s;
                if (hh != 0) s += "t^" + std::to_string(hh);
                if (graded && qq != 0) {
                    if (!s.empty()) s += " ";
                    s += qq == 1 ? "q" : "q^" + std::to_string(qq);
                }
                return s.empty() ? std::string("1") : s;
            };
            if (g.rank) {
                if (!first) os << " + ";
                first = false;
                if (g.rank > 1) os << g.rank << " ";
                os << mono();
            }
            for (auto& t : g.torsion) {
                if (!first) os << " + ";
                first = false;
                os << "[Z/" << t << "] " << mono();
            }
        }
        return first ? std::string("0") : os.str();
    }
};

class DSquaredError : public std::logic_error {
public:
    DSquaredError(std::uint32_t gen)
        : std::logic_error("d^2 != 0 at generator " + std::to_string(gen)), generator(gen) {}
    std::uint32_t generator;
};

// Blocks of a complex: generators grouped by (h, q) (or h only when ungraded).
struct Blocks {
    std::map<std::pair<int, int>, std::vector<std::uint32_t>> members;
    std::vector<std::uint32_t> local;  // generator -> index inside its block
};

inline Blocks make_blocks(const ChainComplex& C, bool graded) {
    Blocks b;
    b.local.resize(C.size());
    for (std::uint32_t g = 0; g < C.size(); ++g) {
        auto& m = b.members[{C.h[g], graded ? C.q[g] : 0}];
        b.local[g] = static_cast<std::uint32_t>(m.size());
        m.push_back(g);
    }
    return b;
}

// d restricted to block (h,q) -> (h+1,q)
inline IntColumns block_matrix(const ChainComplex& C, const Blocks& b, int h, int q) {
    IntColumns M;
    auto src = b.members.find({h, q});
    auto tgt = b.members.find({h + 1, q});
    if (src == b.members.end()) return M;
    M.rows = tgt == b.members.end() ? 0 : tgt->second.size();
    for (auto g : src->second) {
        SparseColumn col;
        for (auto [r, c] : C.d[g]) col.emplace_back(b.local[r], c);
        std::sort(col.begin(), col.end());
        M.cols.push_back(std::move(col));
    }
    return M;
}

inline HomologyTable homology(const ChainComplex& C, const Coefficients& k, int jobs = 1,
                              bool check_d2 = true) {
    if (check_d2)
        if (auto w = C.d_squared_witness()) throw DSquaredError(*w);
    C.check_degrees();
    bool graded = C.q_homogeneous();
    Blocks b = make_blocks(C, graded);
    std::vector<std::pair<int, int>> keys;
    for (auto& [key, m] : b.members) keys.push_back(key);
    // outgoing data per block
    std::vector<std::size_t> rank_out(keys.size(), 0);
    std::vector<std::vector<Integer>> inv_out(keys.size());
    parallel_for(jobs, keys.size(), [&](std::size_t idx) {
        auto [h, q] = keys[idx];
        IntColumns M = block_matrix(C, b, h, q);
        if (M.rows == 0) return;
        if (k.is_field()) {
            rank_out[idx] = rank_over(M, k);
        } else {
            inv_out[idx] = smith_invariants(M);
            rank_out[idx] = inv_out[idx].size();
        }
    });
    HomologyTable T;
    T.ring = k;
    T.graded = graded;
    std::map<std::pair<int, int>, std::size_t> index;
    for (std::size_t i = 0; i < keys.size(); ++i) index[keys[i]] = i;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [h, q] = keys[i];
        std::size_t n = b.members[keys[i]].size();
        std::size_t in = 0;
        HomologyGroup g;
        if (auto it = index.find({h - 1, q}); it != index.end()) {
            in = rank_out[it->second];
            if (!k.is_field())
                for (auto& d : inv_out[it->second])
                    if (d > 1) g.torsion.push_back(d);
        }
        g.rank = n - rank_out[i] - in;
        std::sort(g.torsion.begin(), g.torsion.end());
        if (!g.zero()) T.groups[keys[i]] = g;
    }
    return T;
}

// Universal coefficients: F_p dimensions predicted from an integral table.
inline std::map<std::pair<int, int>, std::size_t> uct_prediction(const HomologyTable& Z, std::uint32_t p) {
    std::map<std::pair<int, int>, std::size_t> out;
    for (auto& [k, g] : Z.groups) {
        auto [h, q] = k;
        std::size_t div = 0;
        for (auto& t : g.torsion)
            if (t % p == 0) ++div;
        out[k] += g.rank + div;
        // Tor term lands one degree lower for cochain complexes
        if (div) out[{h - 1, q}] += div;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// ---------------------------------------------------------------- F2 dense helpers

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}
    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        if (v) w_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    BitVec& operator^=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    bool any() const {
        for (auto x : w_)
            if (x) return true;
        return false;
    }
    // first set bit at or after i, or size() if none
    std::size_t next_set(std::size_t i) const {
        if (i >= n_) return n_;
        std::size_t k = i >> 6;
        std::uint64_t word = w_[k] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (word) return std::min(n_, k * 64 + static_cast<std::size_t>(__builtin_ctzll(word)));
            if (++k >= w_.size()) return n_;
            word = w_[k];
        }
    }
    // lowest set bit, or size() if none
    std::size_t lowest() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[k]));
        return n_;
    }
    bool operator==(const BitVec&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Echelon basis over F2 with optional tags riding along.
class F2Echelon {
public:
    explicit F2Echelon(std::size_t n, std::size_t tags = 0) : n_(n), tags_(tags) {}

    // returns true if v was independent (and stores it)
    bool insert(BitVec v, BitVec tag = {}) {
        if (tag.size() == 0) tag = BitVec(tags_);
        reduce(v, tag);
        if (!v.any()) return false;
        std::size_t piv = v.lowest();
        pivots_[piv] = basis_.size();
        basis_.push_back(std::move(v));
        tagv_.push_back(std::move(tag));
        return true;
    }

    void reduce(BitVec& v, BitVec& tag) const {
        std::size_t i = v.next_set(0);
        while (i < n_) {
            auto it = pivots_.find(i);
            if (it != pivots_.end()) {
                v ^= basis_[it->second];
                if (tag.size()) tag ^= tagv_[it->second];
            }
            i = v.next_set(i + 1);
        }
    }

    std::size_t rank() const { return basis_.size(); }

private:
    std::size_t n_, tags_;
    std::map<std::size_t, std::size_t> pivots_;
    std::vector<BitVec> basis_, tagv_;
};

// kernel basis of an F2 matrix given by integer columns (reduced mod 2)
inline std::vector<BitVec> f2_kernel(const IntColumns& M) {
    const std::size_t nc = M.cols.size();
    std::vector<BitVec> colv, track;
    std::map<std::size_t, std::size_t> pivot;  // row pivot -> reduced column index
    std::vector<BitVec> kernel;
    for (std::size_t j = 0; j < nc; ++j) {
        BitVec v(M.rows), t(nc);
        for (auto [r, c] : M.cols[j])
            if (c & 1) v.flip(r);
        t.set(j);
        while (true) {
            std::size_t lo = v.lowest();
            if (lo >= M.rows) break;
            auto it = pivot.find(lo);
            if (it == pivot.end()) break;
            v ^= colv[it->second];
            t ^= track[it->second];
        }
        if (!v.any()) {
            kernel.push_back(t);
        } else {
            pivot[v.lowest()] = colv.size();
            colv.push_back(v);
            track.push_back(t);
        }
    }
    return kernel;
}

struct Sq1Block {
    int h = 0, q = 0;             // map Kh^{h,q} -> Kh^{h+1,q}
    std::size_t rank = 0;
    std::size_t src_dim = 0, tgt_dim = 0;
    std::vector<std::vector<int>> matrix;  // tgt_dim x src_dim over F2, w.r.t. chosen bases
};

struct Sq1Result {
    std::vector<Sq1Block> blocks;  // only blocks with nonzero source and target
    bool square_zero = true;       // Sq1 o Sq1 = 0 checked at chain level
};

// Bockstein on F2 homology of a q-graded integral complex.
inline Sq1Result bockstein_sq1(const ChainComplex& C) {
    if (!C.q_homogeneous()) throw std::invalid_argument("bockstein_sq1 needs a q-graded complex");
    Blocks b = make_blocks(C, true);
    Sq1Result out;
    // per block: cycle basis mod 2, boundary echelon, homology representatives
    struct Data {
        std::vector<BitVec> cycles;
        std::vector<BitVec> reps;  // cycles independent modulo boundaries
    };
    std::map<std::pair<int, int>, Data> data;
    auto boundaries = [&](int h, int q) {
        // image of d_{h-1} in block (h,q)
        auto it = b.members.find({h, q});
        std::size_t n = it == b.members.end() ? 0 : it->second.size();
        F2Echelon E(n);
        IntColumns M = block_matrix(C, b, h - 1, q);
        for (auto& col : M.cols) {
            BitVec v(n);
            for (auto [r, c] : col)
                if (c & 1) v.flip(r);
            E.insert(v);
        }
        return E;
    };
    for (auto& [key, mem] : b.members) {
        auto [h, q] = key;
        IntColumns M = block_matrix(C, b, h, q);
        Data dd;
        if (M.rows == 0) {
            for (std::size_t j = 0; j < mem.size(); ++j) {
                BitVec v(mem.size());
                v.set(j);
                dd.cycles.push_back(v);
            }
        } else {
            dd.cycles = f2_kernel(M);
        }
        F2Echelon B = boundaries(h, q);
        for (auto& z : dd.cycles)
            if (B.insert(z)) dd.reps.push_back(z);
        data[key] = std::move(dd);
    }
    // lift a mod-2 chain in block (h,q), apply d over Z, halve, reduce mod 2 into block (h+1,q)
    auto sq = [&](const BitVec& z, int h, int q) {
        const auto& mem = b.members.at({h, q});
        auto tgt = b.members.find({h + 1, q});
        std::size_t n = tgt == b.members.end() ? 0 : tgt->second.size();
        std::map<std::uint32_t, long> acc;
        for (std::size_t j = 0; j < mem.size(); ++j)
            if (z.get(j))
                for (auto [r, c] : C.d[mem[j]]) acc[b.local[r]] += c;
        BitVec w(n);
        for (auto& [r, v] : acc) {
            if (v % 2 != 0) throw std::logic_error("bockstein: d(lift) not divisible by 2");
            if ((v / 2) % 2 != 0) w.flip(r);
        }
        return w;
    };
    for (auto& [key, dd] : data) {
        auto [h, q] = key;
        auto nx = data.find({h + 1, q});
        if (dd.reps.empty() || nx == data.end() || nx->second.reps.empty()) continue;
        std::size_t n = b.members.at({h + 1, q}).size();
        std::size_t r = nx->second.reps.size();
        F2Echelon E(n, r);
        {
            IntColumns M = block_matrix(C, b, h, q);
            for (auto& col : M.cols) {
                BitVec v(n);
                for (auto [row, c] : col)
                    if (c & 1) v.flip(row);
                E.insert(v, BitVec(r));
            }
        }
        for (std::size_t l = 0; l < r; ++l) {
            BitVec tag(r);
            tag.set(l);
            E.insert(nx->second.reps[l], tag);
        }
        Sq1Block blk;
        blk.h = h;
        blk.q = q;
        blk.src_dim = dd.reps.size();
        blk.tgt_dim = r;
        blk.matrix.assign(r, std::vector<int>(dd.reps.size(), 0));
        F2Echelon img(r);
        for (std::size_t s = 0; s < dd.reps.size(); ++s) {
            BitVec w = sq(dd.reps[s], h, q);
            BitVec tag(r);
            E.reduce(w, tag);
            if (w.any()) throw std::logic_error("bockstein image is not a cycle");
            for (std::size_t l = 0; l < r; ++l) blk.matrix[l][s] = tag.get(l);
            img.insert(tag);
        }
        blk.rank = img.rank();
        out.blocks.push_back(std::move(blk));
    }
    // Sq1 o Sq1 at chain level must land in boundaries
    for (auto& [key, dd] : data) {
        auto [h, q] = key;
        if (!b.members.count({h + 2, q}) || !b.members.count({h + 1, q})) continue;
        F2Echelon B = boundaries(h + 2, q);
        for (auto& z : dd.cycles) {
            BitVec w = sq(z, h, q);
            BitVec w2 = sq(w, h + 1, q);
            BitVec none;
            B.reduce(w2, none);
            if (w2.any()) out.square_zero = false;
        }
    }
    return out;
}

}  // namespace khoverture

#endif
