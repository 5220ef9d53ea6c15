#ifndef KHOVERTURE_CORPUS_HPP
#define KHOVERTURE_CORPUS_HPP

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "khoverture/diagram.hpp"

namespace khoverture {

// name<TAB>pd[<TAB>key=value]...
// Recognized keys: base, s_F2, s_Q, kh (Poincare text over Q), src.
// Any expected value requires a src= tag naming where it came from.
struct CorpusEntry {
    std::string name;
    std::string pd;
    std::optional<long> base;
    std::map<std::string, std::string> expected;
    std::string provenance;

    LinkDiagram diagram() const {
        LinkDiagram d = parse_pd(pd);
        if (base) d = with_basepoint(d, *base);
        return d;
    }
    std::optional<int> expected_int(const std::string& key) const {
        auto it = expected.find(key);
        if (it == expected.end()) return std::nullopt;
        return std::stoi(it->second);
    }
};

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline CorpusEntry parse_corpus_line(const std::string& line, const std::string& where = "corpus") {
    auto f = split_tabs(line);
    if (f.size() < 2 || f[0].empty() || f[1].empty())
        throw CorpusError(where + ": expected name<TAB>pd, got '" + line + "'");
    CorpusEntry e;
    e.name = f[0];
    e.pd = f[1];
    for (std::size_t k = 2; k < f.size(); ++k) {
        if (f[k].empty()) continue;
        auto eq = f[k].find('=');
        if (eq == std::string::npos || eq == 0) throw CorpusError(where + ": bad field '" + f[k] + "'");
        std::string key = f[k].substr(0, eq), val = f[k].substr(eq + 1);
        if (key == "base") {
            try {
                e.base = std::stol(val);
            } catch (const std::exception&) {
                throw CorpusError(where + ": bad base '" + val + "'");
            }
        } else if (key == "src") {
            e.provenance = val;
        } else if (key == "s_F2" || key == "s_Q" || key == "kh") {
            e.expected[key] = val;
        } else {
            throw CorpusError(where + ": unknown key '" + key + "'");
        }
    }
    if (!e.expected.empty() && e.provenance.empty())
        throw CorpusError(where + ": expected values for " + e.name + " lack a src= tag");
    try {
        (void)e.diagram();
    } catch (const DiagramError& err) {
        throw CorpusError(where + ": " + e.name + ": " + err.what());
    }
    return e;
}

inline std::vector<CorpusEntry> parse_corpus(std::istream& in, const std::string& where = "corpus") {
    std::vector<CorpusEntry> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(parse_corpus_line(line, where + ":" + std::to_string(n)));
    }
    return out;
}

// PD codes of the tabulated knots follow the knot-table convention (1-based labels).
inline const char* builtin_corpus_text() {
    return "unknot\tO(1)\tbase=1\ts_F2=0\ts_Q=0\tsrc=trivial\n"
           "kink+\tX(1,1,2,2)\tbase=1\ts_F2=0\ts_Q=0\tsrc=trivial\n"
           "kink-\tX(1,2,2,1)\tbase=1\ts_F2=0\ts_Q=0\tsrc=trivial\n"
           "hopf+\tX(2,4,1,3) X(4,2,3,1)\tbase=1\n"
           "hopf-\tX(3,2,4,1) X(1,4,2,3)\tbase=1\n"
           "3_1\tX(4,2,5,1) X(6,4,1,3) X(2,6,3,5)\tbase=1\ts_F2=2\ts_Q=2\tsrc=positive braid closure, n-m+1\n"
           "m3_1\tX(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\tbase=1\ts_F2=-2\ts_Q=-2\tsrc=mirror of 3_1\n"
           "4_1\tX(8,5,1,6) X(4,1,5,2) X(2,8,3,7) X(6,4,7,3)\tbase=1\ts_F2=0\ts_Q=0\tsrc=amphichiral\n"
           "ladybug_unlink\tX(1,1,2,3) X(2,3,4,5) X(4,6,7,8) X(7,6,5,8)\tbase=1\n"
           "9_42\tX(5,1,6,18) X(1,7,2,6) X(7,3,8,2) X(10,3,11,4) X(4,11,5,12) X(15,9,16,8) X(9,15,10,14) "
           "X(17,12,18,13) X(13,16,14,17)\tbase=1\ts_F2=0\tsrc=knot table, s column\n";
}

inline std::vector<CorpusEntry> builtin_corpus() {
    std::istringstream in(builtin_corpus_text());
    return parse_corpus(in, "builtin");
}

inline std::vector<CorpusEntry> load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open corpus file " + path);
    return parse_corpus(in, path);
}

// Built-ins, then every file named in KHOVERTURE_CORPUS (':'-separated). Later names win.
inline std::vector<CorpusEntry> full_corpus() {
    std::vector<CorpusEntry> all = builtin_corpus();
    if (const char* env = std::getenv("KHOVERTURE_CORPUS")) {
        std::string paths = env, cur;
        std::istringstream ss(paths);
        while (std::getline(ss, cur, ':')) {
            if (cur.empty()) continue;
            for (auto& e : load_corpus_file(cur)) {
                bool replaced = false;
                for (auto& old : all)
                    if (old.name == e.name) {
                        old = e;
                        replaced = true;
                    }
                if (!replaced) all.push_back(e);
            }
        }
    }
    return all;
}

inline std::optional<CorpusEntry> find_entry(const std::vector<CorpusEntry>& corpus, const std::string& name) {
    for (auto& e : corpus)
        if (e.name == name) return e;
    return std::nullopt;
}

}  // namespace khoverture

#endif
