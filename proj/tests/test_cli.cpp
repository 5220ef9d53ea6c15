#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "khoverture/cli.hpp"

using namespace khoverture;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "khoverture");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(call({}).code, 2);
    EXPECT_EQ(call({"frobnicate"}).code, 2);
    EXPECT_EQ(call({"kh"}).code, 2);
    EXPECT_EQ(call({"kh", "--knot", "no_such_knot"}).code, 2);
    EXPECT_EQ(call({"kh", "--knot", "3_1", "--ring", "Z7"}).code, 2);
    EXPECT_EQ(call({"kh", "--knot", "3_1", "--ht", "1"}).code, 2);
    EXPECT_EQ(call({"verify", "everything", "--knot", "3_1"}).code, 2);
    EXPECT_EQ(call({"s", "--knot", "hopf+"}).code, 2);
    EXPECT_EQ(call({"kh", "--pd", "/nonexistent/file"}).code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(call({"--help"}).code, 0); }

TEST(Cli, IntegralTrefoil) {
    auto r = call({"kh", "--knot", "3_1", "--ring", "Z"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("[Z/2] t^3 q^7"), std::string::npos) << r.out;
    auto red = call({"reduced", "--knot", "3_1"});
    ASSERT_EQ(red.code, 0);
    EXPECT_NE(red.out.find("q^2 + t^2 q^6 + t^3 q^8"), std::string::npos) << red.out;
}

TEST(Cli, SInvariant) {
    auto r = call({"s", "--knot", "9_42", "--field", "F2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("s=0"), std::string::npos) << r.out;
    auto j = call({"s", "--knot", "m3_1", "--field", "both", "--json"});
    ASSERT_EQ(j.code, 0);
    auto doc = nlohmann::json::parse(j.out);
    ASSERT_EQ(doc.size(), 2u);
    for (auto& row : doc) EXPECT_EQ(row["s"], -2);
    EXPECT_EQ(call({"s", "--knot", "all"}).code, 0);
}

TEST(Cli, CoherenceAndMutation) {
    auto ok = call({"verify", "coherence", "--knot", "all"});
    EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
    auto bad = call({"functor", "--knot", "ladybug_unlink", "--check-coherence", "--mutate", "1100,2,3"});
    EXPECT_EQ(bad.code, 1) << bad.out;
    auto bad2 = call({"verify", "coherence", "--knot", "ladybug_unlink", "--mutate", "1100,2,3"});
    EXPECT_EQ(bad2.code, 1);
    EXPECT_NE(bad2.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyTargets) {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"verify", "kunneth", "--knot", "3_1", "--knot", "4_1"},
          {"verify", "kunneth", "--knot", "3_1", "--knot", "4_1", "--reduced", "--ring", "F3"},
          {"verify", "connectsum", "--knot", "3_1", "--knot", "m3_1"},
          {"verify", "mirror", "--knot", "4_1"},
          {"verify", "deformation", "--knot", "hopf-"},
          {"verify", "cells", "--knot", "3_1"}}) {
        auto r = call(args);
        EXPECT_EQ(r.code, 0) << args[1] << ": " << r.out << r.err;
        EXPECT_NE(r.out.find("PASS"), std::string::npos);
    }
}

TEST(Cli, JsonIsDeterministic) {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"kh", "--knot", "4_1", "--ring", "Z", "--json"},
          {"functor", "--knot", "3_1", "--json"},
          {"permutohedron", "--n", "4", "--report", "--json"},
          {"complex", "--knot", "hopf+", "--emit", "-"}}) {
        auto a = call(args), b = call(args);
        ASSERT_EQ(a.code, 0) << args[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out);
        EXPECT_TRUE(nlohmann::json::accept(a.out)) << args[0];
    }
    auto jobs = call({"kh", "--knot", "4_1", "--ring", "Z", "--json", "--jobs", "3"});
    EXPECT_EQ(jobs.out, call({"kh", "--knot", "4_1", "--ring", "Z", "--json"}).out);
}

TEST(Cli, EmitSchema) {
    auto path = temp_file("khoverture_emit.json", "");
    auto r = call({"complex", "--knot", "3_1", "--emit", path});
    ASSERT_EQ(r.code, 0);
    std::ifstream in(path);
    auto doc = nlohmann::json::parse(in);
    EXPECT_EQ(doc["knot"], "3_1");
    EXPECT_EQ(doc["generators"].size(), 30u);
    for (auto& g : doc["generators"]) {
        EXPECT_TRUE(g.contains("h"));
        EXPECT_TRUE(g.contains("q"));
        EXPECT_EQ(g["vertex"].get<std::string>().size(), 3u);
    }
    EXPECT_FALSE(doc["differential"].empty());
}

TEST(Cli, PdFileInput) {
    auto raw = temp_file("khoverture_raw.pd", "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)\n");
    auto r = call({"s", "--pd", raw});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("s=2"), std::string::npos);
    auto rec = temp_file("khoverture_rec.tsv", "# comment\n\nmy_trefoil\tX(4,2,5,1) X(6,4,1,3) X(2,6,3,5)\tbase=1\n");
    auto r2 = call({"reduced", "--pd", rec});
    EXPECT_EQ(r2.code, 0) << r2.err;
    EXPECT_NE(r2.out.find("my_trefoil"), std::string::npos);
    auto broken = temp_file("khoverture_bad.pd", "X(1,2,3)\n");
    EXPECT_EQ(call({"kh", "--pd", broken}).code, 2);
}

TEST(Corpus, ParsingErrors) {
    EXPECT_THROW(parse_corpus_line("lonely"), CorpusError);
    EXPECT_THROW(parse_corpus_line("k\tX(1,2,2,1)\tcolour=red"), CorpusError);
    EXPECT_THROW(parse_corpus_line("k\tX(1,2,2,1)\ts_F2=0"), CorpusError);
    EXPECT_THROW(parse_corpus_line("k\tX(1,2,2,1)\tbase=x"), CorpusError);
    EXPECT_THROW(parse_corpus_line("k\tX(1,2,3,4)"), CorpusError);
    auto e = parse_corpus_line("k\tX(1,2,2,1)\tbase=2\ts_F2=0\tsrc=hand");
    EXPECT_EQ(e.expected_int("s_F2"), 0);
    EXPECT_EQ(e.provenance, "hand");
    EXPECT_TRUE(e.diagram().basepoint.has_value());
}

TEST(Corpus, BuiltinsHaveProvenance) {
    auto c = builtin_corpus();
    EXPECT_EQ(c.size(), 10u);
    for (auto& e : c) {
        if (!e.expected.empty()) EXPECT_FALSE(e.provenance.empty()) << e.name;
        EXPECT_TRUE(e.base.has_value());
    }
}

TEST(Corpus, EnvironmentFiles) {
    auto path = temp_file("khoverture_env.tsv", "t25\tX(2,4,1,3) X(4,2,3,1)\nunknot\tX(1,1,2,2)\tbase=1\n");
    ::setenv("KHOVERTURE_CORPUS", path.c_str(), 1);
    auto c = full_corpus();
    auto r = call({"kh", "--knot", "t25"});
    ::unsetenv("KHOVERTURE_CORPUS");
    EXPECT_EQ(c.size(), 11u);
    EXPECT_EQ(find_entry(c, "unknot")->pd, "X(1,1,2,2)");
    EXPECT_EQ(r.code, 0) << r.err;
    ::setenv("KHOVERTURE_CORPUS", "/nonexistent/corpus.tsv", 1);
    EXPECT_THROW(full_corpus(), CorpusError);
    ::unsetenv("KHOVERTURE_CORPUS");
}

TEST(Corpus, ExpectedPoincarePolynomial) {
    auto good = temp_file("khoverture_kh_good.tsv",
                          "t3\tX(4,2,5,1) X(6,4,1,3) X(2,6,3,5)\tkh=q + q^3 + t^2 q^5 + t^3 q^9\tsrc=hand\n");
    auto r = call({"kh", "--pd", good, "--ring", "Q"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("matches corpus"), std::string::npos);
    auto bad = temp_file("khoverture_kh_bad.tsv", "t3\tX(4,2,5,1) X(6,4,1,3) X(2,6,3,5)\tkh=q + q^3\tsrc=hand\n");
    auto b = call({"kh", "--pd", bad, "--ring", "Q"});
    EXPECT_EQ(b.code, 1);
    EXPECT_NE(b.out.find("EXPECTED"), std::string::npos);
    // other rings are not compared
    EXPECT_EQ(call({"kh", "--pd", bad, "--ring", "F2"}).code, 0);
}
