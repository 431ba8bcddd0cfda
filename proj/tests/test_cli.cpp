#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "idiomine/minilang.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "idiomine");
    std::ostringstream out;
    std::ostringstream err;
    int code = idiomine::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("idiomine_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                           "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    // demo corpus -> trees + grammar
    void pipeline(std::size_t count) {
        ASSERT_EQ(run({"demo-corpus", "--seed", "1", "--count", std::to_string(count), "-o", path("demo.mini")}).code, 0);
        auto r = run({"parse", path("demo.mini"), "--grammar", "builtin:mini", "--grammar-out", path("g.json"), "-o",
                      path("t.trees")});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    fs::path dir;
};

} // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"extract", "--grammar", "builtin:mini"}).code, 2);
    auto help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("extract"), std::string::npos);
    EXPECT_EQ(help.out.find("oracle"), std::string::npos);
}

TEST_F(Cli, ParseOneProgram) {
    spit(path("one.mini"), "x = 1;\n");
    auto r = run({"parse", path("one.mini"), "--grammar", "builtin:mini", "--grammar-out", path("g.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out), 1u);
    EXPECT_EQ(r.out.rfind("(Program@0 ", 0), 0u);
}

TEST_F(Cli, ParseWithBadProgram) {
    spit(path("c.mini"), "x = 1;\n%%\ny = ;\n%%\nz = 3;\n");
    auto r = run({"parse", path("c.mini"), "--grammar", "builtin:mini", "--grammar-out", path("g.json"), "-o",
                  path("t.trees")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(lines(slurp(path("t.trees"))), 2u);
    EXPECT_NE(r.err.find(path("c.mini") + ":3:5: expected expression"), std::string::npos) << r.err;

    auto strict = run({"parse", path("c.mini"), "--grammar", "builtin:mini", "--strict", "-o", path("s.trees")});
    EXPECT_EQ(strict.code, 1);
    EXPECT_FALSE(fs::exists(path("s.trees")));
}

TEST_F(Cli, DemoCorpusDeterministic) {
    pipeline(500);
    std::string first = slurp(path("t.trees"));
    EXPECT_EQ(lines(first), 500u);
    ASSERT_EQ(run({"parse", path("demo.mini"), "--grammar", "builtin:mini", "--grammar-out", path("g2.json"), "-o",
                   path("t2.trees")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("t2.trees")), first);
    EXPECT_EQ(slurp(path("g2.json")), slurp(path("g.json")));
}

TEST_F(Cli, ExtractCompressExpandCatalog) {
    pipeline(150);
    auto ex = run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "200", "-o",
                   path("i.json")});
    ASSERT_EQ(ex.code, 0) << ex.err;
    EXPECT_NE(ex.out.find("idioms"), std::string::npos);
    std::string idioms = slurp(path("i.json"));
    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "200", "--workers", "3",
                   "-o", path("i2.json")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("i2.json")), idioms);

    auto comp = run({"compress", "--trees", path("t.trees"), "--idioms", path("i.json"), "--grammar", path("g.json"),
                     "--k", "50", "-o", path("c.trees"), "--report", path("r.json")});
    ASSERT_EQ(comp.code, 0) << comp.err;
    EXPECT_NE(slurp(path("r.json")).find("\"mean_ratio\""), std::string::npos);

    auto exp = run({"expand", "--trees", path("c.trees"), "--idioms", path("i.json"), "--grammar", path("g.json"),
                    "-o", path("e.trees"), "--verify", path("t.trees")});
    EXPECT_EQ(exp.code, 0) << exp.err;
    EXPECT_NE(exp.err.find("0 mismatches"), std::string::npos);
    EXPECT_EQ(slurp(path("e.trees")), slurp(path("t.trees")));

    auto zero = run({"compress", "--trees", path("t.trees"), "--idioms", path("i.json"), "--grammar", path("g.json"),
                     "--k", "0", "-o", path("z.trees"), "--table"});
    ASSERT_EQ(zero.code, 0);
    EXPECT_NE(zero.out.find("mean ratio 0.0000"), std::string::npos);
    EXPECT_EQ(slurp(path("z.trees")), slurp(path("t.trees")));

    auto sweep = run({"compress", "--trees", path("t.trees"), "--idioms", path("i.json"), "--grammar", path("g.json"),
                      "--sweep", "0,10,100"});
    ASSERT_EQ(sweep.code, 0) << sweep.err;
    EXPECT_EQ(lines(sweep.out), 4u);

    auto cat = run({"catalog", "--idioms", path("i.json"), "--grammar", path("g.json"), "--top", "1"});
    ASSERT_EQ(cat.code, 0) << cat.err;
    EXPECT_EQ(lines(cat.out), 2u);
    EXPECT_EQ(cat.out.rfind("#1 ", 0), 0u);
}

TEST_F(Cli, ExtractZero) {
    pipeline(20);
    auto r = run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "0", "-o", path("i.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0 idioms"), std::string::npos);
    EXPECT_NE(slurp(path("i.json")).find("\"idioms\": []"), std::string::npos);
}

TEST_F(Cli, ExpandErrors) {
    pipeline(40);
    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "20", "-o",
                   path("i.json")})
                  .code,
              0);
    spit(path("empty.trees"), "");
    auto empty = run({"expand", "--trees", path("empty.trees"), "--idioms", path("i.json"), "--grammar",
                      path("g.json"), "-o", path("out.trees")});
    EXPECT_EQ(empty.code, 0) << empty.err;
    EXPECT_EQ(slurp(path("out.trees")), "");

    std::string first_line = slurp(path("t.trees"));
    first_line = first_line.substr(0, first_line.find('\n'));
    spit(path("forged.trees"), first_line + "\n(Program@9999 StmtList)\n");
    auto forged = run({"expand", "--trees", path("forged.trees"), "--idioms", path("i.json"), "--grammar",
                       path("g.json")});
    EXPECT_EQ(forged.code, 1);
    EXPECT_NE(forged.err.find("9999"), std::string::npos) << forged.err;
    EXPECT_NE(forged.err.find("line 2"), std::string::npos) << forged.err;
}

TEST_F(Cli, VerifyReportsMismatch) {
    pipeline(10);
    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "5", "-o",
                   path("i.json")})
                  .code,
              0);
    std::string all = slurp(path("t.trees"));
    std::string first = all.substr(0, all.find('\n') + 1);
    std::string rest = all.substr(all.find('\n') + 1);
    std::string second = rest.substr(0, rest.find('\n') + 1);
    spit(path("swapped.trees"), second + first + rest.substr(rest.find('\n') + 1));
    auto r = run({"expand", "--trees", path("t.trees"), "--idioms", path("i.json"), "--grammar", path("g.json"), "-o",
                  path("e.trees"), "--verify", path("swapped.trees")});
    if (first != second) {
        EXPECT_EQ(r.code, 1);
        EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
    }
}

TEST_F(Cli, FingerprintMismatch) {
    pipeline(30);
    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "5", "-o",
                   path("i.json")})
                  .code,
              0);
    spit(path("other.mini"), "if (a) b = 1;\n");
    ASSERT_EQ(run({"parse", path("other.mini"), "--grammar", "builtin:mini", "--grammar-out", path("g2.json"), "-o",
                   path("o.trees")})
                  .code,
              0);
    auto r = run({"compress", "--trees", path("o.trees"), "--idioms", path("i.json"), "--grammar", path("g2.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("fingerprint"), std::string::npos) << r.err;
}

TEST_F(Cli, HiddenOracle) {
    pipeline(15);
    auto counts = run({"oracle", "counts", "--trees", path("t.trees"), "--grammar", path("g.json")});
    EXPECT_EQ(counts.code, 0) << counts.err;
    EXPECT_GT(lines(counts.out), 10u);
    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "10", "-o",
                   path("i.json")})
                  .code,
              0);
    auto ref = run({"oracle", "extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "10"});
    EXPECT_EQ(ref.code, 0);
    EXPECT_EQ(ref.out, slurp(path("i.json")));
}

TEST_F(Cli, CatalogContents) {
    pipeline(500);
    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "200", "-o",
                   path("i.json")})
                  .code,
              0);
    auto cat = run({"catalog", "--idioms", path("i.json"), "--grammar", path("g.json")});
    ASSERT_EQ(cat.code, 0);
    EXPECT_EQ(lines(cat.out), 400u);
    EXPECT_NE(cat.out.find("System . out . println"), std::string::npos);

    ASSERT_EQ(run({"extract", "--trees", path("t.trees"), "--grammar", path("g.json"), "-n", "0", "-o",
                   path("none.json")})
                  .code,
              0);
    auto empty = run({"catalog", "--idioms", path("none.json"), "--grammar", path("g.json")});
    EXPECT_EQ(empty.code, 0);
    EXPECT_EQ(empty.out, "");
}
