#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "legendre/cli.hpp"

using legendre::cli::json;

namespace {

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "legendre");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int status = legendre::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text)
{
    std::vector<json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(json::parse(line));
    return out;
}

} // namespace

TEST(Cli, PeriodsAtOneHalf)
{
    auto r = run({"periods", "--lambda", "0.5", "--precision", "64"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["provenance"]["precision"], 64);
    EXPECT_EQ(doc["provenance"]["version"], LEGENDRE_VERSION);
    EXPECT_EQ(doc["provenance"]["config_hash"].get<std::string>().size(), 16u);
    const auto f = doc["result"]["f"].get<std::string>(), g = doc["result"]["g"].get<std::string>();
    EXPECT_EQ(f.substr(0, 10), "3.70814935");
    EXPECT_EQ(g.substr(0, 10), "3.70814935");
    EXPECT_EQ(g.back(), 'i');
    EXPECT_EQ(doc["result"]["tau"], "i");
}

TEST(Cli, RelationsOnE6)
{
    auto r = run({"relations", "--lambda", "6", "--abscissas", "2", "--bound", "100"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["result"]["rank"], 0);
    EXPECT_TRUE(doc["result"]["basis"].empty());
}

TEST(Cli, RelationsFindsTorsion)
{
    auto r = run({"relations", "--lambda", "4", "--abscissas", "2", "--bound", "10"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = json::parse(r.out);
    ASSERT_EQ(doc["result"]["rank"], 1);
    EXPECT_EQ(doc["result"]["basis"][0]["a"][0], 4);
    EXPECT_TRUE(doc["result"]["basis"][0]["passed"]);
}

TEST(Cli, IntersectScanHasNoRankTwoRecords)
{
    auto r = run({"intersect-scan", "--abscissas", "2,3,5", "--T", "8", "--center", "0.5", "--radius", "0.3"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto recs = lines(r.out);
    ASSERT_GE(recs.size(), 2u);
    EXPECT_TRUE(recs.front().contains("provenance"));
    ASSERT_TRUE(recs.back().contains("summary"));
    EXPECT_EQ(recs.back()["summary"]["rank2_records"], 0);
    for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
        EXPECT_LT(recs[k]["rank"].get<int>(), 2);
        EXPECT_TRUE(recs[k]["first_relation"]["passed"]);
    }
}

TEST(Cli, TorsionScanFormats)
{
    std::vector<std::string> base{"torsion-scan", "--abscissas", "2", "--max-order", "3", "--center", "1.6",
                                  "--radius", "0.25"};
    auto r = run(base);
    ASSERT_EQ(r.status, 0) << r.err;
    auto recs = lines(r.out);
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[1]["order"], 3);
    EXPECT_EQ(recs[1]["recognized"]["minpoly"], "x^2 + 8x - 16");
    EXPECT_EQ(recs[1]["lambda0"].get<std::string>().substr(0, 12), "1.6568542494");

    auto csv = base;
    csv.insert(csv.end(), {"--format", "csv"});
    r = run(csv);
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("# legendre ", 0), 0u);
    EXPECT_NE(r.out.find("order,re_lambda0,im_lambda0"), std::string::npos);
    EXPECT_NE(r.out.find("\n3,1.6568542494"), std::string::npos);

    auto svg = base;
    svg.insert(svg.end(), {"--format", "svg"});
    r = run(svg);
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("<?xml", 0), 0u);
    EXPECT_NE(r.out.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""), std::string::npos);
    EXPECT_NE(r.out.find("<title>order 3</title>"), std::string::npos);
    EXPECT_EQ(r.out.substr(r.out.size() - 7), "</svg>\n");
}

TEST(Cli, OutputIsDeterministic)
{
    std::vector<std::string> a{"count", "--abscissas", "2,3", "--center", "0.5,0.15", "--radius", "0.2",
                               "--T-list", "2,4,8", "--format", "csv"};
    EXPECT_EQ(run(a).out, run(a).out);
    std::vector<std::string> b{"torsion-scan", "--abscissas", "3", "--max-order", "9", "--center", "0.5",
                               "--radius", "0.3", "--format", "json"};
    auto r1 = run(b), r2 = run(b);
    ASSERT_EQ(r1.status, 0);
    EXPECT_EQ(r1.out, r2.out);
}

TEST(Cli, ConfigFileAndFlagPrecedence)
{
    const std::string path = testing::TempDir() + "legendre_cli_test.cfg";
    {
        std::ofstream f(path);
        f << "precision=48\nlambda=0.5,0.25\n";
    }
    auto r = run({"periods", "--config", path});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["provenance"]["precision"], 48);
    EXPECT_EQ(doc["result"]["lambda"], "0.5+0.25i");

    r = run({"periods", "--config", path, "--precision", "40"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["provenance"]["precision"], 40);
    std::remove(path.c_str());
}

TEST(Cli, ConfigHashTracksInputsOnly)
{
    auto hash = [](std::vector<std::string> a) {
        return json::parse(run(a).out)["provenance"]["config_hash"].get<std::string>();
    };
    const std::string file = testing::TempDir() + "legendre_cli_out.json";
    auto h1 = hash({"periods", "--lambda", "0.5"});
    EXPECT_EQ(h1, hash({"periods", "--lambda", "0.5", "--workers", "3"}));
    EXPECT_NE(h1, hash({"periods", "--lambda", "0.25"}));
    EXPECT_NE(h1, hash({"periods", "--lambda", "0.5", "--precision", "80"}));

    auto r = run({"periods", "--lambda", "0.5", "-o", file});
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(file);
    std::stringstream body;
    body << in.rdbuf();
    EXPECT_EQ(json::parse(body.str())["provenance"]["config_hash"], h1);
    std::remove(file.c_str());
}

TEST(Cli, HeightCommands)
{
    auto r = run({"height", "--lambda", "7", "--point", "9,12"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["result"]["neron_tate"]["method"], "duplication-limit");
    EXPECT_TRUE(doc["result"]["zimmer_audit"]["passed"]);

    r = run({"height", "--poly", "1,0,-2"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["result"]["weil_height"]["height"].get<std::string>().substr(0, 12), "0.3465735902");
}

TEST(Cli, AuditConjugates)
{
    auto r = run({"audit-conjugates", "--abscissas", "2", "--max-order", "6", "--center", "1.6", "--radius",
                  "0.25"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto recs = lines(r.out);
    ASSERT_GE(recs.size(), 3u);
    EXPECT_EQ(recs[1]["minpoly"], "x^2 + 8x - 16");
    EXPECT_EQ(recs[1]["audit"]["total"], 2);
    EXPECT_EQ(recs.back()["summary"]["audited"], recs.size() - 2);

    r = run({"audit-conjugates", "--poly", "1,8,-16"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["result"]["inside"], 2);
}

TEST(Cli, EllogAndBetti)
{
    auto r = run({"ellog", "--lambda", "0.5", "--x", "2"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_FALSE(doc["result"]["u"].get<std::string>().empty());

    r = run({"betti", "--abscissas", "2", "--center", "0.5", "--radius", "0.2", "--resolution", "0.05", "--format",
             "csv"});
    ASSERT_EQ(r.status, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# legendre", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line, "re_lambda,im_lambda,u1,v1");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    EXPECT_GT(rows, 40);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({"periods", "--bogus", "1"}).status, 1);
    EXPECT_EQ(run({"nonsense"}).status, 1);
    EXPECT_EQ(run({}).status, 1);
    EXPECT_EQ(run({"periods", "--lambda", "1"}).status, 1);
    EXPECT_EQ(run({"periods", "--lambda", "0.5", "--precision", "20"}).status, 1);
    EXPECT_EQ(run({"periods", "--lambda", "0.5", "--format", "svg"}).status, 1);
    EXPECT_EQ(run({"torsion-scan", "--abscissas", "2,3"}).status, 1);
    EXPECT_EQ(run({"relations", "--lambda", "0.5", "--abscissas", "2,3,5", "--bound", "100000000", "--precision",
                   "32"})
                  .status,
              2);
    auto h = run({"--help"});
    EXPECT_EQ(h.status, 0);
    EXPECT_NE(h.out.find("intersect-scan"), std::string::npos);
}
