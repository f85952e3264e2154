#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "summakit/io/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "summakit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = summakit::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::path(SUMMAKIT_TEST_TMP) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        ::unsetenv("SUMMAKIT_SEED");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = (dir_ / name).string();
        summakit::io::write_file_atomic(p, text);
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, NormPowerTwo) {
    const auto csv = write("x.csv", "index,value\n1,3\n2,4\n3,0\n");
    const auto r = run({"norm", "--csv", csv, "--family", "power", "--p", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["result"]["luxemburg"]["norm"].get<double>(), 5.0, 1e-8);
    EXPECT_NEAR(j["result"]["orlicz"]["norm"].get<double>(), 10.0, 1e-8);
    EXPECT_EQ(j["command"], "norm");
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_TRUE(j["version"].is_string());
    EXPECT_EQ(j["config"]["family"]["kind"], "power");
}

TEST_F(Cli, NormAllZero) {
    const auto csv = write("z.csv", "index,value\n1,0\n2,0\n");
    const auto r = run({"norm", "--csv", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["result"]["luxemburg"]["norm"].get<double>(), 0.0);
    EXPECT_EQ(j["result"]["orlicz"]["norm"].get<double>(), 0.0);
}

TEST_F(Cli, MalformedCsvExitsTwoWithLine) {
    const auto csv = write("bad.csv", "index,value\n1,0.5\n2,oops\n");
    const auto r = run({"norm", "--csv", csv});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(":3:"), std::string::npos) << r.err;
}

TEST_F(Cli, ConvergeDefaultsSquareSpikeIn) {
    const auto r = run({"converge"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["result"]["state"], "In");
}

TEST_F(Cli, ConvergeOscillatingOut) {
    const auto r = run({"converge", "--generator", "oscillating", "--gamma", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["result"]["state"], "Out");
}

TEST_F(Cli, ConvergeTesters) {
    for (const char* tester : {"statistical", "ntheta", "wlambda", "neighborhood"}) {
        const auto r = run({"converge", "--tester", tester, "--horizon", "2000"});
        ASSERT_EQ(r.code, 0) << tester << ": " << r.err;
        EXPECT_EQ(json::parse(r.out)["result"]["tester"].get<std::string>().substr(0, 4),
                  std::string(tester).substr(0, 4));
    }
    const auto lit = run({"converge", "--reading", "literal", "--horizon", "2000"});
    EXPECT_EQ(lit.code, 0) << lit.err;
    const auto blocks = run({"converge", "--mode", "blocks", "--horizon", "5000"});
    EXPECT_EQ(blocks.code, 0) << blocks.err;
}

TEST_F(Cli, ConvergeShortHorizonExitsTwo) {
    EXPECT_EQ(run({"converge", "--horizon", "5"}).code, 2);
}

TEST_F(Cli, ConvergeInvalidWindowsExitTwo) {
    EXPECT_EQ(run({"converge", "--horizon", "20", "--set", "windows.lambda=[1,3]"}).code, 2);
    EXPECT_EQ(run({"converge", "--tester", "bogus"}).code, 2);
    EXPECT_EQ(run({"converge", "--gamma", "abc"}).code, 2);
    EXPECT_EQ(run({"converge", "--unknown-flag"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, DumpWindows) {
    const auto path = (dir_ / "w.csv").string();
    const auto r = run({"converge", "--horizon", "100", "--dump-windows", path});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = summakit::io::read_text_file(path);
    EXPECT_EQ(text.substr(0, text.find('\n')), "i,lambda_i,c_i,D_i");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
}

TEST_F(Cli, VerifyDefaultsExitZero) {
    const auto r = run({"verify", "--theorem", "T1", "--instances", "20", "--horizon", "2000"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["result"]["counterexamples"], 0);
    EXPECT_NE(r.err.find("0 confident counterexamples in 20 instances"), std::string::npos);
}

TEST_F(Cli, VerifyNegativeControlExitsOne) {
    const auto r = run({"verify", "--theorem", "T1", "--instances", "10", "--horizon", "2000", "--negative-control"});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_GE(json::parse(r.out)["result"]["counterexamples"].get<int>(), 1);
}

TEST_F(Cli, VerifyT5WithoutRefinementExitsTwo) {
    const auto r = run({"verify", "--theorem", "T5", "--instances", "5", "--horizon", "2048", "--set",
                        "verify.theta=[0,2,4,8,16,32,64,128,256,512,1024,2048]", "--set",
                        "verify.refined=[0,3,8,2048]"});
    EXPECT_EQ(r.code, 2) << r.err;
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
    const auto cfg = write("c.json", R"({"horizon": 3000, "converge": {"gamma": 0.3, "xi": 0.2}})");
    const auto r = run({"converge", "--config", cfg, "--xi", "0.4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = json::parse(r.out)["config"];
    EXPECT_EQ(c["horizon"], 3000);
    EXPECT_EQ(c["converge"]["gamma"], 0.3);
    EXPECT_EQ(c["converge"]["xi"], 0.4);
    EXPECT_EQ(run({"converge", "--config", write("bad.json", "{oops")}).code, 2);
}

TEST_F(Cli, SeedFromEnvironmentUnlessFlagGiven) {
    ::setenv("SUMMAKIT_SEED", "77", 1);
    auto r = run({"gen", "--what", "corpus", "--count", "2"});
    EXPECT_EQ(json::parse(r.out)["config"]["seed"], 77);
    r = run({"gen", "--what", "corpus", "--count", "2", "--seed", "3"});
    EXPECT_EQ(json::parse(r.out)["config"]["seed"], 3);
    ::unsetenv("SUMMAKIT_SEED");
}

TEST_F(Cli, ByteIdenticalReports) {
    const std::vector<std::vector<std::string>> commands{
        {"verify", "--theorem", "all", "--instances", "12", "--horizon", "2000", "--jobs", "3"},
        {"converge", "--generator", "bounded_random", "--horizon", "3000"},
        {"gen", "--what", "pair", "--horizon", "500"},
        {"conjugate", "--family", "power_over_p", "--p", "3"},
        {"density", "--support", "bernoulli(0.01)"},
    };
    for (const auto& args : commands) {
        const auto a = run(args);
        const auto b = run(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << args[0];
    }
    auto serial = commands[0];
    serial.back() = "1";
    const auto a = json::parse(run(commands[0]).out)["result"];
    const auto s = json::parse(run(serial).out)["result"];
    EXPECT_EQ(a, s);
}

TEST_F(Cli, OutputFileIsWritten) {
    const auto path = (dir_ / "report.json").string();
    const auto r = run({"density", "--output", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto j = json::parse(summakit::io::read_text_file(path));
    EXPECT_EQ(j["result"]["density"], "1/100");
}

TEST_F(Cli, GenSequenceCsv) {
    const auto r = run({"gen", "--what", "sequence", "--horizon", "4", "--generator", "oscillating"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "index,value\n1,-1\n2,1\n3,-1\n4,1\n");
    const auto t = run({"gen", "--what", "theta_pair", "--horizon", "64"});
    EXPECT_EQ(json::parse(t.out)["result"]["is_refinement"], true);
}

TEST_F(Cli, HelpAndVersionExitZero) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"--version"}).code, 0);
}
