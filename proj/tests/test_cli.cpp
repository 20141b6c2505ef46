#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jurylab/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = jurylab::cli::run_cli(std::move(args), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("jurylab_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, ShapleyGrofmanTable) {
    const auto r = invoke({"reproduce", "shapley-grofman"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("expert"), std::string::npos);
    EXPECT_NE(r.out.find("0.9"), std::string::npos);
    EXPECT_NE(r.out.find("0.87696"), std::string::npos);
    EXPECT_NE(r.out.find("0.92664"), std::string::npos);
}

TEST(Cli, WalkBorderLine) {
    const auto r = invoke({"walk", "border", "--m", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "m=1, exact=6/16, float=0.375\n");
}

TEST(Cli, EvenProfileIsRejected) {
    const auto r = invoke({"tally", "--profile", "0.6,0.6"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, TallyJson) {
    const auto r = invoke({"tally", "--profile", "0.6,0.6,0.6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["value"].get<double>(), 0.648, 1e-15);
    EXPECT_EQ(doc["method"], "exact_dp");
}

TEST(Cli, UnknownFlagsAndSubcommandsAreRejected) {
    EXPECT_EQ(invoke({"tally", "--profile", "0.6", "--bogus", "1"}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"reproduce", "theorem-9-9"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("reproduce"), std::string::npos);
}

TEST(Cli, CsvOutputsStartWithProvenance) {
    const auto border = invoke({"walk", "border", "--m", "1", "--m-max", "4", "--csv"});
    ASSERT_EQ(border.code, 0) << border.err;
    EXPECT_EQ(border.out.rfind("# seed=0 config_hash=", 0), 0u);
    EXPECT_NE(border.out.find("m,exact_num,exact_den,float,asymptote,ratio"), std::string::npos);

    const auto cond = invoke({"conditions", "--source", "condorcet:0.1", "--checkpoints", "99,101", "--seed", "3"});
    ASSERT_EQ(cond.code, 0) << cond.err;
    EXPECT_EQ(cond.out.rfind("# seed=3 config_hash=", 0), 0u);

    const auto sweep = invoke({"weights-sweep", "--measure", "lebesgue", "--W", "10,100", "--k", "1,2"});
    ASSERT_EQ(sweep.code, 0) << sweep.err;
    EXPECT_EQ(sweep.out.rfind("# seed=", 0), 0u);
    EXPECT_NE(sweep.out.find("W,k,sigma_W,x,moment_criterion,drift"), std::string::npos);
}

TEST(Cli, DivergenceSpotValues) {
    const auto r = invoke({"divergence", "--p", "lebesgue", "--q", R"({"pieces":[[0,1,0,2]],"atoms":[]})"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["tv"].get<double>(), 0.5, 1e-12);
    EXPECT_NEAR(doc["kl"].get<double>(), 1.0 - std::log(2.0), 1e-12);
}

TEST(Cli, IdenticalArgvGivesIdenticalFiles) {
    const std::vector<std::string> argv{"walk", "return", "--k", "2", "--horizons", "10,100,1000",
                                        "--replicas", "500", "--seed", "5"};
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto args_a = argv, args_b = argv;
    args_a.insert(args_a.end(), {"--out-dir", a.string()});
    args_b.insert(args_b.end(), {"--out-dir", b.string(), "--threads", "3"});
    const auto ra = invoke(args_a), rb = invoke(args_b);
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    EXPECT_EQ(ra.out, rb.out);
    ASSERT_FALSE(fs::is_empty(a));
    for (const auto& entry : fs::directory_iterator(a))
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, ExperimentWritesCsvJsonSvg) {
    const auto dir = scratch("experiment");
    fs::create_directories(dir);
    const auto config = dir / "config.json";
    std::ofstream(config) << R"({"measure":{"pieces":[[0,1,0.5,1]],"atoms":[]},"n_grid":[11,31,51],"profiles_per_n":10,"seed":4})";
    const auto out_dir = dir / "out";
    const auto r = invoke({"experiment", "--config", config.string(), "--out-dir", out_dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* name : {"experiment.csv", "experiment.json", "experiment.svg"}) EXPECT_TRUE(fs::exists(out_dir / name)) << name;
    EXPECT_EQ(slurp(out_dir / "experiment.csv"), r.out);
    const auto doc = nlohmann::json::parse(slurp(out_dir / "experiment.json"));
    EXPECT_EQ(doc["rows"].size(), 3u);
    EXPECT_EQ(doc["seed"], 4);

    const auto reseeded = invoke({"experiment", "--config", config.string(), "--seed", "9"});
    EXPECT_EQ(reseeded.out.rfind("# seed=9 ", 0), 0u);
    fs::remove_all(dir);
}

TEST(Cli, MalformedConfigIsValidationError) {
    const auto dir = scratch("badconfig");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"measure":{"pieces":[[0,1,1,0]],"atoms":[]},"n_grid":[10]})";
    EXPECT_EQ(invoke({"experiment", "--config", (dir / "c.json").string()}).code, 1);
    EXPECT_EQ(invoke({"experiment", "--config", (dir / "missing.json").string()}).code, 1);
    fs::remove_all(dir);
}
