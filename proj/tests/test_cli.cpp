#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xmems/mems.hpp"
#include "xmems/sampling.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int exit_code;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(XMEMS_CLI_PATH) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    std::string out;
    char buf[4096];
    while (const auto n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("xmems_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_F(Cli, SweepWritesCsvAndCleanSummary) {
    const auto csv = dir_ / "sweep.csv";
    const auto err = dir_ / "summary.json";
    const auto r = run("sweep --n 3 --count 100000 --seed 42 -o " + csv.string() + " 2>" + err.string());
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = lines(slurp(csv));
    ASSERT_EQ(rows.size(), 100001u);
    EXPECT_EQ(rows.front(), "index,entropy,concurrence");
    const auto summary = nlohmann::json::parse(slurp(err));
    EXPECT_EQ(summary.at("count"), 100000);
    EXPECT_EQ(summary.at("boundary_violations"), 0);
    EXPECT_EQ(summary.at("critical_violations"), 0);
    EXPECT_LT(summary.at("max_entropy_entangled").get<double>(), xmems::critical_entropy(3));
}

TEST_F(Cli, SweepIsByteIdenticalAcrossRunsAndShards) {
    const auto a = dir_ / "a.csv", b = dir_ / "b.csv", c = dir_ / "c.csv";
    ASSERT_EQ(run("sweep --n 2 --count 1 --seed 7 -o " + a.string() + " 2>/dev/null").exit_code, 0);
    ASSERT_EQ(run("sweep --n 2 --count 1 --seed 7 -o " + b.string() + " 2>/dev/null").exit_code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(lines(slurp(a)).size(), 2u);

    ASSERT_EQ(run("sweep --n 4 --count 30000 --seed 3 --shards 1 -o " + a.string() + " 2>/dev/null").exit_code, 0);
    ASSERT_EQ(run("sweep --n 4 --count 30000 --seed 3 --shards 8 -o " + c.string() + " 2>/dev/null").exit_code, 0);
    EXPECT_EQ(slurp(a), slurp(c));
}

TEST_F(Cli, SweepUsageAndIoErrors) {
    EXPECT_EQ(run("sweep --n 3 --count 0 2>/dev/null").exit_code, 1);
    EXPECT_EQ(run("sweep --count 0 2>/dev/null").exit_code, 1);
    EXPECT_EQ(run("sweep --n 1 --count 5 2>/dev/null").exit_code, 1);
    EXPECT_EQ(run("sweep --n 3 --count 5 -o /nonexistent-dir/x.csv 2>/dev/null").exit_code, 2);
    EXPECT_EQ(run("2>/dev/null").exit_code, 1);
    EXPECT_EQ(run("bogus 2>/dev/null").exit_code, 1);
}

TEST_F(Cli, BoundaryRows) {
    auto r = run("boundary --n 2 --grid 3");
    ASSERT_EQ(r.exit_code, 0);
    auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "concurrence,entropy");
    EXPECT_EQ(rows[1], "0," + xmems::format_double(8.0 / 9.0));
    EXPECT_EQ(rows[2], "0.5," + xmems::format_double(xmems::boundary_entropy(2, 0.25)));
    EXPECT_EQ(rows[3].substr(0, 2), "1,");
    EXPECT_NEAR(std::stod(rows[3].substr(2)), 0.0, 1e-15);

    r = run("boundary --n 3 --grid 2 --format json");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0].at("concurrence"), 0.0);
    EXPECT_NEAR(j[0].at("entropy").get<double>(), 32.0 / 35.0, 1e-15);
    EXPECT_EQ(j[1].at("concurrence"), 1.0);

    EXPECT_EQ(run("boundary --n 2 --grid 1 2>/dev/null").exit_code, 1);
}

TEST_F(Cli, ScrTable) {
    const auto r = run("scr --max-n 20");
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 20u);
    EXPECT_EQ(rows[1], "2,8/9," + xmems::format_double(8.0 / 9.0));
    EXPECT_EQ(rows[2].substr(0, 7), "3,32/35");
    double prev = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
        EXPECT_GT(v, prev);
        EXPECT_LT(v, 1.0);
        prev = v;
    }
    EXPECT_EQ(run("scr --max-n 31 2>/dev/null").exit_code, 1);
}

TEST_F(Cli, MeasureFiles) {
    auto r = run("measure -i " +
                 write("ghz.json", R"({"n_qubits":3,"a":[0.5,0,0,0],"b":[0.5,0,0,0],"z":[[0.5,0],[0,0],[0,0],[0,0]]})")
                     .string());
    ASSERT_EQ(r.exit_code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("entropy"), 0.0);
    EXPECT_EQ(j.at("concurrence"), 1.0);
    EXPECT_EQ(j.at("valid"), true);

    r = run("measure -i " + write("mixed.json", R"({"n_qubits":2,"a":[0.25,0.25],"b":[0.25,0.25],"z":[[0,0],[0,0]]})")
                                .string());
    ASSERT_EQ(r.exit_code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("entropy").get<double>(), 1.0, 1e-15);
    EXPECT_EQ(j.at("concurrence"), 0.0);

    r = run("measure -i " +
            write("ex.json", R"({"n_qubits":2,"a":[0.35,0.05],"b":[0.5,0.1],"z":[[0.4,0],[0,0]]})").string());
    ASSERT_EQ(r.exit_code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("concurrence").get<double>(), 0.658579, 1e-6);
    EXPECT_EQ(j.at("argmax_index"), 0);

    r = run("measure -i " + write("bad.json", R"({"n_qubits":2,"a":[0.5,0],"b":[0.5,0],"z":[[0.6,0],[0,0]]})").string());
    EXPECT_EQ(r.exit_code, 3);
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("valid"), false);
    EXPECT_EQ(j.at("violations")[0].at("condition"), "coherence");

    const auto err = dir_ / "err.txt";
    r = run("measure -i " + write("broken.json", "{\n\"n_qubits\": 2,\n\"a\": [0.5,]\n}").string() + " 2>" +
            err.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(slurp(err).find("line 3"), std::string::npos);

    r = run("measure -i " + write("short.json", R"({"n_qubits":2,"a":[1],"b":[0,0],"z":[[0,0],[0,0]]})").string() +
            " 2>" + err.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(slurp(err).find("'a'"), std::string::npos);

    EXPECT_EQ(run("measure -i " + (dir_ / "missing.json").string() + " 2>/dev/null").exit_code, 2);
}

TEST_F(Cli, MemsConstruction) {
    const auto r = run("mems --n 2 --gamma 0.3333333333333333");
    ASSERT_EQ(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("entropy").get<double>(), 16.0 / 27.0, 1e-12);
    EXPECT_NEAR(j.at("concurrence").get<double>(), 2.0 / 3.0, 1e-12);
    EXPECT_EQ(j.at("state").at("n_qubits"), 2);
    EXPECT_EQ(run("mems --n 2 --gamma 0.6 2>/dev/null").exit_code, 1);
}

TEST_F(Cli, VerifyDeterministicAndPassing) {
    const auto first = run("verify --n 2 --count 1000 --seed 1");
    ASSERT_EQ(first.exit_code, 0) << first.out;
    for (const auto& l : lines(first.out)) EXPECT_TRUE(nlohmann::json::parse(l).at("passed").get<bool>()) << l;

    const auto a = run("verify --n 3 --count 100 --seed 1");
    const auto b = run("verify --n 3 --count 100 --seed 1");
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, VerifyCapacityError) {
    EXPECT_EQ(run("verify --n 13 2>/dev/null").exit_code, 1);
    EXPECT_EQ(run("verify --n 5 --count 1 2>/dev/null").exit_code, 0);
    const auto capped = std::string("XMEMS_DENSE_CAP=4 ");
    const std::string cmd = capped + XMEMS_CLI_PATH + " verify --n 5 --count 1 >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 1);
}
