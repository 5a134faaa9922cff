#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int status = -1;
    std::string out;
    std::string err;
};

struct ScratchDir {
    fs::path path = fs::temp_directory_path() / ("haar_cli_test_" + std::to_string(::getpid()));
    ScratchDir() { fs::create_directories(path); }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path scratch() {
    static const ScratchDir dir;
    return dir.path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Result run(const std::string& args) {
    const fs::path err = scratch() / "stderr.txt";
    const std::string cmd = std::string("'") + HAAR_CLI_PATH + "' " + args + " 2>'" + err.string() + "'";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(Cli, DimensionOfOrderEightTensors) {
    const auto r = run("dim --group so3 --order 8");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "91\n");

    const auto j = nlohmann::json::parse(run("dim --group o3 --order 0-6 --method closed --format json").out);
    const long long want[] = {1, 0, 1, 0, 3, 0, 15};
    ASSERT_EQ(j["dimensions"].size(), 7u);
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(j["dimensions"][n]["closed"], std::to_string(want[n]));
}

TEST(Cli, ClosedFormDensityAtTheEquator) {
    const auto r = run("density --chart builtin:so3-euler --point 0,1.5707963,0 --closed-form --format json");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["closed_form"].get<double>(), 1 / (8 * M_PI * M_PI), 1e-12);
}

TEST(Cli, SamplingIsByteIdenticalPerSeed) {
    const auto a = run("sample --group so3 --chart quaternion -n 3 --seed 7");
    const auto b = run("sample --group so3 --chart quaternion -n 3 --seed 7");
    const auto c = run("sample --group so3 --chart quaternion -n 3 --seed 8");
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    std::istringstream lines(a.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto q = nlohmann::json::parse(line)["q"];
        ASSERT_EQ(q.size(), 4u);
        double norm = 0.0;
        for (const auto& x : q) norm += x.get<double>() * x.get<double>();
        EXPECT_NEAR(norm, 1.0, 1e-14);
        ++count;
    }
    EXPECT_EQ(count, 3);

    const auto csv = run("sample --group o3 --chart euler -n 4 --seed 1 --format csv");
    ASSERT_EQ(csv.status, 0) << csv.err;
    std::istringstream rows(csv.out);
    while (std::getline(rows, line)) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
}

TEST(Cli, EverySubcommandHasHelp) {
    for (const char* sub : {"density", "normalize", "sample", "check-chart", "dim", "reynolds", "orbit-moments",
                            "chart-change", "integrate"}) {
        const auto r = run(std::string(sub) + " --help");
        EXPECT_EQ(r.status, 0) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
    }
    EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, UsageErrorsExitWithOne) {
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("frobnicate").status, 1);
    EXPECT_EQ(run("dim --group so3").status, 1);
    EXPECT_EQ(run("dim --group su2 --order 2").status, 1);
    EXPECT_EQ(run("dim --group so3 --order -3").status, 1);
    EXPECT_EQ(run("sample --group so3 --chart angle").status, 1);
    EXPECT_EQ(run("density --chart builtin:so3-euler --point 0,-1,0").status, 1);
}

TEST(Cli, NumericalFailuresExitWithTwo) {
    const auto flat = write_file("flat.chart", "chart flat { params: t in [0, 1]; group: so(2); matrix: [[1, 0], [0, 1]]; }");
    const auto r = run("normalize --chart '" + flat.string() + "'");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("vanishes"), std::string::npos) << r.err;
}

TEST(Cli, MalformedChartsGivePositionedDiagnostics) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(fs::path(HAAR_TEST_DATA) / "malformed")) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    ASSERT_EQ(files.size(), 20u);
    for (const auto& f : files) {
        const auto r = run("check-chart --chart '" + f.string() + "'");
        EXPECT_EQ(r.status, 1) << f;
        // file:line:col: error: ...
        const std::string prefix = f.string() + ":";
        ASSERT_EQ(r.err.rfind(prefix, 0), 0u) << r.err;
        int line = 0, col = 0;
        EXPECT_EQ(std::sscanf(r.err.c_str() + prefix.size(), "%d:%d: error: ", &line, &col), 2) << r.err;
        EXPECT_GT(line, 0);
        EXPECT_GT(col, 0);
    }
}

TEST(Cli, ReynoldsAveragesATensorFile) {
    const auto t = write_file("diag.json", R"({"dim": 3, "order": 2, "entries": [1, 0, 0, 0, 2, 0, 0, 0, 3]})");
    const auto r = run("reynolds --group so3 --tensor '" + t.string() + "' --nodes 16 --format json");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["order"], 2);
    for (int k = 0; k < 9; ++k) EXPECT_NEAR(j["entries"][k].get<double>(), k % 4 == 0 ? 2.0 : 0.0, 1e-8);

    const auto bad = write_file("bad.json", R"({"dim": 3, "order": 2, "entries": [1, 0]})");
    EXPECT_EQ(run("reynolds --group so3 --tensor '" + bad.string() + "'").status, 1);
}

TEST(Cli, OutputFileMatchesStdout) {
    const fs::path out = scratch() / "dim.json";
    EXPECT_EQ(run("dim --group so3 --order 4 --format json --out '" + out.string() + "'").status, 0);
    EXPECT_EQ(slurp(out), run("dim --group so3 --order 4 --format json").out);
}
