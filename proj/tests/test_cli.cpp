#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return WARPSPEC_CLI_PATH; }

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(cli_path()) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file + " 2>/dev/null";
    else cmd += " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "warpspec_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path path = temp_dir() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

const char* kSmallConfig =
    "n = 3\n"
    "p = 0\n"
    "a = -1\n"
    "b = -1\n"
    "epsilon = 1.0\n"
    "c = 2.0\n"
    "kmax = 1\n"
    "ladder = [10, 20, 40]\n"
    "cutoff = 12.0\n"
    "tolerance = 0.08\n"
    "[grid]\n"
    "n_min = 700\n";

}  // namespace

TEST_CASE("predict renders one row per degree with theorem tags") {
    const fs::path out = temp_dir() / "predict.txt";
    REQUIRE(run("predict --n 4 --a -1 --b -1", out.string()) == 0);
    const std::string table = slurp(out);
    CHECK(table.find("{0} u [0.25, inf)") != std::string::npos);  // p = N/2 row
    CHECK(table.find("case a=-1 b<0") != std::string::npos);
    int rows = 0;
    for (char ch : table) rows += (ch == '\n');
    CHECK(rows == 6);  // header + p = 0..4
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("predict --n 4 --a 1 --b -1") == 2);       // a > -1
    CHECK(run("compute --config /nonexistent.toml") == 2);
    CHECK(run("bogus") == 2);
    const fs::path empty = write_config("empty_sweep.toml",
                                        "n = 3\np = 2\na = -1\nb = -1\n"
                                        "epsilon = 1.0\nc = 2.0\nkmax = 0\n"
                                        "ladder = [10, 20, 40]\n"
                                        "family = \"type2\"\n");
    CHECK(run("compute --config " + empty.string()) == 2);  // empty type-2 sweep
}

TEST_CASE("compute writes artifacts and passes on the hyperbolic benchmark") {
    const fs::path config = write_config("small.toml", kSmallConfig);
    const fs::path out_a = temp_dir() / "out_a";
    const int code =
        run("compute --config " + config.string() + " --out " + out_a.string());
    CHECK(code == 0);
    const std::string csv = slurp(out_a / "modes.csv");
    CHECK(csv.rfind("mode_k,lambda,L,bottom,uncertainty,classification", 0) == 0);
    const auto report = nlohmann::json::parse(slurp(out_a / "report.json"));
    CHECK(report.at("verdict") == "pass");
    CHECK(report.at("predicted").at("ac").at("bottom").get<double>() == 1.0);
    CHECK(report.at("modes").size() == 2);
}

TEST_CASE("byte-identical artifacts across repeated and re-threaded runs") {
    const fs::path config = write_config("small.toml", kSmallConfig);
    const fs::path out_a = temp_dir() / "det_a";
    const fs::path out_b = temp_dir() / "det_b";
    const fs::path out_c = temp_dir() / "det_c";
    REQUIRE(run("compute --config " + config.string() + " --out " + out_a.string()) == 0);
    REQUIRE(run("compute --config " + config.string() + " --out " + out_b.string()) == 0);
    setenv("WARP_THREADS", "1", 1);
    REQUIRE(run("compute --config " + config.string() + " --out " + out_c.string()) == 0);
    unsetenv("WARP_THREADS");
    CHECK(slurp(out_a / "modes.csv") == slurp(out_b / "modes.csv"));
    CHECK(slurp(out_a / "report.json") == slurp(out_b / "report.json"));
    CHECK(slurp(out_a / "modes.csv") == slurp(out_c / "modes.csv"));
}

TEST_CASE("flags override the config file") {
    const fs::path config = write_config("small.toml", kSmallConfig);
    const fs::path out = temp_dir() / "flags";
    REQUIRE(run("compute --config " + config.string() + " --kmax 0 --out " +
                out.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report.at("modes").size() == 1);
    CHECK(report.at("params").at("kmax") == 0);
}

TEST_CASE("verify emits parseable JSON lines and honors the mutation flag") {
    const fs::path out = temp_dir() / "verify.jsonl";
    REQUIRE(run("verify --step 0.02 --levels 3", out.string()) == 0);
    std::ifstream in(out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto row = nlohmann::json::parse(line);
        CHECK(row.contains("check"));
        CHECK(row.contains("residual"));
        CHECK(row.at("params").contains("lambda"));
        ++rows;
    }
    CHECK(rows == 9);  // 3 checks x 3 levels
    CHECK(run("verify --step 0.02 --levels 3 --mutate") != 0);
}
