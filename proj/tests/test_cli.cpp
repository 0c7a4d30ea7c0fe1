// Drives the installed binary end to end through /bin/sh. Covers the exit
// code contract (0 ok, 1 usage, 2 bad data, 3 broken invariants) and
// byte-identical reruns.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = FFARANK_CLI_PATH;
const std::string kData = FFARANK_TEST_DATA;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ffarank_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str(const std::string& leaf = "") const {
        return leaf.empty() ? path.string() : (path / leaf).string();
    }
};

int run_cmd(const std::string& cmd, const TempDir& dir, std::string* output = nullptr) {
    const std::string log = dir.str("cmd_output.txt");
    const int raw = std::system((cmd + " >" + log + " 2>&1").c_str());
    if (output != nullptr) {
        std::ifstream in(log);
        std::ostringstream os;
        os << in.rdbuf();
        *output = os.str();
    }
    REQUIRE(raw != -1);
    REQUIRE(WIFEXITED(raw));
    return WEXITSTATUS(raw);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

const std::string kFixture = kData + "/fixture_matches.csv";

}  // namespace

TEST_CASE("help exits zero, missing subcommand exits one") {
    TempDir dir;
    CHECK(run_cmd(kCli + " --help", dir) == 0);
    CHECK(run_cmd(kCli + " run --help", dir) == 0);
    CHECK(run_cmd(kCli, dir) == 1);
    CHECK(run_cmd(kCli + " frobnicate", dir) == 1);
    CHECK(run_cmd(kCli + " run", dir) == 1);  // --input is required
}

TEST_CASE("unreadable input is a data error (exit 2)") {
    TempDir dir;
    std::string output;
    CHECK(run_cmd(kCli + " ingest -i " + dir.str("missing.csv"), dir, &output) == 2);
    CHECK(output.find("data error") != std::string::npos);
    CHECK(run_cmd(kCli + " report --scores " + dir.str("missing.jsonl"), dir) == 2);
}

TEST_CASE("invalid configuration is a contract violation (exit 3)") {
    TempDir dir;
    std::string output;
    CHECK(run_cmd(kCli + " run -i " + kFixture + " --elo-k 0 --out " + dir.str("out"), dir,
                  &output) == 3);
    CHECK(output.find("contract violation") != std::string::npos);
}

TEST_CASE("ingest reports stream statistics as json") {
    TempDir dir;
    std::string output;
    REQUIRE(run_cmd(kCli + " ingest -i " + kFixture, dir, &output) == 0);
    CHECK(output.find("\"rows_parsed\": 12") != std::string::npos);
    CHECK(output.find("\"matches\": 3") != std::string::npos);
    CHECK(output.find("\"players\": 4") != std::string::npos);
    CHECK(output.find("\"row_errors\": 0") != std::string::npos);
}

TEST_CASE("simulate writes a dataset that ingests losslessly") {
    TempDir dir;
    const std::string csv = dir.str("synthetic.csv");
    REQUIRE(run_cmd(kCli + " simulate --players 50 --matches 30 --per-match 10 --seed 5 --out " +
                        csv,
                    dir) == 0);
    std::string output;
    REQUIRE(run_cmd(kCli + " ingest -i " + csv, dir, &output) == 0);
    CHECK(output.find("\"rows_parsed\": 300") != std::string::npos);
    CHECK(output.find("\"matches\": 30") != std::string::npos);
    CHECK(output.find("\"row_errors\": 0") != std::string::npos);
    CHECK(output.find("\"undersized_matches\": 0") != std::string::npos);

    // invalid generator settings are data errors
    CHECK(run_cmd(kCli + " simulate --noise 0 --out " + dir.str("x.csv"), dir) == 2);
}

TEST_CASE("run produces the full output bundle") {
    TempDir dir;
    const std::string out = dir.str("out");
    REQUIRE(run_cmd(kCli + " run -i " + kFixture + " --out " + out + " --audit-orders", dir) ==
            0);
    for (const char* leaf : {"summary.csv", "summary.json", "scores.jsonl", "profiles.jsonl",
                             "ratings.jsonl", "orders.jsonl", "trajectories_all.csv",
                             "trajectories_top_tier.csv", "trajectories_frequent.csv"}) {
        INFO(leaf);
        CHECK(fs::exists(fs::path(out) / leaf));
    }
    const std::string summary = slurp(out + "/summary.csv");
    CHECK(count_lines(summary) == 4);  // header + every setup
    CHECK(summary.find("all,") != std::string::npos);
    CHECK(summary.find("top_tier,") != std::string::npos);
    CHECK(summary.find("frequent,") != std::string::npos);
    CHECK(count_lines(slurp(out + "/scores.jsonl")) == 3);
    CHECK(count_lines(slurp(out + "/orders.jsonl")) == 3);
    CHECK(count_lines(slurp(out + "/profiles.jsonl")) == 4);
    CHECK(count_lines(slurp(out + "/ratings.jsonl")) == 12);
}

TEST_CASE("a single setup renders a single row") {
    TempDir dir;
    const std::string out = dir.str("out");
    REQUIRE(run_cmd(kCli + " run -i " + kFixture + " --setup all --out " + out, dir) == 0);
    CHECK(count_lines(slurp(out + "/summary.csv")) == 2);
    CHECK(run_cmd(kCli + " run -i " + kFixture + " --setup nonsense --out " + out, dir) == 2);
}

TEST_CASE("reruns with the same seed are byte-identical") {
    TempDir dir;
    const std::string out1 = dir.str("run1");
    const std::string out2 = dir.str("run2");
    const std::string args = " run -i " + kFixture + " --seed 7 --out ";
    REQUIRE(run_cmd(kCli + args + out1, dir) == 0);
    REQUIRE(run_cmd(kCli + args + out2, dir) == 0);
    CHECK(slurp(out1 + "/scores.jsonl") == slurp(out2 + "/scores.jsonl"));
    CHECK(slurp(out1 + "/summary.csv") == slurp(out2 + "/summary.csv"));
    CHECK(slurp(out1 + "/summary.json") == slurp(out2 + "/summary.json"));
    CHECK(slurp(out1 + "/ratings.jsonl") == slurp(out2 + "/ratings.jsonl"));
    CHECK(slurp(out1 + "/trajectories_all.csv") == slurp(out2 + "/trajectories_all.csv"));
}

TEST_CASE("report recomputes the table from the score log") {
    TempDir dir;
    const std::string out = dir.str("out");
    REQUIRE(run_cmd(kCli + " run -i " + kFixture + " --out " + out, dir) == 0);
    const std::string rendered = dir.str("summary2.csv");
    REQUIRE(run_cmd(kCli + " report --scores " + out + "/scores.jsonl --out " + rendered, dir) ==
            0);

    // the all-players row must match the run's own summary exactly
    auto find_row = [](const std::string& csv, const std::string& prefix) {
        std::istringstream lines(csv);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.rfind(prefix, 0) == 0) return line;
        }
        return std::string();
    };
    const std::string from_run = find_row(slurp(out + "/summary.csv"), "all,");
    const std::string from_report = find_row(slurp(rendered), "all,");
    CHECK_FALSE(from_run.empty());
    CHECK(from_run == from_report);
}

TEST_CASE("custom column names and delimiter reach the parser") {
    TempDir dir;
    // rewrite the fixture with a renamed player column and semicolons
    const std::string original = slurp(kFixture);
    std::string renamed = original;
    const auto pos = renamed.find("player_name");
    REQUIRE(pos != std::string::npos);
    renamed.replace(pos, std::string("player_name").size(), "nickname");
    for (auto& c : renamed) {
        if (c == ',') c = ';';
    }
    const std::string path = dir.str("renamed.csv");
    std::ofstream(path) << renamed;

    std::string output;
    REQUIRE(run_cmd(kCli + " ingest -i " + path + " --delimiter ';' --col player_name=nickname",
                    dir, &output) == 0);
    CHECK(output.find("\"matches\": 3") != std::string::npos);
    // without the remap the header is missing a required column
    CHECK(run_cmd(kCli + " ingest -i " + path + " --delimiter ';'", dir) == 2);
}
