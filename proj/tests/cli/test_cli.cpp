// End-to-end tests driving the taxgraph binary as a subprocess against the
// committed fixture set.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = TAXGRAPH_CLI_PATH;
const fs::path kFixtures = fs::path(TAXGRAPH_FIXTURE_DIR) / "standard";

// Frozen fixture LEIs (see tests/fixtures/standard/entities.csv).
const std::string kIrishBottom = "IRISHBOTTOMAAAAAAA52";
const std::string kIrishConduit = "IRISHCONDUITAAAAAA37";
const std::string kIrishTop = "IRISHTOPAAAAAAAAAA16";
const std::string kDuckParent = "DUCKPARENTAAAAAAAA43";
const std::string kDuckHaven = "DUCKHAVENAAAAAAAAA65";
const std::string kDuckChild = "DUCKCHILDAAAAAAAAA11";

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("taxgraph_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot open " << path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string quoted(const std::string& arg) { return "'" + arg + "'"; }

CliResult run_cli(const std::vector<std::string>& args, const TempDir& scratch) {
    fs::path out_file = scratch.path / "cli_stdout.txt";
    fs::path err_file = scratch.path / "cli_stderr.txt";
    std::string command = quoted(kCli);
    for (const std::string& arg : args) command += " " + quoted(arg);
    command += " > " + quoted(out_file.string()) + " 2> " + quoted(err_file.string());
    int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

// Ingests the standard fixtures into <scratch>/bundle; returns the result.
CliResult ingest_standard(const TempDir& scratch, const fs::path& bundle) {
    return run_cli({"ingest", "--entities", (kFixtures / "entities.csv").string(),
                    "--relationships", (kFixtures / "relationships.csv").string(),
                    "--indicators", (kFixtures / "indicators.csv").string(),
                    "--legal-forms", (kFixtures / "legalforms.csv").string(),
                    "--out", bundle.string()},
                   scratch);
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("ingest writes a loadable bundle and a contents report") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    CliResult result = ingest_standard(scratch, bundle);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("Company") != std::string::npos);
    CHECK(result.out.find("17") != std::string::npos);  // 16 records + 1 stub
    for (const char* name : {"entities.csv", "relationships.csv", "indicators.csv",
                             "legalforms.csv", "manifest.json"}) {
        CHECK(fs::exists(bundle / name));
    }
}

TEST_CASE("ingest with a missing input names the file and exits 2") {
    TempDir scratch;
    CliResult result = run_cli(
        {"ingest", "--entities", (kFixtures / "entities.csv").string(), "--relationships",
         (scratch.path / "nope.csv").string(), "--indicators",
         (kFixtures / "indicators.csv").string(), "--legal-forms",
         (kFixtures / "legalforms.csv").string(), "--out", (scratch.path / "bundle").string()},
        scratch);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("nope.csv") != std::string::npos);
}

TEST_CASE("ingest keeps going past one bad row and warns") {
    TempDir scratch;
    fs::path entities = scratch.path / "entities.csv";
    {
        std::ofstream out(entities);
        out << slurp(kFixtures / "entities.csv");
        out << "BADROWAAAAAAAAAAAA00,Only,Three\n";
    }
    CliResult result = run_cli(
        {"ingest", "--entities", entities.string(), "--relationships",
         (kFixtures / "relationships.csv").string(), "--indicators",
         (kFixtures / "indicators.csv").string(), "--legal-forms",
         (kFixtures / "legalforms.csv").string(), "--out", (scratch.path / "bundle").string()},
        scratch);
    CHECK(result.exit_code == 0);
    CHECK(result.err.find("column count") != std::string::npos);
    CHECK(result.out.find("warnings: 1") != std::string::npos);
}

TEST_CASE("detect builtins and DSL files agree on the planted constructs") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);

    fs::path duck_csv = scratch.path / "duck.csv";
    CliResult duck = run_cli({"detect", "--graph", bundle.string(), "--builtin", "duck-rabbit",
                              "--out", duck_csv.string(), "--quiet"},
                             scratch);
    CHECK(duck.exit_code == 0);
    auto duck_lines = csv_lines(slurp(duck_csv));
    REQUIRE(duck_lines.size() == 2);
    CHECK(duck_lines[0] == "a,b,c");
    CHECK(duck_lines[1] == kDuckParent + "," + kDuckHaven + "," + kDuckChild);

    fs::path irish_csv = scratch.path / "irish.csv";
    CliResult irish = run_cli({"detect", "--graph", bundle.string(), "--builtin", "double-irish",
                               "--out", irish_csv.string(), "--quiet"},
                              scratch);
    CHECK(irish.exit_code == 0);
    auto irish_lines = csv_lines(slurp(irish_csv));
    REQUIRE(irish_lines.size() == 2);
    CHECK(irish_lines[0] == "a,b,c,pathlen_a_b,pathlen_b_c");
    CHECK(irish_lines[1] ==
          kIrishBottom + "," + kIrishConduit + "," + kIrishTop + ",2,1");

    // the DSL file runs the same pattern
    fs::path dsl_csv = scratch.path / "dsl.csv";
    CliResult dsl = run_cli({"detect", "--graph", bundle.string(), "--pattern-file",
                             (kFixtures / "double_irish.dsl").string(), "--out",
                             dsl_csv.string(), "--quiet"},
                            scratch);
    CHECK(dsl.exit_code == 0);
    CHECK(slurp(dsl_csv) == slurp(irish_csv));

    // relaxed variant keeps the full chain visible
    CliResult relaxed = run_cli({"detect", "--graph", bundle.string(), "--builtin",
                                 "double-irish", "--relaxed"},
                                scratch);
    CHECK(relaxed.exit_code == 0);
    CHECK(relaxed.out.find(kIrishTop) != std::string::npos);

    // haven set parameter: KY alone finds nothing on this fixture
    CliResult ky_only = run_cli({"detect", "--graph", bundle.string(), "--builtin",
                                 "duck-rabbit", "--havens", "KY"},
                                scratch);
    CHECK(ky_only.exit_code == 0);
    CHECK(ky_only.out.find("0 match(es)") != std::string::npos);
}

TEST_CASE("detect with a DSL syntax error exits 2 with a position") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path bad = scratch.path / "bad.dsl";
    {
        std::ofstream out(bad);
        out << "a -[sideways]-> b;\n";
    }
    CliResult result =
        run_cli({"detect", "--graph", bundle.string(), "--pattern-file", bad.string()}, scratch);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("line 1") != std::string::npos);
    CHECK(result.err.find("column") != std::string::npos);
}

TEST_CASE("stats per-capita ranks descending and LI leads the fixture") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path csv = scratch.path / "percapita.csv";
    CliResult result = run_cli({"stats", "--graph", bundle.string(), "--metric", "per-capita",
                                "--out", csv.string(), "--quiet"},
                               scratch);
    CHECK(result.exit_code == 0);
    auto lines = csv_lines(slurp(csv));
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "country,companies,population,ratio");
    CHECK(lines[1].substr(0, 3) == "LI,");
}

TEST_CASE("stats region-share computes the Delaware-style shares") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path csv = scratch.path / "region.csv";
    CliResult result =
        run_cli({"stats", "--graph", bundle.string(), "--metric", "region-share", "--country",
                 "US", "--region", "DE", "--out", csv.string(), "--quiet"},
                scratch);
    CHECK(result.exit_code == 0);
    auto lines = csv_lines(slurp(csv));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "0.666666667,0.5");
}

TEST_CASE("stats tax-delta-hq-legal --divergent-only is a single-value CSV") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path csv = scratch.path / "delta.csv";
    CliResult result = run_cli({"stats", "--graph", bundle.string(), "--metric",
                                "tax-delta-hq-legal", "--divergent-only", "--out", csv.string(),
                                "--quiet"},
                               scratch);
    CHECK(result.exit_code == 0);
    auto lines = csv_lines(slurp(csv));
    REQUIRE(lines.size() == 2);
    // only NOISEKY diverges: hq US (25.9) - legal KY (0) = 25.9
    CHECK(lines[0] == "meanDeltaPp,samples,excluded");
    CHECK(lines[1] == "25.9,1,0");
}

TEST_CASE("stats region-share over an empty denominator exits 3") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    CliResult result = run_cli({"stats", "--graph", bundle.string(), "--metric", "region-share",
                                "--country", "ZZ", "--region", "01"},
                               scratch);
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("ZZ") != std::string::npos);
}

TEST_CASE("stats unknown metric exits 2 and lists the valid ones") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    CliResult result =
        run_cli({"stats", "--graph", bundle.string(), "--metric", "bogus"}, scratch);
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("per-capita") != std::string::npos);
    CHECK(result.err.find("density") != std::string::npos);
}

TEST_CASE("link-cities, density and offline fetch-areas work end to end") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);

    CliResult link = run_cli({"link-cities", "--graph", bundle.string(), "--candidates",
                              (kFixtures / "citycandidates.csv").string()},
                             scratch);
    CHECK(link.exit_code == 0);
    CHECK(fs::exists(bundle / "citylinks.csv"));

    // density on the fixture areas: Vaduz (3 companies, 17.3 km^2) leads
    fs::path density_csv = scratch.path / "density.csv";
    CliResult density = run_cli({"stats", "--graph", bundle.string(), "--metric", "density",
                                 "--areas", (kFixtures / "areas.csv").string(), "--min", "1",
                                 "--out", density_csv.string(), "--quiet"},
                                scratch);
    CHECK(density.exit_code == 0);
    auto lines = csv_lines(slurp(density_csv));
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "role,cityId,city,country,companies,areaSqKm,density");
    CHECK(lines[1].find("hq,Q1844,Vaduz,LI,3,17.3,") == 0);

    // offline fetch against the canned response file
    fs::path areas_out = scratch.path / "fetched_areas.csv";
    CliResult fetch = run_cli({"fetch-areas", "--graph", bundle.string(), "--offline",
                               (kFixtures / "canned_areas.json").string(), "--out",
                               areas_out.string(), "--quiet"},
                              scratch);
    CHECK(fetch.exit_code == 0);
    std::string fetched = slurp(areas_out);
    CHECK(fetched.find("externalId,areaSqKm") == 0);
    CHECK(fetched.find("Q1844,17.3") != std::string::npos);
    // duplicate binding for Q727 keeps the largest value
    CHECK(fetched.find("Q727,219.3") != std::string::npos);
    CHECK(fetched.find("165.8") == std::string::npos);
}

TEST_CASE("fetch-areas without links warns and writes an empty CSV") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path areas_out = scratch.path / "areas.csv";
    CliResult result = run_cli({"fetch-areas", "--graph", bundle.string(), "--offline",
                                (kFixtures / "canned_areas.json").string(), "--out",
                                areas_out.string(), "--quiet"},
                               scratch);
    CHECK(result.exit_code == 0);
    CHECK(result.err.find("no linked cities") != std::string::npos);
    CHECK(csv_lines(slurp(areas_out)).size() == 1);  // header only
}

TEST_CASE("fetch-areas against an unreachable endpoint exits 3") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    REQUIRE(run_cli({"link-cities", "--graph", bundle.string(), "--candidates",
                     (kFixtures / "citycandidates.csv").string(), "--quiet"},
                    scratch)
                .exit_code == 0);
    CliResult result = run_cli({"fetch-areas", "--graph", bundle.string(), "--endpoint",
                                "http://127.0.0.1:9/sparql", "--retries", "1", "--timeout", "2"},
                               scratch);
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("failed") != std::string::npos);
}

TEST_CASE("export writes one CSV per metric plus a manifest") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path out_dir = scratch.path / "export";
    CliResult result = run_cli({"export", "--graph", bundle.string(), "--out", out_dir.string(),
                                "--areas", (kFixtures / "areas.csv").string(), "--min", "1"},
                               scratch);
    CHECK(result.exit_code == 0);
    for (const char* name :
         {"per-capita.csv", "per-gdp.csv", "address-concentration.csv", "divergence.csv",
          "tax-delta-hq-legal.csv", "tax-delta-parent-child.csv", "multinational-share.csv",
          "density.csv", "child-stats.csv", "longest-chain.csv", "chain-histogram.csv",
          "discrepancies.csv", "manifest.json"}) {
        CHECK_MESSAGE(fs::exists(out_dir / name), name);
    }
}

TEST_CASE("a tampered bundle is rejected with exit 3") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    {
        std::ofstream out(bundle / "entities.csv", std::ios::app);
        out << "tampered\n";
    }
    CliResult result =
        run_cli({"stats", "--graph", bundle.string(), "--metric", "per-capita"}, scratch);
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("digest") != std::string::npos);
}

TEST_CASE("longest chain via CLI reports the planted chain") {
    TempDir scratch;
    fs::path bundle = scratch.path / "bundle";
    REQUIRE(ingest_standard(scratch, bundle).exit_code == 0);
    fs::path csv = scratch.path / "chain.csv";
    CliResult result = run_cli({"stats", "--graph", bundle.string(), "--metric", "longest-chain",
                                "--out", csv.string(), "--quiet"},
                               scratch);
    CHECK(result.exit_code == 0);
    auto lines = csv_lines(slurp(csv));
    // noisebe -> irishtop is only 2 long; the irish chain has 4 companies
    REQUIRE(lines.size() == 5);
    CHECK(lines[1] == "1," + kIrishBottom);
    CHECK(lines[4] == "4," + kIrishTop);
}
