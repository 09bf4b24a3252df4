#include <sys/wait.h>

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace {

const std::string kData = CITERANK_TEST_DATA_DIR;
const std::string kSmall = kData + "/small/";

struct Result {
    int status = -1;
    std::string out;  // stdout
    std::string err;  // stderr
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = std::filesystem::temp_directory_path() / ("citerank-cli-" + std::to_string(rd()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    Result run(const std::string& args, const std::string& env = "") const {
        const std::string err_path = path("stderr.txt");
        const std::string cmd = env + (env.empty() ? "" : " ") + "'" CITERANK_CLI_PATH "' " + args + " 2>'" +
                                err_path + "'";
        Result r;
        FILE* pipe = popen(cmd.c_str(), "r");
        if (!pipe) return r;
        char buf[4096];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
        const int raw = pclose(pipe);
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.err = slurp(err_path);
        return r;
    }

    static std::string inputs(const std::string& statements = "statements.ndjson") {
        return "--statements '" + kSmall + statements + "' --references '" + kSmall +
               "references.ndjson' --pubs '" + kSmall + "pubs.ndjson' --affiliations '" + kSmall +
               "affiliations.ndjson'";
    }

    std::string aggregate(const std::string& entity) const {
        const auto store = path(entity + ".store");
        const auto r = run("aggregate " + inputs() + " --entity " + entity + " --out '" + store + "'");
        EXPECT_EQ(r.status, 0) << r.err;
        return store;
    }

    static void write(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

private:
    std::filesystem::path dir_;
};

TEST_F(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run("--help").status, 0);
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("frobnicate").status, 1);
    EXPECT_EQ(run("rank").status, 1);  // missing STORE
    EXPECT_EQ(run("rank x --no-such-flag 1").status, 1);
}

TEST_F(Cli, AggregateWritesStoreToStdout) {
    const auto r = run("aggregate " + inputs());
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out,
              "{\"kind\":\"journal\",\"id\":\"J1\",\"supporting\":2,\"mentioning\":1,\"contrasting\":1,"
              "\"references\":3}\n"
              "{\"kind\":\"journal\",\"id\":\"J2\",\"supporting\":1,\"mentioning\":1,\"contrasting\":0,"
              "\"references\":3}\n"
              "{\"diagnostics\":{\"kind\":\"journal\",\"from_year\":2024,\"to_year\":2024,\"entities\":2,"
              "\"statements_seen\":7,\"statements_counted\":6,\"statements_out_of_window\":1,"
              "\"statements_unresolved\":0,\"references_seen\":8,\"references_counted\":6,"
              "\"references_duplicate\":1,\"references_out_of_window\":1,\"references_unresolved\":0,"
              "\"publication_overwrites\":0,\"affiliation_overwrites\":0}}\n");
    EXPECT_NE(r.err.find("\"summary\":\"aggregate\""), std::string::npos);
}

TEST_F(Cli, MissingInputFlagIsUsageError) {
    const auto r = run("aggregate --references '" + kSmall + "references.ndjson'");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("--statements"), std::string::npos);
}

TEST_F(Cli, StrictModeNamesFileAndLine) {
    const auto r = run("aggregate " + inputs("bad_statements.ndjson"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("bad_statements.ndjson:3:"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, LenientModeSkipsAndSummarizes) {
    const auto r = run("aggregate " + inputs("bad_statements.ndjson") + " --mode lenient");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.err.find("\"skipped\":1,\"first_bad_line\":3"), std::string::npos) << r.err;
    EXPECT_NE(r.out.find("\"statements_seen\":6"), std::string::npos);
}

TEST_F(Cli, MissingFilesAreIoErrors) {
    EXPECT_EQ(run("rank '" + path("absent.store") + "'").status, 3);
    EXPECT_EQ(run("aggregate " + inputs("absent.ndjson")).status, 3);
    EXPECT_EQ(run("rank '" + kData + "/table1.store.ndjson' --out '" + path("no/such/dir/out.csv") + "'").status, 3);
    EXPECT_EQ(run("--config '" + path("absent.conf") + "' rank '" + kData + "/table1.store.ndjson'").status, 3);
}

TEST_F(Cli, CorruptStoreIsDataError) {
    const auto store = path("corrupt.store");
    write(store, "{\"kind\":\"journal\",\"id\":\"J1\",\"supporting\":-4}\n");
    EXPECT_EQ(run("rank '" + store + "'").status, 2);
}

TEST_F(Cli, BadFlagValuesAreUsageErrors) {
    const std::string store = "'" + kData + "/table1.store.ndjson'";
    EXPECT_EQ(run("rank " + store + " --log-base 1").status, 1);
    EXPECT_EQ(run("rank " + store + " --by h-index").status, 1);
    EXPECT_EQ(run("rank " + store + " --top 0").status, 1);
    EXPECT_EQ(run("rank " + store + " --entity journal").status, 1);  // store holds institutions
}

TEST_F(Cli, RankByUsiCsv) {
    const auto store = aggregate("journal");
    const auto r = run("rank '" + store + "' --by usi");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out,
              "kind,id,supporting,mentioning,contrasting,references,usi_exact,si_exact,usi_display,si_display,rank\n"
              "journal,J2,1,1,0,3,1,0.47712125471966244,1.00,0.48,1\n"
              "journal,J1,2,1,1,3,0.6666666666666666,0.1249387366082999,0.67,0.12,2\n");
}

TEST_F(Cli, MinValencedExcludesAndReports) {
    const auto store = aggregate("journal");
    const auto r = run("rank '" + store + "' --min-valenced 2 --format json");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.find("\"J2\""), std::string::npos);
    EXPECT_NE(r.out.find("\"J1\""), std::string::npos);
    EXPECT_NE(r.err.find("\"below_min_valenced\":1"), std::string::npos) << r.err;
}

TEST_F(Cli, GoldenMarkdown) {
    for (const char* table : {"table1", "table2"}) {
        const auto r = run("rank '" + kData + "/" + table + ".store.ndjson' --format md");
        ASSERT_EQ(r.status, 0) << r.err;
        EXPECT_EQ(r.out, slurp(kData + "/" + table + ".golden.md")) << table;
    }
}

TEST_F(Cli, OutFlagWritesFile) {
    const auto out = path("t1.md");
    const auto r = run("rank '" + kData + "/table1.store.ndjson' --format md --out '" + out + "'");
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(out), slurp(kData + "/table1.golden.md"));
}

TEST_F(Cli, ImpliedReferencesCheckDistinguishesLogBase) {
    const std::string args = "rank '" + kData + "/table1.store.ndjson' --reported-si '" + kData +
                             "/table1.reported_si.ndjson'";
    const auto base10 = run(args);
    EXPECT_EQ(base10.status, 0);
    EXPECT_NE(base10.err.find("\"violations\":0"), std::string::npos) << base10.err;
    EXPECT_NE(base10.err.find("\"status\":\"PASSED\""), std::string::npos);

    const auto base_e = run(args + " --log-base e");
    EXPECT_EQ(base_e.status, 0);
    EXPECT_NE(base_e.err.find("\"violations\":10"), std::string::npos) << base_e.err;
    EXPECT_NE(base_e.err.find("\"status\":\"FAILED\""), std::string::npos);
}

TEST_F(Cli, CorrelateAgainstReportedSi) {
    const auto r = run("correlate '" + kData + "/table2.store.ndjson' --by si --external '" + kData +
                       "/table2.reported_si.ndjson'");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto pos = r.out.find("\"r\":");
    ASSERT_NE(pos, std::string::npos) << r.out;
    EXPECT_GT(std::stod(r.out.substr(pos + 4)), 0.99);
    EXPECT_NE(r.out.find("\"matched\":10,\"unmatched\":0"), std::string::npos) << r.out;
}

TEST_F(Cli, CorrelateCountsRankedEntitiesWithoutExternalValue) {
    const auto external = path("external.ndjson");
    std::string reported = slurp(kData + "/table2.reported_si.ndjson");
    reported = reported.substr(reported.find('\n') + 1);  // drop Nature
    write(external, reported + "{\"id\":\"Unranked Journal\",\"value\":1}\n");
    const auto r = run("correlate '" + kData + "/table2.store.ndjson' --external '" + external + "'");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("\"metric\":\"usi\""), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"matched\":9,\"unmatched\":1"), std::string::npos) << r.out;
    EXPECT_NE(r.err.find("Nature"), std::string::npos) << r.err;

    write(external, "{\"id\":\"Nature\",\"value\":1}\n");
    EXPECT_EQ(run("correlate '" + kData + "/table2.store.ndjson' --external '" + external + "'").status, 2);
}

TEST_F(Cli, CorrelateNeedsExternal) {
    EXPECT_EQ(run("correlate '" + kData + "/table2.store.ndjson'").status, 1);
}

TEST_F(Cli, FieldsBreakdown) {
    const auto store = aggregate("institution-field");
    const auto r = run("fields '" + store + "'");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
              "institution,field,supporting,mentioning,contrasting,references,usi_exact,si_exact");
    EXPECT_NE(r.out.find("\nI2,Chemistry,2,1,1,4,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\nI1,Physics,1,0,0,1,"), std::string::npos) << r.out;

    EXPECT_EQ(run("fields '" + aggregate("journal") + "'").status, 1);
}

TEST_F(Cli, ValidateReportsPerFile) {
    const auto clean = run("validate " + inputs());
    EXPECT_EQ(clean.status, 0) << clean.err;
    EXPECT_EQ(std::count(clean.out.begin(), clean.out.end(), '\n'), 4);
    EXPECT_EQ(clean.out.find("\"defects\":1"), std::string::npos);

    const auto dirty = run("validate " + inputs("bad_statements.ndjson"));
    EXPECT_EQ(dirty.status, 2);
    EXPECT_NE(dirty.out.find("\"first_bad_line\":3"), std::string::npos) << dirty.out;
}

TEST_F(Cli, ConfigFileAndEnvironmentPrecedence) {
    const auto store = aggregate("journal");
    const auto conf = path("run.conf");
    write(conf, "# ranking defaults\nby = usi\nformat = md\n");

    const auto from_file = run("--config '" + conf + "' rank '" + store + "'");
    ASSERT_EQ(from_file.status, 0) << from_file.err;
    EXPECT_EQ(from_file.out.find("| J2 "), from_file.out.find("| J"));  // usi puts J2 first

    const auto flag_wins = run("--config '" + conf + "' rank '" + store + "' --by si --format csv");
    ASSERT_EQ(flag_wins.status, 0);
    EXPECT_EQ(flag_wins.out.rfind("kind,id", 0), 0u);

    const auto from_env = run("rank '" + store + "'", "CITERANK_CONFIG='" + conf + "'");
    ASSERT_EQ(from_env.status, 0);
    EXPECT_EQ(from_env.out, from_file.out);

    write(conf, "by = median\n");
    EXPECT_EQ(run("--config '" + conf + "' rank '" + store + "'").status, 1);
}

}  // namespace
