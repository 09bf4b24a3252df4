#include "citerank/config.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "citerank/driver.hpp"
#include "citerank/error.hpp"
#include "test_support.hpp"

namespace citerank {
namespace {

TEST(RunConfig, DefaultsMatchDemonstrationWindow) {
    RunConfig cfg;
    EXPECT_EQ(cfg.window, (Window{2024, 2024}));
    EXPECT_EQ(cfg.si_config.log_base, 10.0);
    EXPECT_EQ(cfg.si_config.exponent, 2.0);
    EXPECT_EQ(cfg.min_valenced, 0u);
    EXPECT_EQ(cfg.mode, Mode::strict);
}

TEST(RunConfig, SetParsesEveryKey) {
    RunConfig cfg;
    cfg.set("statements", "s.ndjson");
    cfg.set("--from-year", "2020");
    cfg.set("to-year", " 2025 ");
    cfg.set("entity", "institution");
    cfg.set("by", "usi");
    cfg.set("exponent", "3");
    cfg.set("log-base", "e");
    cfg.set("min-valenced", "50");
    cfg.set("min-references", "7");
    cfg.set("top", "10");
    cfg.set("format", "md");
    cfg.set("mode", "lenient");
    cfg.set("shards", "4");
    EXPECT_EQ(cfg.inputs.statements, "s.ndjson");
    EXPECT_EQ(cfg.window, (Window{2020, 2025}));
    EXPECT_EQ(cfg.kind, EntityKind::institution);
    EXPECT_EQ(cfg.metric, Metric::usi);
    EXPECT_EQ(cfg.si_config.exponent, 3.0);
    EXPECT_EQ(cfg.si_config.log_base, std::numbers::e);
    EXPECT_EQ(cfg.min_valenced, 50u);
    EXPECT_EQ(cfg.min_references, 7u);
    EXPECT_EQ(cfg.top_k, 10u);
    EXPECT_EQ(cfg.format, Format::markdown);
    EXPECT_EQ(cfg.mode, Mode::lenient);
    EXPECT_EQ(cfg.shards, 4u);
}

TEST(RunConfig, RejectsBadValues) {
    RunConfig cfg;
    EXPECT_THROW(cfg.set("log-base", "1"), UsageError);
    EXPECT_THROW(cfg.set("log-base", "ten"), UsageError);
    EXPECT_THROW(cfg.set("exponent", "0"), UsageError);
    EXPECT_THROW(cfg.set("top", "0"), UsageError);
    EXPECT_THROW(cfg.set("entity", "country"), UsageError);
    EXPECT_THROW(cfg.set("min-valenced", "-1"), UsageError);
    EXPECT_THROW(cfg.set("no-such-flag", "1"), UsageError);
    EXPECT_THROW(cfg.set("shards", "0"), UsageError);
}

TEST(RunConfig, EveryFlagHasAFileKey) {
    RunConfig cfg;
    for (auto key : RunConfig::keys()) {
        std::string value = "x";
        if (key == "from-year" || key == "to-year") value = "2024";
        if (key == "exponent" || key == "min-valenced" || key == "min-references" || key == "top" || key == "shards")
            value = "2";
        if (key == "log-base") value = "10";
        if (key == "entity") value = "field";
        if (key == "by") value = "si";
        if (key == "format") value = "json";
        if (key == "mode") value = "strict";
        EXPECT_NO_THROW(cfg.set(key, value)) << key;
    }
}

TEST(RunConfig, LoadFile) {
    testing::TempDir dir;
    const auto path = dir.file("run.conf");
    testing::write_text(path, "# comment\nfrom-year = 2023\n\nentity=institution  # trailing\nlog-base = e\n");
    RunConfig cfg;
    cfg.load_file(path);
    EXPECT_EQ(cfg.window.from_year, 2023);
    EXPECT_EQ(cfg.kind, EntityKind::institution);
    EXPECT_EQ(cfg.si_config.log_base, std::numbers::e);

    testing::write_text(path, "from-year 2023\n");
    EXPECT_THROW(cfg.load_file(path), UsageError);
    EXPECT_THROW(cfg.load_file(dir.file("missing.conf")), IoError);
}

TEST(MetricFile, ParsesAndRejectsDuplicates) {
    testing::TempDir dir;
    const auto path = dir.file("if.ndjson");
    testing::write_text(path, "{\"id\":\"J1\",\"value\":2.5}\n{\"id\":\"J2\",\"value\":-1}\n");
    const auto m = load_metric_file(path);
    EXPECT_EQ(m.at("J1"), 2.5);
    EXPECT_EQ(m.at("J2"), -1.0);
    testing::write_text(path, "{\"id\":\"J1\",\"value\":2.5}\n{\"id\":\"J1\",\"value\":3}\n");
    EXPECT_THROW(load_metric_file(path), DataError);
    testing::write_text(path, "{\"id\":\"J1\",\"value\":\"high\"}\n");
    EXPECT_THROW(load_metric_file(path), DataError);
}

TEST(Driver, RankReportsImpliedReferencesCheck) {
    testing::TempDir dir;
    const auto reported = dir.file("reported.ndjson");
    std::string text;
    for (const auto& row : testdata::kTable1)
        text += "{\"id\":\"" + std::string(row.name) + "\",\"value\":" + std::to_string(row.si) + "}\n";
    testing::write_text(reported, text);
    const auto store = testing::table_fixture(testdata::kTable1, EntityKind::institution);

    for (const char* base : {"10", "e"}) {
        RunConfig cfg;
        cfg.set("reported-si", reported);
        cfg.set("log-base", base);
        std::vector<std::string> diag;
        cmd_rank(store, cfg, [&](std::string_view l) { diag.emplace_back(l); });
        std::string check;
        for (const auto& l : diag)
            if (l.find("\"check\":\"implied_references\"") != std::string::npos) check = l;
        ASSERT_FALSE(check.empty());
        const bool passed = check.find("\"status\":\"PASSED\"") != std::string::npos;
        EXPECT_EQ(passed, std::string(base) == "10") << check;
    }
}

TEST(Driver, AggregateNamesMissingFlag) {
    RunConfig cfg;
    try {
        cmd_aggregate(cfg, {});
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("--statements"), std::string::npos);
    }
}

}  // namespace
}  // namespace citerank
