#include "citerank/citerank.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "test_support.hpp"

namespace {

struct Handles {
    citerank_config* cfg = nullptr;
    citerank_store* store = nullptr;
    ~Handles() {
        citerank_store_free(store);
        citerank_config_free(cfg);
    }
};

std::string take(char* s) {
    std::string out = s ? s : "";
    citerank_string_free(s);
    return out;
}

TEST(CApi, MetricsEntryPoints) {
    double v = 0;
    int defined = -1;
    ASSERT_EQ(citerank_usi(34516, 3776, &v, &defined), CITERANK_OK);
    EXPECT_EQ(defined, 1);
    EXPECT_NEAR(v, 0.9013893241408127, 1e-15);
    ASSERT_EQ(citerank_usi(0, 0, &v, &defined), CITERANK_OK);
    EXPECT_EQ(defined, 0);

    ASSERT_EQ(citerank_si(1000, 1.0, 2.0, 10.0, &v, &defined), CITERANK_OK);
    EXPECT_EQ(defined, 1);
    EXPECT_DOUBLE_EQ(v, 3.0);
    ASSERT_EQ(citerank_si(0, 1.0, 2.0, 10.0, &v, &defined), CITERANK_OK);
    EXPECT_EQ(defined, 0);
    EXPECT_EQ(citerank_si(10, 1.0, 2.0, 0.5, &v, &defined), CITERANK_ERR_USAGE);
    EXPECT_NE(std::string(citerank_last_error()).find("log base"), std::string::npos);

    ASSERT_EQ(citerank_implied_references(3.0, 1.0, 2.0, 10.0, &v), CITERANK_OK);
    EXPECT_NEAR(v, 1000.0, 1e-9);
    EXPECT_EQ(citerank_implied_references(3.0, 0.0, 2.0, 10.0, &v), CITERANK_ERR_DOMAIN);

    const uint64_t counts[] = {5, 5, 5, 5, 5};
    uint64_t h = 0;
    ASSERT_EQ(citerank_hs_index(counts, 5, &h), CITERANK_OK);
    EXPECT_EQ(h, 5u);
    ASSERT_EQ(citerank_hs_index(nullptr, 0, &h), CITERANK_OK);
    EXPECT_EQ(h, 0u);

    const double xs[] = {1, 2, 3}, ys[] = {2, 4, 6}, flat[] = {1, 1, 1};
    ASSERT_EQ(citerank_pearson(xs, ys, 3, &v), CITERANK_OK);
    EXPECT_NEAR(v, 1.0, 1e-12);
    EXPECT_EQ(citerank_pearson(xs, flat, 3, &v), CITERANK_ERR_DOMAIN);
}

TEST(CApi, NullArgumentsAreUsageErrors) {
    EXPECT_EQ(citerank_config_new(nullptr), CITERANK_ERR_USAGE);
    EXPECT_EQ(citerank_config_set(nullptr, "by", "si"), CITERANK_ERR_USAGE);
    EXPECT_EQ(citerank_store_load(nullptr, nullptr), CITERANK_ERR_USAGE);
    citerank_config_free(nullptr);
    citerank_store_free(nullptr);
}

TEST(CApi, ConfigErrorsMapToUsage) {
    Handles h;
    ASSERT_EQ(citerank_config_new(&h.cfg), CITERANK_OK);
    EXPECT_EQ(citerank_config_set(h.cfg, "by", "h-index"), CITERANK_ERR_USAGE);
    EXPECT_EQ(citerank_config_load_file(h.cfg, "/nonexistent/citerank.conf"), CITERANK_ERR_IO);
}

TEST(CApi, AggregateRankPipeline) {
    citerank::testing::TempDir dir;
    const auto c = citerank::testing::make_corpus(77, {.statements = 2000, .references = 2000});
    citerank::testing::write_records<citerank::StatementRecord>(dir.file("s"), c.statements);
    citerank::testing::write_records<citerank::ReferenceEvent>(dir.file("r"), c.references);
    citerank::testing::write_records<citerank::PublicationRecord>(dir.file("p"), c.pubs);
    citerank::testing::write_records<citerank::AffiliationRecord>(dir.file("a"), c.affiliations);

    Handles h;
    ASSERT_EQ(citerank_config_new(&h.cfg), CITERANK_OK);
    std::vector<std::string> diag;
    citerank_config_set_diagnostics(
        h.cfg, [](const char* rec, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(rec); },
        &diag);
    EXPECT_EQ(citerank_aggregate(h.cfg, &h.store), CITERANK_ERR_USAGE);
    EXPECT_NE(std::string(citerank_last_error()).find("--statements"), std::string::npos);

    ASSERT_EQ(citerank_config_set(h.cfg, "statements", dir.file("s").c_str()), CITERANK_OK);
    ASSERT_EQ(citerank_config_set(h.cfg, "references", dir.file("r").c_str()), CITERANK_OK);
    ASSERT_EQ(citerank_config_set(h.cfg, "pubs", dir.file("p").c_str()), CITERANK_OK);
    ASSERT_EQ(citerank_config_set(h.cfg, "affiliations", dir.file("a").c_str()), CITERANK_OK);
    ASSERT_EQ(citerank_config_set(h.cfg, "entity", "journal"), CITERANK_OK);
    ASSERT_EQ(citerank_aggregate(h.cfg, &h.store), CITERANK_OK);
    EXPECT_EQ(citerank_store_entity_count(h.store), 10u);
    ASSERT_FALSE(diag.empty());
    EXPECT_NE(diag.back().find("\"summary\":\"aggregate\""), std::string::npos);

    char* text = nullptr;
    ASSERT_EQ(citerank_store_serialize(h.store, &text), CITERANK_OK);
    const std::string serialized = take(text);
    citerank_store* reparsed = nullptr;
    ASSERT_EQ(citerank_store_parse(serialized.data(), serialized.size(), &reparsed), CITERANK_OK);
    ASSERT_EQ(citerank_store_serialize(reparsed, &text), CITERANK_OK);
    EXPECT_EQ(take(text), serialized);
    citerank_store_free(reparsed);

    ASSERT_EQ(citerank_config_set(h.cfg, "format", "csv"), CITERANK_OK);
    ASSERT_EQ(citerank_config_set(h.cfg, "top", "3"), CITERANK_OK);
    char* doc = nullptr;
    ASSERT_EQ(citerank_rank(h.store, h.cfg, &doc), CITERANK_OK);
    const std::string csv = take(doc);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);

    EXPECT_EQ(citerank_fields(h.store, h.cfg, &doc), CITERANK_ERR_USAGE);
    EXPECT_EQ(citerank_correlate(h.store, h.cfg, &doc), CITERANK_ERR_USAGE);  // no --external
}

TEST(CApi, StoreParseErrorsAreDataErrors) {
    citerank_store* s = nullptr;
    const std::string junk = "{not a store}\n";
    EXPECT_EQ(citerank_store_parse(junk.data(), junk.size(), &s), CITERANK_ERR_DATA);
    EXPECT_EQ(citerank_store_load("/nonexistent/store.ndjson", &s), CITERANK_ERR_IO);
}

TEST(CApi, MergeChecksConfiguration) {
    const std::string a = R"({"diagnostics":{"kind":"journal","from_year":2024,"to_year":2024,"entities":0,"statements_seen":0,"statements_counted":0,"statements_out_of_window":0,"statements_unresolved":0,"references_seen":0,"references_counted":0,"references_duplicate":0,"references_out_of_window":0,"references_unresolved":0,"publication_overwrites":0,"affiliation_overwrites":0}})";
    std::string b = a;
    b.replace(b.find("journal"), 7, "field");
    citerank_store *sa = nullptr, *sb = nullptr;
    ASSERT_EQ(citerank_store_parse(a.data(), a.size(), &sa), CITERANK_OK);
    ASSERT_EQ(citerank_store_parse(b.data(), b.size(), &sb), CITERANK_OK);
    EXPECT_EQ(citerank_store_merge(sa, sb), CITERANK_ERR_USAGE);
    citerank_store* sc = nullptr;
    ASSERT_EQ(citerank_store_parse(a.data(), a.size(), &sc), CITERANK_OK);
    EXPECT_EQ(citerank_store_merge(sa, sc), CITERANK_OK);
    citerank_store_free(sc);
    citerank_store_free(sa);
    citerank_store_free(sb);
}

}  // namespace
