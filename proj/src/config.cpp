#include "citerank/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "citerank/error.hpp"

namespace citerank {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
    Int v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw UsageError("--" + std::string(key) + ": expected an integer, got \"" + std::string(text) + "\"");
    return v;
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw UsageError("--" + std::string(key) + ": expected a number, got \"" + std::string(text) + "\"");
    return v;
}

[[noreturn]] void bad_choice(std::string_view key, std::string_view value, std::string_view choices) {
    throw UsageError("--" + std::string(key) + ": invalid value \"" + std::string(value) + "\" (expected " +
                     std::string(choices) + ")");
}

}  // namespace

double parse_log_base(std::string_view text) {
    if (text == "e") return std::numbers::e;
    const double base = parse_real("log-base", text);
    if (!(base > 1.0)) throw UsageError("--log-base: must be > 1, got " + std::string(text));
    return base;
}

const std::vector<std::string_view>& RunConfig::keys() {
    static const std::vector<std::string_view> k = {
        "statements", "references",     "pubs", "affiliations", "from-year", "to-year", "entity",
        "by",         "exponent",       "log-base", "min-valenced", "min-references", "top",   "format",
        "out",        "mode",           "shards", "external", "reported-si"};
    return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
    if (key.starts_with("--")) key.remove_prefix(2);
    value = trim(value);

    if (key == "statements") inputs.statements = value;
    else if (key == "references") inputs.references = value;
    else if (key == "pubs") inputs.publications = value;
    else if (key == "affiliations") inputs.affiliations = value;
    else if (key == "from-year") window.from_year = parse_int<int>(key, value);
    else if (key == "to-year") window.to_year = parse_int<int>(key, value);
    else if (key == "entity") {
        auto k = entity_kind_from_string(value);
        if (!k) bad_choice(key, value, "journal|institution|field|institution-field");
        kind = *k;
    } else if (key == "by") {
        auto m = metric_from_string(value);
        if (!m) bad_choice(key, value, "si|usi");
        metric = *m;
    } else if (key == "exponent") {
        si_config.exponent = parse_real(key, value);
        if (!(si_config.exponent > 0.0)) throw UsageError("--exponent: must be > 0");
    } else if (key == "log-base") si_config.log_base = parse_log_base(value);
    else if (key == "min-valenced") min_valenced = parse_int<Count>(key, value);
    else if (key == "min-references") min_references = parse_int<Count>(key, value);
    else if (key == "top") {
        const auto k = parse_int<std::size_t>(key, value);
        if (k < 1) throw UsageError("--top: must be >= 1");
        top_k = k;
    } else if (key == "format") {
        auto f = format_from_string(value);
        if (!f) bad_choice(key, value, "csv|json|md");
        format = *f;
    } else if (key == "out") out = value;
    else if (key == "mode") {
        if (value == "strict") mode = Mode::strict;
        else if (value == "lenient") mode = Mode::lenient;
        else bad_choice(key, value, "strict|lenient");
    } else if (key == "shards") {
        shards = parse_int<std::size_t>(key, value);
        if (shards < 1) throw UsageError("--shards: must be >= 1");
    } else if (key == "external") external = value;
    else if (key == "reported-si") reported_si = value;
    else throw UsageError("unknown option \"" + std::string(key) + "\"");
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = line;
        if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        try {
            set(trim(v.substr(0, eq)), trim(v.substr(eq + 1)));
        } catch (const UsageError& e) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

RankSpec RunConfig::rank_spec(EntityKind store_kind, Metric fallback) const {
    RankSpec spec;
    spec.metric = metric.value_or(fallback);
    spec.kind = kind.value_or(store_kind);
    spec.min_valenced = min_valenced;
    spec.min_references = min_references;
    spec.top_k = top_k;
    spec.si_config = si_config;
    return spec;
}

}  // namespace citerank
