#include "citerank/linking.hpp"

#include <algorithm>
#include <functional>

namespace citerank {

std::string_view to_string(EntityKind k) {
    switch (k) {
        case EntityKind::journal: return "journal";
        case EntityKind::institution: return "institution";
        case EntityKind::field: return "field";
        case EntityKind::institution_field: return "institution-field";
    }
    return "journal";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view s) {
    if (s == "journal") return EntityKind::journal;
    if (s == "institution") return EntityKind::institution;
    if (s == "field") return EntityKind::field;
    if (s == "institution-field" || s == "institution_field") return EntityKind::institution_field;
    return std::nullopt;
}

std::size_t EntityKeyHash::operator()(const EntityKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.id);
    h ^= std::hash<std::string>{}(k.field) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(k.kind);
}

void LinkTables::add(PublicationRecord pub) {
    ++stats_.publications;
    PubLinks links{std::move(pub.journal_id), std::move(pub.field)};
    auto [it, inserted] = pubs_.try_emplace(std::move(pub.id), std::move(links));
    if (!inserted) {
        it->second = std::move(links);
        ++stats_.publication_overwrites;
    }
}

void LinkTables::add(AffiliationRecord aff) {
    ++stats_.affiliations;
    auto& ids = aff.institution_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto [it, inserted] = institutions_.try_emplace(std::move(aff.pub_id), std::move(aff.institution_ids));
    if (!inserted) {
        it->second = std::move(aff.institution_ids);
        ++stats_.affiliation_overwrites;
    }
}

LinkTables LinkTables::build(std::span<const PublicationRecord> pubs, std::span<const AffiliationRecord> affs) {
    LinkTables t;
    for (const auto& p : pubs) t.add(p);
    for (const auto& a : affs) t.add(a);
    return t;
}

std::optional<std::string_view> LinkTables::journal_of(std::string_view pub_id) const {
    auto it = pubs_.find(pub_id);
    if (it == pubs_.end() || !it->second.journal) return std::nullopt;
    return std::string_view(*it->second.journal);
}

std::optional<std::string_view> LinkTables::field_of(std::string_view pub_id) const {
    auto it = pubs_.find(pub_id);
    if (it == pubs_.end() || !it->second.field) return std::nullopt;
    return std::string_view(*it->second.field);
}

std::span<const std::string> LinkTables::institutions_of(std::string_view pub_id) const {
    auto it = institutions_.find(pub_id);
    if (it == institutions_.end()) return {};
    return it->second;
}

std::vector<EntityKey> LinkTables::resolve(std::string_view cited_id, EntityKind kind) const {
    std::vector<EntityKey> keys;
    switch (kind) {
        case EntityKind::journal:
            if (auto j = journal_of(cited_id)) keys.push_back({kind, std::string(*j), {}});
            break;
        case EntityKind::field:
            if (auto f = field_of(cited_id)) keys.push_back({kind, std::string(*f), {}});
            break;
        case EntityKind::institution:
            for (const auto& inst : institutions_of(cited_id)) keys.push_back({kind, inst, {}});
            break;
        case EntityKind::institution_field: {
            auto f = field_of(cited_id);
            if (!f) break;
            for (const auto& inst : institutions_of(cited_id)) keys.push_back({kind, inst, std::string(*f)});
            break;
        }
    }
    return keys;
}

}  // namespace citerank
