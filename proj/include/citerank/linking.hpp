#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citerank/ingest.hpp"

namespace citerank {

/// institution_field is the composite (institution, field) grouping used by the
/// per-field breakdown.
enum class EntityKind { journal, institution, field, institution_field };

std::string_view to_string(EntityKind k);
/// Accepts "journal", "institution", "field", "institution-field" (or "institution_field").
std::optional<EntityKind> entity_kind_from_string(std::string_view s);

struct EntityKey {
    EntityKind kind = EntityKind::journal;
    std::string id;
    std::string field;  // only set for institution_field

    friend auto operator<=>(const EntityKey&, const EntityKey&) = default;
    friend bool operator==(const EntityKey&, const EntityKey&) = default;
};

struct EntityKeyHash {
    std::size_t operator()(const EntityKey& k) const noexcept;
};

struct LinkStats {
    std::size_t publications = 0;
    std::size_t affiliations = 0;
    std::size_t publication_overwrites = 0;
    std::size_t affiliation_overwrites = 0;
};

/// Publication -> journal / field / institution-set lookups. Immutable after
/// building; resolve() is safe to call concurrently.
class LinkTables {
public:
    LinkTables() = default;

    /// Later records for the same id replace earlier ones (counted in stats()).
    void add(PublicationRecord pub);
    void add(AffiliationRecord aff);

    static LinkTables build(std::span<const PublicationRecord> pubs, std::span<const AffiliationRecord> affs);

    std::optional<std::string_view> journal_of(std::string_view pub_id) const;
    std::optional<std::string_view> field_of(std::string_view pub_id) const;
    /// Empty when the publication has no affiliation record.
    std::span<const std::string> institutions_of(std::string_view pub_id) const;

    /// Entities credited by a citation of `cited_id`. Sorted, no duplicates.
    /// journal/field: 0 or 1 keys; institution: one per affiliated institution
    /// (full counting); institution_field: one per institution when the field is known.
    std::vector<EntityKey> resolve(std::string_view cited_id, EntityKind kind) const;

    const LinkStats& stats() const noexcept { return stats_; }

private:
    struct PubLinks {
        std::optional<std::string> journal;
        std::optional<std::string> field;
    };
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };
    template <class V>
    using Map = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

    Map<PubLinks> pubs_;
    Map<std::vector<std::string>> institutions_;
    LinkStats stats_;
};

}  // namespace citerank
