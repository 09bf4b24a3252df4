#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

namespace citerank {

using Count = std::uint64_t;

/// Share of valenced statements that are supporting, in [0, 1].
struct Usi {
    double value = 0.0;
};

/// Impact-weighted index. Unbounded; negative when references * usi^exponent < 1.
struct Si {
    double value = 0.0;
};

struct SiConfig {
    double exponent = 2.0;
    double log_base = 10.0;

    /// Throws UsageError unless exponent > 0 and log_base > 1.
    void validate() const;
};

struct EntityTally {
    Count supporting = 0;
    Count mentioning = 0;
    Count contrasting = 0;
    Count references = 0;

    Count statements() const { return supporting + mentioning + contrasting; }
    Count valenced() const { return supporting + contrasting; }

    EntityTally& operator+=(const EntityTally& other) {
        supporting += other.supporting;
        mentioning += other.mentioning;
        contrasting += other.contrasting;
        references += other.references;
        return *this;
    }
    friend EntityTally operator+(EntityTally a, const EntityTally& b) { return a += b; }
    friend bool operator==(const EntityTally&, const EntityTally&) = default;
};

/// supporting / (supporting + contrasting); nullopt when there are no valenced statements.
std::optional<Usi> usi(Count supporting, Count contrasting);

/// log_base(references * usi^exponent); nullopt when the log argument is zero.
std::optional<Si> si(Count references, Usi u, const SiConfig& cfg = {});

/// Inverts si(): the references count that yields `s` at `u`. Throws DomainError for u <= 0.
double implied_references(Si s, Usi u, const SiConfig& cfg = {});

/// Largest h such that at least h publications have >= h supporting citations.
Count hs_index(std::span<const Count> supporting_per_publication);

/// Sample Pearson correlation. Throws DomainError on fewer than two pairs or zero variance.
double pearson(std::span<const std::pair<double, double>> pairs);

}  // namespace citerank
