#include "citerank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "citerank/error.hpp"

namespace citerank {

namespace {

// log10 and ln are evaluated directly so that base-10 and base-e results do
// not pick up the extra rounding of a change-of-base division.
double log_in_base(double x, double base) {
    if (base == 10.0) return std::log10(x);
    if (base == std::numbers::e) return std::log(x);
    if (base == 2.0) return std::log2(x);
    return std::log(x) / std::log(base);
}

}  // namespace

void SiConfig::validate() const {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw UsageError("SI exponent must be a finite number > 0, got " + std::to_string(exponent));
    if (!(log_base > 1.0) || !std::isfinite(log_base))
        throw UsageError("SI log base must be a finite number > 1, got " + std::to_string(log_base));
}

std::optional<Usi> usi(Count supporting, Count contrasting) {
    const Count valenced = supporting + contrasting;
    if (valenced == 0) return std::nullopt;
    if (contrasting == 0) return Usi{1.0};
    if (supporting == 0) return Usi{0.0};
    return Usi{static_cast<double>(supporting) / static_cast<double>(valenced)};
}

std::optional<Si> si(Count references, Usi u, const SiConfig& cfg) {
    if (references == 0 || !(u.value > 0.0)) return std::nullopt;
    // log(r * u^e) = log(r) + e * log(u); the split form keeps the scaling law
    // si(k r) - si(r) = log(k) exact up to two log roundings.
    const double refs = static_cast<double>(references);
    return Si{log_in_base(refs, cfg.log_base) + cfg.exponent * log_in_base(u.value, cfg.log_base)};
}

double implied_references(Si s, Usi u, const SiConfig& cfg) {
    if (!(u.value > 0.0))
        throw DomainError("implied_references: usi must be > 0");
    return std::pow(cfg.log_base, s.value) / std::pow(u.value, cfg.exponent);
}

Count hs_index(std::span<const Count> supporting_per_publication) {
    std::vector<Count> sorted(supporting_per_publication.begin(), supporting_per_publication.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    Count h = 0;
    while (h < sorted.size() && sorted[h] >= h + 1) ++h;
    return h;
}

double pearson(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2)
        throw DomainError("pearson: need at least 2 pairs, got " + std::to_string(pairs.size()));

    const double n = static_cast<double>(pairs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pairs) {
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DomainError("pearson: zero variance in input");

    const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace citerank
