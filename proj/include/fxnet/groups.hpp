#pragma once

// Liquidity-group assignment for currencies. The default configuration covers
// the 60-currency universe the toolkit ships with, split into four tiers:
// A* (major free-floating), A (liquid secondary), B (managed/less liquid) and
// C (thinly traded or administered). Users may override the assignment with a
// JSON document mapping group tag -> list of currency codes.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fxnet/common.hpp"

namespace fxnet {

enum class LiquidityGroup { AStar, A, B, C };

inline std::string_view to_string(LiquidityGroup g) {
    switch (g) {
        case LiquidityGroup::AStar: return "A*";
        case LiquidityGroup::A: return "A";
        case LiquidityGroup::B: return "B";
        case LiquidityGroup::C: return "C";
    }
    return "?";
}

inline LiquidityGroup parse_group_tag(std::string_view tag) {
    if (tag == "A*") return LiquidityGroup::AStar;
    if (tag == "A") return LiquidityGroup::A;
    if (tag == "B") return LiquidityGroup::B;
    if (tag == "C") return LiquidityGroup::C;
    throw Error("unknown liquidity group tag '" + std::string(tag) + "' (expected A*, A, B or C)");
}

constexpr std::array<LiquidityGroup, 4> kGroupOrder = {LiquidityGroup::AStar, LiquidityGroup::A,
                                                       LiquidityGroup::B, LiquidityGroup::C};

/// Maps each configured currency to exactly one group.
struct GroupConfig {
    std::map<CurrencyCode, LiquidityGroup> assignment;

    std::optional<LiquidityGroup> group_of(CurrencyCode code) const {
        const auto it = assignment.find(code);
        if (it == assignment.end()) return std::nullopt;
        return it->second;
    }

    /// Member codes of one group, in code order.
    std::vector<CurrencyCode> members(LiquidityGroup g) const {
        std::vector<CurrencyCode> out;
        for (const auto& [code, group] : assignment)
            if (group == g) out.push_back(code);
        return out;
    }
};

namespace detail {

inline const char* const kDefaultGroupMembers[4][32] = {
    // A*
    {"AUD", "CAD", "CHF", "DKK", "EUR", "GBP", "JPY", "NOK", "NZD", "SEK", "USD", nullptr},
    // A
    {"CYP", "CZK", "HKD", "HUF", "IDR", "ILS", "ISK", "KRW", "MXN", "MYR", "PHP",
     "PLN", "SGD", "SKK", "THB", "TRY", "TWD", "XAG", "XAU", "XPT", "ZAR", nullptr},
    // B
    {"AED", "ARS", "BGN", "BRL", "CLP", "KWD", "RON", "RUB", "SAR", "TTD", nullptr},
    // C
    {"COP", "DZD", "EGP", "FJD", "GHC", "HNL", "INR", "JMD", "JOD", "LBP", "LKR",
     "MAD", "PEN", "PKR", "SDD", "TND", "VEB", "ZMK", nullptr},
};

}  // namespace detail

/// The built-in 60-currency assignment.
inline GroupConfig default_groups() {
    GroupConfig config;
    for (std::size_t g = 0; g < 4; ++g)
        for (const char* const* p = detail::kDefaultGroupMembers[g]; *p != nullptr; ++p)
            config.assignment.emplace(CurrencyCode::parse(*p), kGroupOrder[g]);
    return config;
}

/// Parses `{"A*": ["USD", ...], "A": [...], "B": [...], "C": [...]}`.
/// Unknown tags, invalid codes and currencies listed in more than one group
/// are rejected.
inline GroupConfig parse_groups_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid group config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error("invalid group config: top level must be an object");

    GroupConfig config;
    for (const auto& [key, value] : doc.items()) {
        const LiquidityGroup group = parse_group_tag(key);
        if (!value.is_array()) throw Error("invalid group config: '" + key + "' must be an array");
        for (const auto& entry : value) {
            if (!entry.is_string()) throw Error("invalid group config: codes must be strings");
            const CurrencyCode code = CurrencyCode::parse(entry.get<std::string>());
            const auto [it, inserted] = config.assignment.emplace(code, group);
            (void)it;
            if (!inserted) throw Error("currency '" + code.str() + "' listed in more than one group");
        }
    }
    return config;
}

/// Serializes a config in the same shape parse_groups_json accepts, with
/// groups in A*, A, B, C order and codes sorted within each group.
inline std::string serialize_groups_json(const GroupConfig& config) {
    nlohmann::ordered_json doc;
    for (const LiquidityGroup g : kGroupOrder) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& code : config.members(g)) arr.push_back(code.str());
        doc[std::string(to_string(g))] = std::move(arr);
    }
    return doc.dump(2) + "\n";
}

}  // namespace fxnet
