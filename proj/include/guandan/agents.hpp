#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "guandan/observation.hpp"

namespace guandan {

/// Uniform choice over the legal actions from a per-agent seeded stream.
class RandomAgent : public Agent {
public:
    explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}

    Action act(const Observation& obs) override {
        if (obs.legal_actions.empty()) throw InvalidStateError("no legal actions");
        std::size_t i = static_cast<std::size_t>(rng_() % obs.legal_actions.size());
        return obs.legal_actions[i];
    }

    std::string_view name() const override { return "random"; }

private:
    std::mt19937_64 rng_;
};

namespace detail {

/// Leading preference of the rule agent, best first. Multi-card shapes go
/// out early, Category Two is hoarded.
constexpr std::array<ComboKind, kNumComboKinds> kLeadPriority = {
    ComboKind::TripleWithPair,  ComboKind::TwoConsecutiveTriples,
    ComboKind::ThreeConsecutivePairs, ComboKind::Straight,
    ComboKind::Triple,          ComboKind::Pair,
    ComboKind::Single,          ComboKind::StraightFlush,
    ComboKind::Bomb,            ComboKind::JokerBomb,
};

constexpr int lead_priority(ComboKind k) {
    for (int i = 0; i < kNumComboKinds; ++i) {
        if (kLeadPriority[i] == k) return i;
    }
    return kNumComboKinds;
}

/// Strength scale used to pick the weakest Category Two play: 4-card bombs,
/// 5-card bombs, straight flushes, then 6/7/8-card bombs, then the joker
/// bomb, each tier ordered by key rank.
inline std::pair<int, int> category_two_strength(const Combo& c) {
    const int n = static_cast<int>(c.cards.size());
    int tier;
    switch (c.kind) {
        case ComboKind::Bomb: tier = n <= 5 ? n - 4 : n - 3; break;  // 0,1,3,4,5
        case ComboKind::StraightFlush: tier = 2; break;
        default: tier = 6; break;  // JokerBomb
    }
    return {tier, ordinal(c.key_rank)};
}

}  // namespace detail

/// Rule-based baseline: when leading, play the highest-priority kind
/// present with the lowest key rank; when following, play the cheapest
/// same-category beat, and spend Category Two only when both opponents are
/// down to 5 cards or fewer.
class BestPatternLowValueAgent : public Agent {
public:
    Action act(const Observation& obs) override {
        if (obs.legal_actions.empty()) throw InvalidStateError("no legal actions");
        if (obs.has_lead) return lead(obs);
        return follow(obs);
    }

    std::string_view name() const override { return "rule"; }

private:
    static Action lead(const Observation& obs) {
        const Action* best = nullptr;
        int best_priority = kNumComboKinds + 1;
        int best_key = kNumRanks;
        for (const Action& a : obs.legal_actions) {
            int p = detail::lead_priority(a.combo().kind);
            int k = ordinal(a.combo().key_rank);
            if (p < best_priority || (p == best_priority && k < best_key)) {
                best = &a;
                best_priority = p;
                best_key = k;
            }
        }
        return *best;
    }

    static Action follow(const Observation& obs) {
        const Action* cheapest = nullptr;
        int cheapest_key = kNumRanks;
        for (const Action& a : obs.legal_actions) {
            if (a.is_pass() || is_category_two(a.combo().kind)) continue;
            int k = ordinal(a.combo().key_rank);
            if (k < cheapest_key) {
                cheapest = &a;
                cheapest_key = k;
            }
        }
        if (cheapest) return *cheapest;

        const bool opponents_short =
            obs.next_opponent_count <= 5 && obs.previous_opponent_count <= 5;
        if (opponents_short) {
            const Action* weakest = nullptr;
            std::pair<int, int> weakest_strength{};
            for (const Action& a : obs.legal_actions) {
                if (a.is_pass()) continue;
                auto s = detail::category_two_strength(a.combo());
                if (!weakest || s < weakest_strength) {
                    weakest = &a;
                    weakest_strength = s;
                }
            }
            if (weakest) return *weakest;
        }
        return Action::pass();
    }
};

inline std::unique_ptr<Agent> random_agent(std::uint64_t seed) {
    return std::make_unique<RandomAgent>(seed);
}

inline std::unique_ptr<Agent> best_p_low_v_agent() {
    return std::make_unique<BestPatternLowValueAgent>();
}

}  // namespace guandan
