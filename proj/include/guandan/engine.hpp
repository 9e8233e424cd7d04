#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "guandan/cards.hpp"
#include "guandan/combos.hpp"
#include "guandan/observation.hpp"

namespace guandan {

/// Authoritative state of one deal.
struct DealState {
    std::array<Hand, 4> hands;
    Level level{Rank::Two};
    int current_seat = 0;
    int trick_leader = 0;
    std::optional<std::pair<int, Combo>> incumbent;  // (seat, combo)
    int consecutive_passes = 0;
    std::array<bool, 4> passed_since_incumbent{};
    std::vector<int> finish_order;
    std::vector<HistoryEvent> history;
    std::uint64_t rng_seed = 0;

    bool over() const { return finish_order.size() == kNumSeats; }

    friend bool operator==(const DealState&, const DealState&) = default;
};

/// Outcome of one deal: finish order plus the mirrored team scores.
struct DealResult {
    std::vector<int> finish_order;
    std::array<int, 2> team_points{};  // index = team_of(seat)

    friend bool operator==(const DealResult&, const DealResult&) = default;
};

struct MatchConfig {
    int num_deals = 1;
    std::uint64_t base_seed = 0;
    std::vector<Level> level_schedule{Level{Rank::Two}};
};

inline void validate(const MatchConfig& cfg) {
    if (cfg.num_deals < 1) throw InvalidInputError("num_deals must be >= 1");
    if (cfg.level_schedule.empty()) throw InvalidInputError("level_schedule must be non-empty");
}

/// Fresh deal `deal_index` of a match: hands from seed base_seed+index,
/// level from the cycled schedule, seat 0 leading.
inline DealState new_deal(const MatchConfig& cfg, int deal_index) {
    validate(cfg);
    if (deal_index >= cfg.num_deals) throw InvalidInputError("deal_index out of range");
    DealState st;
    st.level = cfg.level_schedule[deal_index % cfg.level_schedule.size()];
    st.rng_seed = cfg.base_seed + static_cast<std::uint64_t>(deal_index);
    st.hands = deal(build_deck(), st.rng_seed);
    return st;
}

/// Legal actions for the seat to act. Leaders get no Pass.
inline std::vector<Action> legal_actions(const DealState& st) {
    if (st.over()) throw InvalidStateError("deal is over");
    std::optional<Combo> inc;
    if (st.incumbent) inc = st.incumbent->second;
    return enumerate_legal_actions(st.hands[st.current_seat], inc, st.level);
}

namespace detail {

inline int next_holder(const DealState& st, int from) {
    for (int i = 0; i < kNumSeats; ++i) {
        int s = (from + i) % kNumSeats;
        if (!st.hands[s].empty()) return s;
    }
    throw InvalidStateError("no seat holds cards");
}

/// True once every seat still holding cards, other than the incumbent's
/// owner, has passed since the incumbent was set.
inline bool trick_closed(const DealState& st) {
    const int owner = st.incumbent->first;
    for (int s = 0; s < kNumSeats; ++s) {
        if (s == owner || st.hands[s].empty()) continue;
        if (!st.passed_since_incumbent[s]) return false;
    }
    return true;
}

inline void close_trick(DealState& st) {
    const int owner = st.incumbent->first;
    st.incumbent.reset();
    st.consecutive_passes = 0;
    st.passed_since_incumbent = {};
    int leader;
    if (!st.hands[owner].empty()) {
        leader = owner;
    } else if (!st.hands[teammate_of(owner)].empty()) {
        leader = teammate_of(owner);
    } else {
        leader = next_holder(st, next_seat_of(owner));
    }
    st.trick_leader = leader;
    st.current_seat = leader;
}

}  // namespace detail

/// Applies one action in place. The action must be legal; structural
/// violations (cards not held, combo not beating, pass while leading) are
/// rejected with a reason.
inline void apply_action(DealState& st, const Action& action) {
    if (st.over()) throw InvalidStateError("deal is over");
    const int seat = st.current_seat;
    if (action.is_pass()) {
        if (!st.incumbent) throw InvalidInputError("rejected: cannot pass when leading");
        st.passed_since_incumbent[seat] = true;
        st.consecutive_passes++;
        st.history.push_back(
            HistoryEvent{seat, action, static_cast<int>(st.hands[seat].size())});
        if (detail::trick_closed(st)) {
            detail::close_trick(st);
        } else {
            st.current_seat = detail::next_holder(st, next_seat_of(seat));
        }
        return;
    }

    const Combo& combo = action.combo();
    if (!hand_contains(st.hands[seat], combo.cards))
        throw InvalidInputError("rejected: combo uses cards not in hand");
    auto checked = make_combo(combo.cards, combo.kind, combo.wild, st.level);
    if (!checked || checked->key_rank != combo.key_rank)
        throw InvalidComboError("rejected: not a valid " + std::string(kind_name(combo.kind)));
    if (st.incumbent && !beats(combo, st.incumbent->second))
        throw InvalidInputError("rejected: combo does not beat the incumbent");

    remove_cards(st.hands[seat], combo.cards);
    st.incumbent = {seat, combo};
    st.consecutive_passes = 0;
    st.passed_since_incumbent = {};
    st.history.push_back(HistoryEvent{seat, action, static_cast<int>(st.hands[seat].size())});
    if (st.hands[seat].empty()) st.finish_order.push_back(seat);

    if (st.finish_order.size() == 3) {
        for (int s = 0; s < kNumSeats; ++s) {
            if (!st.hands[s].empty()) {
                st.finish_order.push_back(s);
                return;
            }
        }
        throw InvalidStateError("no fourth seat left to finish");
    }
    st.current_seat = detail::next_holder(st, next_seat_of(seat));
}

/// Points from a finish order: the winning team's partner placing 2nd, 3rd
/// or 4th is worth +4, +2 or +1, mirrored for the losers.
inline DealResult deal_outcome(const std::vector<int>& finish_order) {
    if (finish_order.size() != 4) throw InvalidInputError("finish order must list 4 seats");
    std::array<bool, 4> seen{};
    for (int s : finish_order) {
        if (s < 0 || s >= kNumSeats || seen[s])
            throw InvalidInputError("finish order must be a permutation of seats 0-3");
        seen[s] = true;
    }
    const int winner = finish_order[0];
    const int partner = teammate_of(winner);
    int partner_pos = 0;
    for (int i = 1; i < 4; ++i) {
        if (finish_order[i] == partner) partner_pos = i;
    }
    int points = partner_pos == 1 ? 4 : partner_pos == 2 ? 2 : 1;
    DealResult result;
    result.finish_order = finish_order;
    result.team_points[team_of(winner)] = points;
    result.team_points[1 - team_of(winner)] = -points;
    return result;
}

/// The current seat's view.
inline Observation observe(const DealState& st) {
    if (st.over()) throw InvalidStateError("deal is over");
    Observation obs;
    obs.seat = st.current_seat;
    obs.hand = st.hands[st.current_seat];
    obs.level = st.level;
    obs.teammate_count = static_cast<int>(st.hands[teammate_of(obs.seat)].size());
    obs.next_opponent_count = static_cast<int>(st.hands[next_seat_of(obs.seat)].size());
    obs.previous_opponent_count = static_cast<int>(st.hands[prev_seat_of(obs.seat)].size());
    obs.has_lead = !st.incumbent.has_value();
    if (st.incumbent) {
        obs.last_play = LastPlay{st.incumbent->first, st.incumbent->second,
                                 static_cast<int>(st.hands[st.incumbent->first].size())};
    }
    obs.legal_actions = legal_actions(st);
    obs.history = std::span<const HistoryEvent>(st.history);
    return obs;
}

/// Per-decision record surfaced to the harness for logging and stats.
struct DecisionRecord {
    int step = 0;
    int seat = 0;
    int legal_count = 0;
    int presented_count = 0;
    int chosen_index = 0;
    bool fallback = false;
    bool violation = false;   // agent action was rejected and substituted
    std::string agent_detail;  // serialized JSON from the agent, may be empty
};

struct DealHooks {
    /// Called after each applied action, with the post-action state.
    std::function<void(const DealState&, int step, int seat, const Action&)> on_event;
    std::function<void(const DecisionRecord&)> on_decision;
};

/// Runs a deal to completion. An agent whose action is rejected gets one
/// retry, then the engine substitutes Pass when legal, else the first legal
/// action, and flags the decision as a violation.
inline DealResult run_deal(DealState& st, const std::array<Agent*, 4>& agents,
                           const DealHooks& hooks = {}) {
    int step = 0;
    while (!st.over()) {
        const int seat = st.current_seat;
        Observation obs = observe(st);
        DecisionRecord rec;
        rec.step = step;
        rec.seat = seat;
        rec.legal_count = static_cast<int>(obs.legal_actions.size());

        Action action = Action::pass();
        bool applied = false;
        for (int attempt = 0; attempt < 2 && !applied; ++attempt) {
            action = agents[seat]->act(obs);
            try {
                apply_action(st, action);
                applied = true;
            } catch (const GuandanError&) {
            }
        }
        if (!applied) {
            rec.violation = true;
            action = obs.legal_actions.back().is_pass() ? Action::pass()
                                                        : obs.legal_actions.front();
            apply_action(st, action);
        }

        if (auto choice = agents[seat]->last_choice(); choice && !rec.violation) {
            rec.presented_count = choice->presented_count;
            rec.chosen_index = choice->chosen_index;
            rec.fallback = choice->fallback;
            rec.agent_detail = choice->detail;
        } else {
            rec.presented_count = rec.legal_count;
            auto it = std::find(obs.legal_actions.begin(), obs.legal_actions.end(), action);
            rec.chosen_index = it == obs.legal_actions.end()
                                   ? 0
                                   : static_cast<int>(it - obs.legal_actions.begin());
        }
        if (hooks.on_decision) hooks.on_decision(rec);
        if (hooks.on_event) hooks.on_event(st, step, seat, action);
        ++step;
    }
    return deal_outcome(st.finish_order);
}

struct MatchResult {
    std::vector<DealResult> deals;
    std::array<int, 2> totals{};
};

/// Runs `num_deals` deals. Seat 0 leads the first deal; afterwards the
/// previous deal's first finisher leads.
inline MatchResult run_match(const MatchConfig& cfg, const std::array<Agent*, 4>& agents,
                             const std::function<DealHooks(int deal_index)>& hooks_for = {}) {
    validate(cfg);
    MatchResult result;
    int leader = 0;
    for (int i = 0; i < cfg.num_deals; ++i) {
        DealState st = new_deal(cfg, i);
        st.current_seat = leader;
        st.trick_leader = leader;
        DealResult dr = run_deal(st, agents, hooks_for ? hooks_for(i) : DealHooks{});
        leader = dr.finish_order[0];
        result.totals[0] += dr.team_points[0];
        result.totals[1] += dr.team_points[1];
        result.deals.push_back(std::move(dr));
    }
    return result;
}

}  // namespace guandan
