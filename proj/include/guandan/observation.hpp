#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guandan/combos.hpp"

namespace guandan {

constexpr int kNumSeats = 4;

/// Seats 0,2 and 1,3 are fixed teams; team id is seat parity.
constexpr int team_of(int seat) { return seat & 1; }
constexpr int teammate_of(int seat) { return (seat + 2) % 4; }
constexpr int next_seat_of(int seat) { return (seat + 1) % 4; }
constexpr int prev_seat_of(int seat) { return (seat + 3) % 4; }

/// One applied action. Replaying the events from a fresh deal reproduces
/// the state.
struct HistoryEvent {
    int seat;
    Action action;
    int hand_size_after;

    friend bool operator==(const HistoryEvent&, const HistoryEvent&) = default;
};

/// The standing play a follower must beat.
struct LastPlay {
    int seat;
    Combo combo;
    int hand_count;  // cards the player holds now
};

/// One seat's imperfect view of the deal: own cards, the other players'
/// counts, the standing play, the legal actions, and the public history.
/// Nothing about hidden hands.
struct Observation {
    int seat = 0;
    Hand hand;
    Level level{Rank::Two};
    int teammate_count = 0;
    int next_opponent_count = 0;
    int previous_opponent_count = 0;
    bool has_lead = false;
    std::optional<LastPlay> last_play;
    std::vector<Action> legal_actions;
    std::span<const HistoryEvent> history;
};

/// What an agent reports about its own pick: how many options it was shown
/// and which index it took. Agents that delegate to an LLM expose their
/// prompt/response transcript through `detail`.
struct AgentChoice {
    int presented_count = 0;
    int chosen_index = 0;
    bool fallback = false;
    std::string detail;  // serialized JSON, empty for plain agents
};

class Agent {
public:
    virtual ~Agent() = default;
    virtual Action act(const Observation& obs) = 0;
    virtual std::string_view name() const = 0;
    /// Populated by agents that track their own choice; plain agents leave
    /// it empty and the runner falls back to the legal-list index.
    virtual std::optional<AgentChoice> last_choice() const { return std::nullopt; }
};

}  // namespace guandan
