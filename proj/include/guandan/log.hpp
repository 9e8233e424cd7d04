#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "guandan/engine.hpp"
#include "json.hpp"

namespace guandan {

using ordered_json = nlohmann::ordered_json;

/// One game-log event line. Field names are part of the on-disk contract:
/// {deal, step, seat, action_kind, cards[], wild{}, hand_sizes[4], incumbent}
inline ordered_json event_json(int deal, int step, int seat, const Action& action,
                               const DealState& after) {
    ordered_json j;
    j["deal"] = deal;
    j["step"] = step;
    j["seat"] = seat;
    ordered_json cards = ordered_json::array();
    ordered_json wild = ordered_json::object();
    if (action.is_pass()) {
        j["action_kind"] = "Pass";
    } else {
        const Combo& c = action.combo();
        j["action_kind"] = std::string(kind_name(c.kind));
        for (const Card& card : c.cards) cards.push_back(card_text(card));
        for (const auto& [w, face] : c.wild)
            wild[card_text(w)] = face_text(face.rank, face.suit);
    }
    j["cards"] = std::move(cards);
    j["wild"] = std::move(wild);
    ordered_json sizes = ordered_json::array();
    for (const Hand& h : after.hands) sizes.push_back(h.size());
    j["hand_sizes"] = std::move(sizes);
    if (after.incumbent) {
        j["incumbent"] = {{"seat", after.incumbent->first},
                          {"combo", combo_text(after.incumbent->second)}};
    } else {
        j["incumbent"] = nullptr;
    }
    return j;
}

/// Terminal line per deal: {deal, finish_order[], team_points{}}
inline ordered_json terminal_json(int deal, const DealResult& result) {
    ordered_json j;
    j["deal"] = deal;
    j["finish_order"] = result.finish_order;
    j["team_points"] = {{"02", result.team_points[0]}, {"13", result.team_points[1]}};
    return j;
}

class GameLogWriter {
public:
    explicit GameLogWriter(std::ostream& out) : out_(out) {}

    void event(int deal, int step, int seat, const Action& action, const DealState& after) {
        out_ << event_json(deal, step, seat, action, after).dump() << '\n';
    }

    void terminal(int deal, const DealResult& result) {
        out_ << terminal_json(deal, result).dump() << '\n';
    }

private:
    std::ostream& out_;
};

struct LoggedEvent {
    int step = 0;
    int seat = 0;
    std::string action_kind;
    std::vector<Card> cards;
    WildAssignment wild;
};

struct LoggedDeal {
    int deal = 0;
    std::vector<LoggedEvent> events;
};

/// Parses a game log back into per-deal event lists. Terminal lines (no
/// action_kind) close the deal.
inline std::vector<LoggedDeal> parse_game_log(std::istream& in) {
    std::vector<LoggedDeal> deals;
    auto deal_for = [&](int d) -> LoggedDeal& {
        for (LoggedDeal& ld : deals) {
            if (ld.deal == d) return ld;
        }
        deals.push_back(LoggedDeal{d, {}});
        return deals.back();
    };
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        if (!j.contains("action_kind")) continue;
        LoggedEvent e;
        e.step = j.at("step").get<int>();
        e.seat = j.at("seat").get<int>();
        e.action_kind = j.at("action_kind").get<std::string>();
        for (const auto& c : j.at("cards")) e.cards.push_back(parse_card(c.get<std::string>()));
        for (const auto& [k, v] : j.at("wild").items()) {
            auto [rank, suit] = parse_face(v.get<std::string>());
            e.wild.emplace_back(parse_card(k), CardFace{rank, suit});
        }
        deal_for(j.at("deal").get<int>()).events.push_back(std::move(e));
    }
    return deals;
}

inline Action action_from_logged(const LoggedEvent& e, const Level& level) {
    if (e.action_kind == "Pass") return Action::pass();
    return Action::play(validate_combo(e.cards, parse_kind(e.action_kind), e.wild, level));
}

/// Rebuilds the final state of a logged deal by folding its events over a
/// fresh deal from the same config. The first event's seat restores the
/// leader.
inline DealState replay_deal(const MatchConfig& cfg, int deal_index,
                             const std::vector<LoggedEvent>& events) {
    DealState st = new_deal(cfg, deal_index);
    if (!events.empty()) {
        st.current_seat = events.front().seat;
        st.trick_leader = events.front().seat;
    }
    for (const LoggedEvent& e : events) {
        if (e.seat != st.current_seat)
            throw InvalidStateError("log replay diverged: unexpected seat");
        apply_action(st, action_from_logged(e, st.level));
    }
    return st;
}

}  // namespace guandan
