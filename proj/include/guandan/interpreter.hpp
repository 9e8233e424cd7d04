#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "guandan/observation.hpp"

namespace guandan {

enum class Locale { Zh, En };

inline Locale parse_locale(std::string_view text) {
    if (text == "zh") return Locale::Zh;
    if (text == "en") return Locale::En;
    throw InvalidInputError("unknown locale: " + std::string(text));
}

inline std::string_view locale_name(Locale l) { return l == Locale::Zh ? "zh" : "en"; }

/// Game vocabulary per locale. These are fixed names of game objects; the
/// surrounding prose lives in the template files.
namespace text {

inline std::string_view suit_prompt_name(Suit s, Locale l) {
    static constexpr std::array<std::string_view, 4> kEn = {"Heart", "Spade", "Club", "Diamond"};
    static constexpr std::array<std::string_view, 4> kZh = {"红心", "黑桃", "梅花", "方片"};
    return (l == Locale::En ? kEn : kZh)[static_cast<int>(s)];
}

/// "Diamond 2" / "方片 2"; jokers are "Joker"/"Big Joker" and "小王"/"大王".
inline std::string card_prompt_name(const Card& c, Locale l) {
    if (c.rank == Rank::BlackJoker) return l == Locale::En ? "Joker" : "小王";
    if (c.rank == Rank::RedJoker) return l == Locale::En ? "Big Joker" : "大王";
    std::string out(suit_prompt_name(c.suit, l));
    out += ' ';
    out += rank_text(c.rank);
    return out;
}

inline std::string_view kind_prompt_name(ComboKind k, Locale l) {
    static constexpr std::array<std::string_view, kNumComboKinds> kEn = {
        "single card", "pair",     "triple",        "wood board", "steel board",
        "triple with a pair", "straight", "bomb", "straight flush", "heavenly bomb"};
    static constexpr std::array<std::string_view, kNumComboKinds> kZh = {
        "单牌", "对牌", "三同张", "木板", "钢板", "三带二", "顺子", "炸弹", "同花顺", "天王炸"};
    return (l == Locale::En ? kEn : kZh)[static_cast<int>(k)];
}

inline std::string_view role_name(int observer, int seat, Locale l) {
    if (seat == teammate_of(observer)) return l == Locale::En ? "teammate" : "队友";
    if (seat == prev_seat_of(observer)) return l == Locale::En ? "previous opponent" : "上家对手";
    return l == Locale::En ? "next opponent" : "下家对手";
}

/// Prompt display order: Diamond, Club, Heart, Spade, jokers last; rank
/// ascending within a suit.
inline std::vector<Card> prompt_sorted(std::vector<Card> cards) {
    auto suit_weight = [](Suit s) {
        switch (s) {
            case Suit::Diamonds: return 0;
            case Suit::Clubs: return 1;
            case Suit::Hearts: return 2;
            case Suit::Spades: return 3;
            case Suit::None: return 4;
        }
        return 4;
    };
    std::sort(cards.begin(), cards.end(), [&](const Card& a, const Card& b) {
        if (suit_weight(a.suit) != suit_weight(b.suit))
            return suit_weight(a.suit) < suit_weight(b.suit);
        if (a.rank != b.rank) return a.rank < b.rank;
        return a.deck_copy < b.deck_copy;
    });
    return cards;
}

/// "['Diamond 9', 'Heart 9']"
inline std::string bracket_list(const std::vector<Card>& cards, Locale l) {
    std::string out = "[";
    bool first = true;
    for (const Card& c : prompt_sorted(cards)) {
        if (!first) out += ", ";
        first = false;
        out += '\'';
        out += card_prompt_name(c, l);
        out += '\'';
    }
    out += ']';
    return out;
}

/// "Club A, Club A"
inline std::string plain_list(const std::vector<Card>& cards, Locale l) {
    std::string out;
    bool first = true;
    for (const Card& c : prompt_sorted(cards)) {
        if (!first) out += ", ";
        first = false;
        out += card_prompt_name(c, l);
    }
    return out;
}

}  // namespace text

/// Text templates loaded from templates/<locale>/{rules,observation,
/// history,plan,belief,second_order}.txt. Each file holds named sections
/// introduced by lines of the form `@@ name`; {{token}} placeholders are
/// substituted at render time.
class TemplateStore {
public:
    static constexpr std::array<std::string_view, 6> kFiles = {
        "rules", "observation", "history", "plan", "belief", "second_order"};

    explicit TemplateStore(const std::filesystem::path& dir) {
        for (Locale l : {Locale::Zh, Locale::En}) {
            for (std::string_view file : kFiles) {
                auto path = dir / std::string(locale_name(l)) / (std::string(file) + ".txt");
                std::ifstream in(path, std::ios::binary);
                if (!in) throw InvalidInputError("missing template file: " + path.string());
                std::stringstream buf;
                buf << in.rdbuf();
                parse_sections(l, file, buf.str());
            }
        }
    }

    const std::string& get(Locale l, std::string_view file, std::string_view section) const {
        auto it = sections_.find(key(l, file, section));
        if (it == sections_.end())
            throw InvalidInputError("missing template section: " + key(l, file, section));
        return it->second;
    }

private:
    static std::string key(Locale l, std::string_view file, std::string_view section) {
        std::string k(locale_name(l));
        k += '/';
        k += file;
        k += '#';
        k += section;
        return k;
    }

    void parse_sections(Locale l, std::string_view file, const std::string& content) {
        std::string section;
        std::string body;
        auto flush = [&] {
            if (section.empty()) return;
            while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
            sections_[key(l, file, section)] = body;
            body.clear();
        };
        std::istringstream in(content);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.rfind("@@ ", 0) == 0) {
                flush();
                section = line.substr(3);
            } else if (!section.empty()) {
                body += line;
                body += '\n';
            }
        }
        flush();
    }

    std::map<std::string, std::string> sections_;
};

using TokenMap = std::map<std::string, std::string, std::less<>>;

inline std::string render_template(std::string_view tmpl, const TokenMap& tokens) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out += tmpl.substr(pos);
            break;
        }
        auto close = tmpl.find("}}", open);
        if (close == std::string_view::npos) {
            out += tmpl.substr(pos);
            break;
        }
        out += tmpl.substr(pos, open - pos);
        auto name = tmpl.substr(open + 2, close - open - 2);
        auto it = tokens.find(name);
        if (it == tokens.end())
            throw InvalidInputError("unbound template token: " + std::string(name));
        out += it->second;
        pos = close + 2;
    }
    return out;
}

struct RenderedObservation {
    std::string text;
    Locale locale;
};

struct RenderedHistory {
    std::string text;
    Locale locale;
};

struct RuleText {
    std::string text;
    Locale locale;
};

/// The six-item state rendering of the observing seat.
inline RenderedObservation render_observation(const Observation& obs, Locale locale,
                                              const TemplateStore& store) {
    TokenMap tokens;
    tokens["hand_cards"] = text::bracket_list(obs.hand, locale);
    tokens["hand_count"] = std::to_string(obs.hand.size());
    tokens["level_card"] = text::card_prompt_name(obs.level.wildcard_face(), locale);
    tokens["teammate_seat"] = std::to_string(teammate_of(obs.seat));
    tokens["teammate_count"] = std::to_string(obs.teammate_count);
    tokens["next_seat"] = std::to_string(next_seat_of(obs.seat));
    tokens["next_count"] = std::to_string(obs.next_opponent_count);
    tokens["prev_seat"] = std::to_string(prev_seat_of(obs.seat));
    tokens["prev_count"] = std::to_string(obs.previous_opponent_count);
    tokens["lead_status"] =
        store.get(locale, "observation", obs.has_lead ? "lead_yes" : "lead_no");
    if (obs.last_play) {
        TokenMap last;
        last["last_role"] =
            std::string(text::role_name(obs.seat, obs.last_play->seat, locale));
        last["last_seat"] = std::to_string(obs.last_play->seat);
        last["last_kind"] =
            std::string(text::kind_prompt_name(obs.last_play->combo.kind, locale));
        last["last_cards"] = text::bracket_list(obs.last_play->combo.cards, locale);
        last["last_count"] = std::to_string(obs.last_play->hand_count);
        tokens["last_play"] = render_template(store.get(locale, "observation", "last_play"), last);
    } else {
        tokens["last_play"] = store.get(locale, "observation", "last_none");
    }
    return {render_template(store.get(locale, "observation", "body"), tokens), locale};
}

/// Numbered lines for the other players' actions, with role tags relative
/// to the observer. The observer's own events are skipped.
inline RenderedHistory render_history(std::span<const HistoryEvent> events, int observer_seat,
                                      Locale locale, const TemplateStore& store) {
    std::vector<std::string> lines;
    int n = 0;
    for (const HistoryEvent& e : events) {
        if (e.seat == observer_seat) continue;
        ++n;
        TokenMap tokens;
        tokens["n"] = std::to_string(n);
        tokens["seat"] = std::to_string(e.seat);
        tokens["role"] = std::string(text::role_name(observer_seat, e.seat, locale));
        if (e.action.is_pass()) {
            lines.push_back(render_template(store.get(locale, "history", "pass"), tokens));
        } else {
            const Combo& c = e.action.combo();
            tokens["kind"] = std::string(text::kind_prompt_name(c.kind, locale));
            tokens["cards"] = text::bracket_list(c.cards, locale);
            const char* section = c.cards.size() == 1 ? "play_one" : "play_many";
            lines.push_back(render_template(store.get(locale, "history", section), tokens));
        }
    }
    if (lines.empty()) return {store.get(locale, "history", "empty"), locale};
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return {out, locale};
}

/// The last `window` events by players other than the observer.
inline std::vector<HistoryEvent> others_window(std::span<const HistoryEvent> events,
                                               int observer_seat, int window) {
    std::vector<HistoryEvent> out;
    for (const HistoryEvent& e : events) {
        if (e.seat != observer_seat) out.push_back(e);
    }
    if (static_cast<int>(out.size()) > window) {
        out.erase(out.begin(), out.end() - window);
    }
    return out;
}

/// The game-rule text with the level substituted into the wildcard clause.
inline RuleText render_rules(const Level& level, Locale locale, const TemplateStore& store) {
    TokenMap tokens;
    tokens["level_rank"] = std::string(rank_text(level.rank()));
    tokens["level_card"] = text::card_prompt_name(level.wildcard_face(), locale);
    return {render_template(store.get(locale, "rules", "body"), tokens), locale};
}

}  // namespace guandan
