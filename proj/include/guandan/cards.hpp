#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "guandan/errors.hpp"

namespace guandan {

/// Card ranks from weakest to strongest. Jokers sit strictly above the Ace.
enum class Rank : std::uint8_t {
    Two = 0,
    Three,
    Four,
    Five,
    Six,
    Seven,
    Eight,
    Nine,
    Ten,
    Jack,
    Queen,
    King,
    Ace,
    BlackJoker,
    RedJoker,
};

constexpr int kNumRanks = 15;
constexpr int kNumNaturalRanks = 13;  // 2..A, excluding jokers

constexpr int ordinal(Rank r) { return static_cast<int>(r); }
constexpr Rank rank_from_ordinal(int o) { return static_cast<Rank>(o); }
constexpr bool is_joker(Rank r) { return r >= Rank::BlackJoker; }

enum class Suit : std::uint8_t {
    Hearts = 0,
    Spades,
    Clubs,
    Diamonds,
    None,  // jokers carry no suit
};

constexpr int kNumSuits = 4;

/// One of the 108 physical cards. deck_copy distinguishes the two physical
/// decks so a log line identifies exactly one card; gameplay never depends
/// on it.
struct Card {
    Rank rank = Rank::Two;
    Suit suit = Suit::None;
    std::uint8_t deck_copy = 0;

    friend constexpr auto operator<=>(const Card&, const Card&) = default;
};

constexpr bool is_joker(const Card& c) { return is_joker(c.rank); }

constexpr Card black_joker(std::uint8_t copy) { return Card{Rank::BlackJoker, Suit::None, copy}; }
constexpr Card red_joker(std::uint8_t copy) { return Card{Rank::RedJoker, Suit::None, copy}; }

/// The deal's designated rank. The Hearts card of this rank is the wildcard.
class Level {
public:
    explicit Level(Rank r) : rank_(r) {
        if (is_joker(r)) throw InvalidInputError("level rank cannot be a joker");
    }
    Rank rank() const { return rank_; }
    /// The wildcard face for this level.
    Card wildcard_face() const { return Card{rank_, Suit::Hearts, 0}; }

    friend bool operator==(const Level& a, const Level& b) { return a.rank_ == b.rank_; }

private:
    Rank rank_;
};

/// True iff the card acts as the deal's wildcard (the Hearts card of the
/// level rank).
inline bool is_wildcard(const Card& c, const Level& level) {
    return c.suit == Suit::Hearts && c.rank == level.rank();
}

/// A player's cards, kept sorted by (rank, suit, deck_copy).
using Hand = std::vector<Card>;

inline void sort_hand(Hand& h) { std::sort(h.begin(), h.end()); }

inline std::string_view rank_text(Rank r) {
    static constexpr std::array<std::string_view, kNumRanks> kNames = {
        "2", "3", "4", "5", "6", "7", "8", "9", "10", "J", "Q", "K", "A", "BJ", "RJ"};
    return kNames[ordinal(r)];
}

inline std::string_view suit_letter(Suit s) {
    switch (s) {
        case Suit::Hearts: return "H";
        case Suit::Spades: return "S";
        case Suit::Clubs: return "C";
        case Suit::Diamonds: return "D";
        case Suit::None: return "";
    }
    return "";
}

/// Log text form: "H J#1" for suited cards, "BJ#0"/"RJ#1" for jokers.
inline std::string card_text(const Card& c) {
    std::string out;
    if (!is_joker(c)) {
        out += suit_letter(c.suit);
        out += ' ';
    }
    out += rank_text(c.rank);
    out += '#';
    out += static_cast<char>('0' + c.deck_copy);
    return out;
}

/// Face text without deck copy, e.g. "S9" in a wildcard assignment.
inline std::string face_text(Rank r, Suit s) {
    std::string out;
    out += suit_letter(s);
    out += rank_text(r);
    return out;
}

inline Rank parse_rank(std::string_view text) {
    for (int o = 0; o < kNumRanks; ++o) {
        if (rank_text(rank_from_ordinal(o)) == text) return rank_from_ordinal(o);
    }
    throw InvalidInputError("unknown rank: " + std::string(text));
}

inline Suit parse_suit_letter(char c) {
    switch (c) {
        case 'H': return Suit::Hearts;
        case 'S': return Suit::Spades;
        case 'C': return Suit::Clubs;
        case 'D': return Suit::Diamonds;
    }
    throw InvalidInputError(std::string("unknown suit letter: ") + c);
}

/// Inverse of card_text.
inline Card parse_card(std::string_view text) {
    auto hash = text.rfind('#');
    if (hash == std::string_view::npos || hash + 2 != text.size())
        throw InvalidInputError("bad card text: " + std::string(text));
    std::uint8_t copy = static_cast<std::uint8_t>(text[hash + 1] - '0');
    if (copy > 1) throw InvalidInputError("bad deck copy in: " + std::string(text));
    std::string_view body = text.substr(0, hash);
    auto space = body.find(' ');
    if (space == std::string_view::npos) {
        return Card{parse_rank(body), Suit::None, copy};  // joker
    }
    if (space != 1) throw InvalidInputError("bad card text: " + std::string(text));
    Suit s = parse_suit_letter(body[0]);
    Rank r = parse_rank(body.substr(2));
    if (is_joker(r)) throw InvalidInputError("joker cannot carry a suit: " + std::string(text));
    return Card{r, s, copy};
}

/// Inverse of face_text.
inline std::pair<Rank, Suit> parse_face(std::string_view text) {
    if (text.empty()) throw InvalidInputError("empty face text");
    Suit s = parse_suit_letter(text[0]);
    Rank r = parse_rank(text.substr(1));
    return {r, s};
}

/// All 108 cards: every (rank 2..A, suit) twice, plus two of each joker.
inline std::vector<Card> build_deck() {
    std::vector<Card> deck;
    deck.reserve(108);
    for (std::uint8_t copy = 0; copy < 2; ++copy) {
        for (int r = 0; r < kNumNaturalRanks; ++r) {
            for (int s = 0; s < kNumSuits; ++s) {
                deck.push_back(Card{rank_from_ordinal(r), static_cast<Suit>(s), copy});
            }
        }
        deck.push_back(black_joker(copy));
        deck.push_back(red_joker(copy));
    }
    return deck;
}

/// Seeded Fisher-Yates permutation. Explicit so the shuffle is bit-stable
/// across platforms.
inline std::vector<Card> shuffled_deck(std::vector<Card> deck, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = deck.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(deck[i - 1], deck[j]);
    }
    return deck;
}

/// Deal four 27-card hands: shuffle, then card at position p goes to seat
/// p mod 4. Hands come back sorted.
inline std::array<Hand, 4> deal(const std::vector<Card>& deck, std::uint64_t seed) {
    if (deck.size() != 108) throw InvalidInputError("deck must have 108 cards");
    std::vector<Card> shuffled = shuffled_deck(deck, seed);
    std::array<Hand, 4> hands;
    for (auto& h : hands) h.reserve(27);
    for (std::size_t p = 0; p < shuffled.size(); ++p) {
        hands[p % 4].push_back(shuffled[p]);
    }
    for (auto& h : hands) sort_hand(h);
    return hands;
}

/// Remove one instance of each card in `cards` from `hand`. Throws if a
/// card is missing.
inline void remove_cards(Hand& hand, const std::vector<Card>& cards) {
    for (const Card& c : cards) {
        auto it = std::find(hand.begin(), hand.end(), c);
        if (it == hand.end())
            throw InvalidInputError("card not in hand: " + card_text(c));
        hand.erase(it);
    }
}

inline bool hand_contains(const Hand& hand, const std::vector<Card>& cards) {
    Hand tmp = hand;
    for (const Card& c : cards) {
        auto it = std::find(tmp.begin(), tmp.end(), c);
        if (it == tmp.end()) return false;
        tmp.erase(it);
    }
    return true;
}

}  // namespace guandan
