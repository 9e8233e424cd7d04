#pragma once

#include "guandan/engine.hpp"

namespace guandan::fixtures {

/// A reproducible mid-deal snapshot used by the prompt-rendering demo and
/// the test suites: level J, observer seat 0 holding 13 cards with a pair
/// of 9s standing from its teammate. Seat 2 opened with a joker single and
/// low pairs; seat 1 is down to 2 cards; seat 3 has passed throughout.
inline DealState reference_deal() {
    auto c = [](Rank r, Suit s, std::uint8_t copy = 0) { return Card{r, s, copy}; };
    DealState st;
    st.level = Level{Rank::Jack};
    st.hands[0] = {c(Rank::Two, Suit::Diamonds), c(Rank::Four, Suit::Diamonds),
                   c(Rank::Three, Suit::Clubs),  c(Rank::Four, Suit::Clubs),
                   c(Rank::Ace, Suit::Clubs),    c(Rank::Ace, Suit::Clubs, 1),
                   c(Rank::King, Suit::Hearts),  c(Rank::Ace, Suit::Hearts),
                   c(Rank::Two, Suit::Spades),   c(Rank::Three, Suit::Spades),
                   c(Rank::Four, Suit::Spades),  c(Rank::Eight, Suit::Spades),
                   c(Rank::Jack, Suit::Spades)};
    st.hands[1] = {c(Rank::Eight, Suit::Clubs), c(Rank::Eight, Suit::Hearts),
                   c(Rank::Five, Suit::Spades), c(Rank::Queen, Suit::Diamonds)};
    st.hands[2] = {black_joker(0),
                   c(Rank::Four, Suit::Diamonds, 1),
                   c(Rank::Four, Suit::Hearts),
                   c(Rank::Nine, Suit::Diamonds),
                   c(Rank::Nine, Suit::Hearts),
                   c(Rank::Five, Suit::Clubs),
                   c(Rank::Six, Suit::Clubs),
                   c(Rank::Seven, Suit::Diamonds),
                   c(Rank::Nine, Suit::Spades),
                   c(Rank::Ten, Suit::Spades),
                   c(Rank::Queen, Suit::Hearts),
                   c(Rank::King, Suit::Diamonds),
                   c(Rank::Jack, Suit::Clubs)};
    st.hands[3] = {c(Rank::Two, Suit::Hearts),   c(Rank::Three, Suit::Hearts),
                   c(Rank::Two, Suit::Clubs),    c(Rank::Seven, Suit::Clubs),
                   c(Rank::Five, Suit::Diamonds), c(Rank::Six, Suit::Diamonds),
                   c(Rank::Six, Suit::Spades),   c(Rank::Seven, Suit::Spades),
                   c(Rank::Queen, Suit::Spades), c(Rank::King, Suit::Spades),
                   c(Rank::Ace, Suit::Diamonds), c(Rank::Ten, Suit::Diamonds),
                   c(Rank::Queen, Suit::Clubs)};
    for (auto& h : st.hands) sort_hand(h);
    st.current_seat = 2;
    st.trick_leader = 2;

    auto play = [&](std::vector<Card> cards, ComboKind kind) {
        apply_action(st, Action::play(validate_combo(std::move(cards), kind, {}, st.level)));
    };
    play({black_joker(0)}, ComboKind::Single);
    apply_action(st, Action::pass());  // seat 3
    apply_action(st, Action::pass());  // seat 0
    apply_action(st, Action::pass());  // seat 1; trick closes, seat 2 leads
    play({c(Rank::Four, Suit::Diamonds, 1), c(Rank::Four, Suit::Hearts)}, ComboKind::Pair);
    apply_action(st, Action::pass());  // seat 3
    apply_action(st, Action::pass());  // seat 0
    play({c(Rank::Eight, Suit::Clubs), c(Rank::Eight, Suit::Hearts)}, ComboKind::Pair);
    play({c(Rank::Nine, Suit::Diamonds), c(Rank::Nine, Suit::Hearts)}, ComboKind::Pair);
    apply_action(st, Action::pass());  // seat 3; seat 0 to act
    return st;
}

}  // namespace guandan::fixtures
