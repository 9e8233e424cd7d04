#include "guandan/combos.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace guandan;
using namespace guandan::testutil;

namespace {
const Level kLvl2{Rank::Two};
const Level kLvlJ{Rank::Jack};
}  // namespace

TEST(Validate, canonical_shape_examples) {
    // Pair of nines, as played in the worked game.
    Combo pair9 = combo(ComboKind::Pair, {{R9, D}, {R9, H}}, {}, kLvlJ);
    EXPECT_EQ(pair9.key_rank, Rank::Nine);

    // Wood board 223344, steel board 333444, 55522, straight 23456.
    Combo wood = combo(ComboKind::ThreeConsecutivePairs,
                       {{R2, S}, {R2, H}, {R3, C}, {R3, D}, {R4, S}, {R4, H}});
    EXPECT_EQ(wood.key_rank, Rank::Four);
    Combo steel = combo(ComboKind::TwoConsecutiveTriples,
                        {{R3, S}, {R3, H}, {R3, C}, {R4, S}, {R4, H}, {R4, C}});
    EXPECT_EQ(steel.key_rank, Rank::Four);
    Combo full = combo(ComboKind::TripleWithPair,
                       {{R5, S}, {R5, H}, {R5, C}, {R2, S}, {R2, H}});
    EXPECT_EQ(full.key_rank, Rank::Five);
    Combo straight =
        combo(ComboKind::Straight, {{R2, S}, {R3, H}, {R4, C}, {R5, D}, {R6, S}});
    EXPECT_EQ(straight.key_rank, Rank::Six);
}

TEST(Validate, joker_bomb_exact_cards) {
    Combo jb = validate_combo({black_joker(0), black_joker(1), red_joker(0), red_joker(1)},
                              ComboKind::JokerBomb, {}, kLvl2);
    EXPECT_EQ(jb.cards.size(), 4u);
    EXPECT_THROW(validate_combo({black_joker(0), black_joker(1), red_joker(0)},
                                ComboKind::JokerBomb, {}, kLvl2),
                 InvalidComboError);
}

TEST(Validate, straight_flush_with_wildcard) {
    Card wild{Rank::Jack, Suit::Hearts, 0};
    std::vector<Card> five = cards({{R5, H}, {R6, H}, {R7, H}, {R8, H}});
    five.push_back(wild);
    Combo sf = validate_combo(five, ComboKind::StraightFlush,
                              {{wild, CardFace{Rank::Nine, Suit::Hearts}}}, kLvlJ);
    EXPECT_EQ(sf.key_rank, Rank::Nine);
}

TEST(Validate, straight_with_gap_rejected) {
    EXPECT_THROW(
        combo(ComboKind::Straight, {{R2, S}, {R3, S}, {R4, S}, {R5, S}, {R7, S}}, {}, kLvl2),
        InvalidComboError);
}

TEST(Validate, ace_low_runs) {
    Combo low = combo(ComboKind::Straight, {{RA, S}, {R2, H}, {R3, C}, {R4, D}, {R5, S}});
    EXPECT_EQ(low.key_rank, Rank::Five);
    Combo high = combo(ComboKind::Straight, {{R10, S}, {RJ, H}, {RQ, C}, {RK, D}, {RA, S}});
    EXPECT_EQ(high.key_rank, Rank::Ace);
    // No wraparound.
    EXPECT_THROW(combo(ComboKind::Straight, {{RQ, S}, {RK, H}, {RA, C}, {R2, D}, {R3, S}}),
                 InvalidComboError);
    Combo low_wood = combo(ComboKind::ThreeConsecutivePairs,
                           {{RA, S}, {RA, H}, {R2, C}, {R2, D}, {R3, S}, {R3, H}});
    EXPECT_EQ(low_wood.key_rank, Rank::Three);
    Combo low_steel = combo(ComboKind::TwoConsecutiveTriples,
                            {{RA, S}, {RA, H}, {RA, C}, {R2, S}, {R2, H}, {R2, C}});
    EXPECT_EQ(low_steel.key_rank, Rank::Two);
    // The ace-low straight sorts below every other straight.
    EXPECT_TRUE(beats(combo(ComboKind::Straight, {{R2, S}, {R3, H}, {R4, C}, {R5, D}, {R6, S}}),
                      low));
    EXPECT_FALSE(beats(low, combo(ComboKind::Straight,
                                  {{R2, S}, {R3, H}, {R4, C}, {R5, D}, {R6, S}})));
}

TEST(Validate, wildcard_misuse) {
    Card wild{Rank::Jack, Suit::Hearts, 0};
    // Representing a joker is rejected outright.
    EXPECT_THROW(validate_combo({wild, black_joker(0)}, ComboKind::Pair,
                                {{wild, CardFace{Rank::BlackJoker, Suit::None}}}, kLvlJ),
                 InvalidWildError);
    // A non-wildcard key is rejected.
    Card spade_j{Rank::Jack, Suit::Spades, 0};
    EXPECT_THROW(validate_combo({spade_j, Card{Rank::Nine, Suit::Hearts, 0}}, ComboKind::Pair,
                                {{spade_j, CardFace{Rank::Nine, Suit::Spades}}}, kLvlJ),
                 InvalidWildError);
    // Wild key must be among the played cards.
    EXPECT_THROW(validate_combo(cards({{R9, D}, {R9, H}}), ComboKind::Pair,
                                {{wild, CardFace{Rank::Nine, Suit::Spades}}}, kLvlJ),
                 InvalidComboError);
}

TEST(Validate, bombs) {
    Combo b4 = combo(ComboKind::Bomb, {{R5, S}, {R5, H}, {R5, C}, {R5, D}});
    EXPECT_EQ(b4.cards.size(), 4u);
    Combo b8 = combo(ComboKind::Bomb, {{R3, S}, {R3, H}, {R3, C}, {R3, D},
                                       {R3, S}, {R3, H}, {R3, C}, {R3, D}});
    EXPECT_EQ(b8.cards.size(), 8u);
    // Jokers cannot form rank bombs.
    EXPECT_THROW(validate_combo({black_joker(0), black_joker(1), red_joker(0), red_joker(1)},
                                ComboKind::Bomb, {}, kLvl2),
                 InvalidComboError);
    // A wildcard may join a rank bomb.
    Card wild{Rank::Jack, Suit::Hearts, 0};
    std::vector<Card> four = cards({{R5, S}, {R5, H}, {R5, C}});
    four.push_back(wild);
    Combo wb = validate_combo(four, ComboKind::Bomb,
                              {{wild, CardFace{Rank::Five, Suit::Diamonds}}}, kLvlJ);
    EXPECT_EQ(wb.key_rank, Rank::Five);
}

TEST(Validate, pair_of_jokers_and_triple_with_joker_pair) {
    Combo bj_pair = validate_combo({black_joker(0), black_joker(1)}, ComboKind::Pair, {}, kLvl2);
    EXPECT_EQ(bj_pair.key_rank, Rank::BlackJoker);
    EXPECT_THROW(validate_combo({black_joker(0), red_joker(0)}, ComboKind::Pair, {}, kLvl2),
                 InvalidComboError);
    std::vector<Card> five = cards({{R5, S}, {R5, H}, {R5, C}});
    five.push_back(black_joker(0));
    five.push_back(black_joker(1));
    Combo full = validate_combo(five, ComboKind::TripleWithPair, {}, kLvl2);
    EXPECT_EQ(full.key_rank, Rank::Five);
}

namespace {

Combo bomb_of(Rank r, int size) {
    std::vector<Card> c;
    for (int i = 0; i < size; ++i) {
        c.push_back(Card{r, static_cast<Suit>(i % 4), static_cast<std::uint8_t>(i / 4)});
    }
    return validate_combo(std::move(c), ComboKind::Bomb, {}, Level{Rank::Two});
}

Combo straight_flush_of(Rank high, Suit suit) {
    std::vector<Card> c;
    for (int o = ordinal(high) - 4; o <= ordinal(high); ++o) {
        c.push_back(Card{rank_from_ordinal(o), suit, 0});
    }
    return validate_combo(std::move(c), ComboKind::StraightFlush, {}, Level{Rank::Two});
}

Combo joker_bomb() {
    return validate_combo({black_joker(0), black_joker(1), red_joker(0), red_joker(1)},
                          ComboKind::JokerBomb, {}, Level{Rank::Two});
}

}  // namespace

TEST(Beats, category_one_same_kind_same_count_higher_key) {
    Combo pair9 = combo(ComboKind::Pair, {{R9, D}, {R9, H}});
    Combo pair8 = combo(ComboKind::Pair, {{R8, C}, {R8, H}});
    EXPECT_TRUE(beats(pair9, pair8));
    EXPECT_FALSE(beats(pair8, pair9));
    EXPECT_FALSE(beats(pair9, pair9));  // irreflexive

    // Different Category One kinds never beat each other.
    Combo triple = combo(ComboKind::Triple, {{R2, S}, {R2, H}, {R2, C}});
    EXPECT_FALSE(beats(triple, pair8));
    EXPECT_FALSE(beats(pair9, triple));
    Combo wood = combo(ComboKind::ThreeConsecutivePairs,
                       {{R2, S}, {R2, H}, {R3, C}, {R3, D}, {R4, S}, {R4, H}});
    Combo steel = combo(ComboKind::TwoConsecutiveTriples,
                        {{R3, S}, {R3, H}, {R3, C}, {R4, S}, {R4, H}, {R4, C}});
    EXPECT_FALSE(beats(steel, wood));
    EXPECT_FALSE(beats(wood, steel));
}

TEST(Beats, triple_with_pair_compares_triple_only) {
    Combo low_triple_high_pair = combo(ComboKind::TripleWithPair,
                                       {{R5, S}, {R5, H}, {R5, C}, {RA, S}, {RA, H}});
    Combo high_triple_low_pair = combo(ComboKind::TripleWithPair,
                                       {{R6, S}, {R6, H}, {R6, C}, {R2, S}, {R2, H}});
    EXPECT_TRUE(beats(high_triple_low_pair, low_triple_high_pair));
    EXPECT_FALSE(beats(low_triple_high_pair, high_triple_low_pair));
}

TEST(Beats, category_two_over_category_one) {
    Combo straight = combo(ComboKind::Straight, {{R2, S}, {R3, H}, {R4, C}, {R5, D}, {R6, S}});
    EXPECT_TRUE(beats(bomb_of(Rank::Five, 4), straight));
    EXPECT_TRUE(beats(straight_flush_of(Rank::Six, Suit::Hearts), straight));
    EXPECT_TRUE(beats(joker_bomb(), straight));
    EXPECT_FALSE(beats(straight, bomb_of(Rank::Five, 4)));
}

TEST(Beats, bomb_ladder) {
    EXPECT_TRUE(beats(bomb_of(Rank::Five, 5), bomb_of(Rank::Ace, 4)));   // more cards
    EXPECT_TRUE(beats(bomb_of(Rank::Six, 4), bomb_of(Rank::Five, 4)));   // same count, rank
    EXPECT_FALSE(beats(bomb_of(Rank::Five, 4), bomb_of(Rank::Five, 4)));
}

TEST(Beats, straight_flush_vs_bombs) {
    Combo sf = straight_flush_of(Rank::Six, Suit::Spades);
    EXPECT_TRUE(beats(sf, bomb_of(Rank::Ace, 4)));
    EXPECT_TRUE(beats(sf, bomb_of(Rank::Ace, 5)));
    EXPECT_FALSE(beats(sf, bomb_of(Rank::Two, 6)));
    EXPECT_TRUE(beats(bomb_of(Rank::Two, 6), sf));
    EXPECT_FALSE(beats(bomb_of(Rank::Ace, 5), sf));
    EXPECT_TRUE(beats(straight_flush_of(Rank::Seven, Suit::Clubs), sf));
}

TEST(Beats, joker_bomb_is_maximum) {
    Combo jb = joker_bomb();
    EXPECT_TRUE(beats(jb, bomb_of(Rank::Ace, 8)));
    EXPECT_FALSE(beats(bomb_of(Rank::Ace, 8), jb));
    EXPECT_FALSE(beats(jb, jb));
    EXPECT_TRUE(beats(jb, straight_flush_of(Rank::Ace, Suit::Hearts)));
}

TEST(Beats, antisymmetric_on_sampled_pairs) {
    // All combos from two crafted hands under level 2, pairwise.
    Hand h1 = cards({{R2, S}, {R2, H}, {R3, C}, {R3, D}, {R4, S}, {R4, H}, {R5, S}, {R5, C}});
    Hand h2 = cards({{R9, S}, {R9, H}, {R9, C}, {R9, D}, {R10, S}, {RJ, H}, {RQ, C}, {RK, D}});
    auto a1 = enumerate_legal_actions(h1, std::nullopt, kLvl2);
    auto a2 = enumerate_legal_actions(h2, std::nullopt, kLvl2);
    for (const Action& x : a1) {
        for (const Action& y : a2) {
            EXPECT_FALSE(beats(x.combo(), y.combo()) && beats(y.combo(), x.combo()));
        }
    }
}

TEST(ComboText, log_form) {
    Combo pair9 = combo(ComboKind::Pair, {{R9, D}, {R9, H}});
    EXPECT_EQ(combo_text(pair9), "Pair[9]: H 9#0,D 9#0");
    Card wild{Rank::Jack, Suit::Hearts, 0};
    std::vector<Card> five = cards({{R5, H}, {R6, H}, {R7, H}, {R8, H}});
    five.push_back(wild);
    Combo sf = validate_combo(five, ComboKind::StraightFlush,
                              {{wild, CardFace{Rank::Nine, Suit::Hearts}}}, kLvlJ);
    EXPECT_EQ(combo_text(sf), "StraightFlush[9]: H 5#0,H 6#0,H 7#0,H 8#0,H J#0→H9");
}
