#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "guandan/cards.hpp"
#include "guandan/errors.hpp"

namespace guandan {

/// Combo kinds in enumeration order. Bomb, StraightFlush and JokerBomb form
/// Category Two; everything before them is Category One.
enum class ComboKind : std::uint8_t {
    Single = 0,
    Pair,
    Triple,
    ThreeConsecutivePairs,  // "Wood Board", e.g. 223344
    TwoConsecutiveTriples,  // "Steel Board", e.g. 333444
    TripleWithPair,         // e.g. 55522
    Straight,
    Bomb,          // 4-8 cards of one rank
    StraightFlush,
    JokerBomb,     // both black jokers + both red jokers
};

constexpr int kNumComboKinds = 10;

constexpr bool is_category_two(ComboKind k) { return k >= ComboKind::Bomb; }

inline std::string_view kind_name(ComboKind k) {
    static constexpr std::array<std::string_view, kNumComboKinds> kNames = {
        "Single",        "Pair",     "Triple", "ThreeConsecutivePairs",
        "TwoConsecutiveTriples", "TripleWithPair", "Straight", "Bomb",
        "StraightFlush", "JokerBomb"};
    return kNames[static_cast<int>(k)];
}

inline ComboKind parse_kind(std::string_view text) {
    for (int k = 0; k < kNumComboKinds; ++k) {
        if (kind_name(static_cast<ComboKind>(k)) == text) return static_cast<ComboKind>(k);
    }
    throw InvalidInputError("unknown combo kind: " + std::string(text));
}

/// The face a wildcard stands in for.
struct CardFace {
    Rank rank;
    Suit suit;
    friend constexpr auto operator<=>(const CardFace&, const CardFace&) = default;
};

/// Wildcard card -> represented face, sorted by card.
using WildAssignment = std::vector<std::pair<Card, CardFace>>;

/// A validated play. `key_rank` is the comparison rank: the repeated rank
/// for same-rank kinds (the triple's rank for TripleWithPair), the highest
/// rank of the run for sequence kinds. Ace-low runs key on their top card
/// (A-2-3-4-5 keys on 5), which sorts them below every other run.
struct Combo {
    ComboKind kind;
    std::vector<Card> cards;  // sorted
    WildAssignment wild;      // sorted by card
    Rank key_rank;

    friend bool operator==(const Combo&, const Combo&) = default;
};

/// Either a play or a pass. Pass is only legal when following.
class Action {
public:
    static Action pass() { return Action{}; }
    static Action play(Combo c) {
        Action a;
        a.combo_ = std::move(c);
        return a;
    }

    bool is_pass() const { return !combo_.has_value(); }
    const Combo& combo() const { return *combo_; }

    friend bool operator==(const Action&, const Action&) = default;

private:
    std::optional<Combo> combo_;
};

/// `kind[key]: card,card,...` with wildcard uses rendered as `H J#0→S9`.
inline std::string combo_text(const Combo& c) {
    std::string out(kind_name(c.kind));
    out += '[';
    out += rank_text(c.key_rank);
    out += "]: ";
    bool first = true;
    for (const Card& card : c.cards) {
        if (!first) out += ',';
        first = false;
        out += card_text(card);
        for (const auto& [w, face] : c.wild) {
            if (w == card) {
                out += "→";  // →
                out += face_text(face.rank, face.suit);
                break;
            }
        }
    }
    return out;
}

inline std::string action_text(const Action& a) {
    return a.is_pass() ? "Pass" : combo_text(a.combo());
}

namespace detail {

/// Effective face of each card after wildcard substitution.
inline std::vector<CardFace> effective_faces(const std::vector<Card>& cards,
                                             const WildAssignment& wild) {
    std::vector<CardFace> faces;
    faces.reserve(cards.size());
    for (const Card& c : cards) {
        CardFace f{c.rank, c.suit};
        for (const auto& [w, rep] : wild) {
            if (w == c) {
                f = rep;
                break;
            }
        }
        faces.push_back(f);
    }
    return faces;
}

struct RankProfile {
    std::array<int, kNumRanks> count{};
    int total = 0;
    bool has_joker = false;
};

inline RankProfile rank_profile(const std::vector<CardFace>& faces) {
    RankProfile p;
    for (const CardFace& f : faces) {
        p.count[ordinal(f.rank)]++;
        p.total++;
        if (is_joker(f.rank)) p.has_joker = true;
    }
    return p;
}

/// Matches `profile` against a run of `len` adjacent ranks, each appearing
/// `mult` times. Ace may sit below 2; no wraparound. Returns the key rank.
inline std::optional<Rank> match_run(const RankProfile& p, int len, int mult) {
    if (p.has_joker || p.total != len * mult) return std::nullopt;
    std::vector<int> present;
    for (int o = 0; o < kNumNaturalRanks; ++o) {
        if (p.count[o] == mult) {
            present.push_back(o);
        } else if (p.count[o] != 0) {
            return std::nullopt;
        }
    }
    if (static_cast<int>(present.size()) != len) return std::nullopt;
    // Ace-low: ranks are exactly {2..} up to len-1 plus the Ace.
    if (present.back() == ordinal(Rank::Ace) && present.front() == 0) {
        bool low = true;
        for (int i = 0; i + 1 < len; ++i) {
            if (present[i] != i) low = false;
        }
        if (low) return rank_from_ordinal(len - 2);
    }
    for (int i = 0; i + 1 < len; ++i) {
        if (present[i] + 1 != present[i + 1]) return std::nullopt;
    }
    return rank_from_ordinal(present.back());
}

}  // namespace detail

/// Shape-checks a declared combo. Returns nullopt on any mismatch; use
/// validate_combo for diagnostics.
inline std::optional<Combo> make_combo(std::vector<Card> cards, ComboKind kind,
                                       WildAssignment wild, const Level& level) {
    std::sort(cards.begin(), cards.end());
    std::sort(wild.begin(), wild.end());
    if (std::adjacent_find(cards.begin(), cards.end()) != cards.end()) return std::nullopt;
    for (const auto& [w, rep] : wild) {
        if (!is_wildcard(w, level)) return std::nullopt;
        if (is_joker(rep.rank)) return std::nullopt;
        if (!std::binary_search(cards.begin(), cards.end(), w)) return std::nullopt;
    }
    if (std::adjacent_find(wild.begin(), wild.end(), [](const auto& a, const auto& b) {
            return a.first == b.first;
        }) != wild.end())
        return std::nullopt;

    const auto faces = detail::effective_faces(cards, wild);
    const auto profile = detail::rank_profile(faces);
    const int n = profile.total;

    std::optional<Rank> key;
    switch (kind) {
        case ComboKind::Single:
            if (n == 1) key = faces[0].rank;
            break;
        case ComboKind::Pair:
            if (n == 2 && faces[0].rank == faces[1].rank) key = faces[0].rank;
            break;
        case ComboKind::Triple:
            if (n == 3 && profile.count[ordinal(faces[0].rank)] == 3 && !profile.has_joker)
                key = faces[0].rank;
            break;
        case ComboKind::TripleWithPair: {
            if (n != 5) break;
            Rank triple_rank = Rank::Two, pair_rank = Rank::Two;
            int triples = 0, pairs = 0, other = 0;
            for (int o = 0; o < kNumRanks; ++o) {
                if (profile.count[o] == 3) {
                    triples++;
                    triple_rank = rank_from_ordinal(o);
                } else if (profile.count[o] == 2) {
                    pairs++;
                    pair_rank = rank_from_ordinal(o);
                } else if (profile.count[o] != 0) {
                    other++;
                }
            }
            // A joker pair may ride along; the triple itself is never jokers.
            if (triples == 1 && pairs == 1 && other == 0 && !is_joker(triple_rank))
                key = triple_rank;
            (void)pair_rank;
            break;
        }
        case ComboKind::ThreeConsecutivePairs:
            key = detail::match_run(profile, 3, 2);
            break;
        case ComboKind::TwoConsecutiveTriples:
            key = detail::match_run(profile, 2, 3);
            break;
        case ComboKind::Straight:
            key = detail::match_run(profile, 5, 1);
            break;
        case ComboKind::Bomb:
            if (n >= 4 && n <= 8 && profile.count[ordinal(faces[0].rank)] == n &&
                !profile.has_joker)
                key = faces[0].rank;
            break;
        case ComboKind::StraightFlush: {
            key = detail::match_run(profile, 5, 1);
            if (key) {
                for (const CardFace& f : faces) {
                    if (f.suit != faces[0].suit) {
                        key = std::nullopt;
                        break;
                    }
                }
            }
            break;
        }
        case ComboKind::JokerBomb:
            if (n == 4 && profile.count[ordinal(Rank::BlackJoker)] == 2 &&
                profile.count[ordinal(Rank::RedJoker)] == 2)
                key = Rank::RedJoker;
            break;
    }
    if (!key) return std::nullopt;
    return Combo{kind, std::move(cards), std::move(wild), *key};
}

/// Throwing variant of make_combo: names the expected shape on mismatch and
/// distinguishes bad wildcard assignments.
inline Combo validate_combo(std::vector<Card> cards, ComboKind kind, WildAssignment wild,
                            const Level& level) {
    for (const auto& [w, rep] : wild) {
        if (!is_wildcard(w, level))
            throw InvalidWildError("wild key is not the level wildcard: " + card_text(w));
        if (is_joker(rep.rank))
            throw InvalidWildError("wildcard cannot represent a joker");
    }
    auto combo = make_combo(std::move(cards), kind, std::move(wild), level);
    if (!combo)
        throw InvalidComboError("cards do not form a " + std::string(kind_name(kind)));
    return *std::move(combo);
}

/// The strict "can be played over" relation. Both combos must be valid
/// under the same level; the level itself never enters the comparison.
inline bool beats(const Combo& challenger, const Combo& incumbent) {
    const std::size_t cn = challenger.cards.size();
    const std::size_t in = incumbent.cards.size();
    if (challenger.kind == ComboKind::JokerBomb) return incumbent.kind != ComboKind::JokerBomb;
    if (incumbent.kind == ComboKind::JokerBomb) return false;
    if (challenger.kind == ComboKind::Bomb) {
        if (incumbent.kind == ComboKind::Bomb)
            return cn > in || (cn == in && challenger.key_rank > incumbent.key_rank);
        if (incumbent.kind == ComboKind::StraightFlush) return cn >= 6;
        return true;  // bomb over any Category One
    }
    if (challenger.kind == ComboKind::StraightFlush) {
        if (incumbent.kind == ComboKind::StraightFlush)
            return challenger.key_rank > incumbent.key_rank;
        if (incumbent.kind == ComboKind::Bomb) return in <= 5;
        return true;
    }
    if (is_category_two(incumbent.kind)) return false;
    return challenger.kind == incumbent.kind && cn == in &&
           challenger.key_rank > incumbent.key_rank;
}

namespace detail {

/// Dedup identity: kind, key rank and size, the effective rank multiset,
/// and the ranks the wildcards stand in for. Deck copies and any suit
/// variation that leaves kind and key unchanged collapse to one action;
/// spending a wildcard remains distinct from the all-natural version of
/// the same ranks. A wildcard representing its own rank counts as natural.
struct ComboIdentity {
    std::uint64_t kind_key;
    std::uint64_t eff_ranks;
    std::uint64_t wild_reps;
    friend bool operator==(const ComboIdentity&, const ComboIdentity&) = default;
};

struct ComboIdentityHash {
    std::size_t operator()(const ComboIdentity& id) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t v : {id.kind_key, id.eff_ranks, id.wild_reps}) {
            h ^= v;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

inline ComboIdentity combo_identity(const Combo& c) {
    ComboIdentity id{};
    id.kind_key = (static_cast<std::uint64_t>(c.kind) << 16) |
                  (static_cast<std::uint64_t>(c.key_rank) << 8) | c.cards.size();
    const auto faces = effective_faces(c.cards, c.wild);
    for (const CardFace& f : faces) id.eff_ranks += 1ULL << (4 * ordinal(f.rank));
    for (const auto& [w, rep] : c.wild) {
        if (rep.rank != w.rank) id.wild_reps += 1ULL << (4 * ordinal(rep.rank));
    }
    return id;
}

/// Cards of one (rank, suit) face, lowest deck copy first.
struct FaceGroup {
    Suit suit;
    int count = 0;
    std::array<Card, 2> cards;
};

struct HandIndex {
    std::array<std::vector<FaceGroup>, kNumRanks> by_rank;  // wildcards excluded
    std::array<int, kNumRanks> rank_count{};
    std::vector<Card> wilds;

    HandIndex(const Hand& hand, const Level& level) {
        Hand sorted = hand;
        sort_hand(sorted);
        for (const Card& c : sorted) {
            if (is_wildcard(c, level)) {
                wilds.push_back(c);
                continue;
            }
            auto& groups = by_rank[ordinal(c.rank)];
            rank_count[ordinal(c.rank)]++;
            if (!groups.empty() && groups.back().suit == c.suit) {
                groups.back().cards[groups.back().count++] = c;
            } else {
                FaceGroup g{c.suit, 1, {c, c}};
                groups.push_back(g);
            }
        }
        // Duplicate faces first, so the canonical pick for a pair of aces
        // holding CA CA HA is the two club aces.
        for (auto& groups : by_rank) {
            std::stable_sort(groups.begin(), groups.end(),
                             [](const FaceGroup& a, const FaceGroup& b) {
                                 return a.count > b.count;
                             });
        }
    }

    int wild_count() const { return static_cast<int>(wilds.size()); }

    /// Canonical selection of `need` natural cards of rank `r`.
    void pick_naturals(Rank r, int need, std::vector<Card>& out) const {
        for (const FaceGroup& g : by_rank[ordinal(r)]) {
            for (int t = 0; t < g.count && need > 0; ++t, --need) out.push_back(g.cards[t]);
        }
    }
};

/// One way to assemble `size` cards of a single rank: canonical naturals
/// plus `wilds_used` wildcards. Suit variants collapse in dedup, so one
/// part per wildcard count suffices.
struct RankPart {
    std::vector<Card> cards;
    int wilds_used = 0;
};

inline std::vector<RankPart> rank_parts(const HandIndex& idx, Rank r, int size, int max_wilds) {
    std::vector<RankPart> out;
    if (is_joker(r)) max_wilds = 0;  // wildcards never represent jokers
    const int naturals = idx.rank_count[ordinal(r)];
    for (int u = 0; u <= max_wilds && u <= size; ++u) {
        const int m = size - u;
        if (m > naturals) continue;
        RankPart part;
        part.wilds_used = u;
        idx.pick_naturals(r, m, part.cards);
        out.push_back(std::move(part));
    }
    return out;
}

struct RunSpec {
    std::vector<Rank> ranks;
    Rank key;
};

/// Adjacent-rank runs of the given length, Ace-low first.
inline std::vector<RunSpec> run_specs(int len) {
    std::vector<RunSpec> runs;
    RunSpec low;
    low.ranks.push_back(Rank::Ace);
    for (int o = 0; o + 1 < len; ++o) low.ranks.push_back(rank_from_ordinal(o));
    low.key = rank_from_ordinal(len - 2);
    runs.push_back(std::move(low));
    for (int start = 0; start + len <= kNumNaturalRanks; ++start) {
        RunSpec r;
        for (int o = start; o < start + len; ++o) r.ranks.push_back(rank_from_ordinal(o));
        r.key = rank_from_ordinal(start + len - 1);
        runs.push_back(std::move(r));
    }
    return runs;
}

class Enumerator {
public:
    Enumerator(const Hand& hand, const Level& level) : level_(level), idx_(hand, level) {}

    /// All distinct combos, optionally restricted to those beating `incumbent`.
    std::vector<Combo> enumerate(const std::optional<Combo>& incumbent) {
        if (!incumbent) {
            singles(-1);
            same_rank(ComboKind::Pair, 2, -1);
            same_rank(ComboKind::Triple, 3, -1);
            run_multi(ComboKind::ThreeConsecutivePairs, 3, 2, -1);
            run_multi(ComboKind::TwoConsecutiveTriples, 2, 3, -1);
            triple_with_pair(-1);
            straights(-1);
            bombs(4, 8, -1);
            straight_flushes(-1);
            joker_bomb();
        } else {
            follow(*incumbent);
        }
        return std::move(out_);
    }

private:
    void follow(const Combo& inc) {
        const int key = ordinal(inc.key_rank);
        const int size = static_cast<int>(inc.cards.size());
        switch (inc.kind) {
            case ComboKind::Single: singles(key); break;
            case ComboKind::Pair: same_rank(ComboKind::Pair, 2, key); break;
            case ComboKind::Triple: same_rank(ComboKind::Triple, 3, key); break;
            case ComboKind::ThreeConsecutivePairs:
                run_multi(ComboKind::ThreeConsecutivePairs, 3, 2, key);
                break;
            case ComboKind::TwoConsecutiveTriples:
                run_multi(ComboKind::TwoConsecutiveTriples, 2, 3, key);
                break;
            case ComboKind::TripleWithPair: triple_with_pair(key); break;
            case ComboKind::Straight: straights(key); break;
            case ComboKind::Bomb: break;  // handled below
            case ComboKind::StraightFlush: break;
            case ComboKind::JokerBomb: return;  // nothing beats it
        }
        if (inc.kind == ComboKind::Bomb) {
            bombs(size, size, key);       // same size, higher rank
            if (size < 8) bombs(size + 1, 8, -1);
            if (size <= 5) straight_flushes(-1);
        } else if (inc.kind == ComboKind::StraightFlush) {
            bombs(6, 8, -1);
            straight_flushes(key);
        } else {
            bombs(4, 8, -1);
            straight_flushes(-1);
        }
        joker_bomb();
    }

    void singles(int min_key) {
        for (int o = 0; o < kNumRanks; ++o) {
            if (o <= min_key) continue;
            for (const FaceGroup& g : idx_.by_rank[o]) {
                emit(ComboKind::Single, rank_from_ordinal(o), {g.cards[0]}, 0, Rank::Two);
            }
        }
        if (idx_.wild_count() > 0) {
            for (int o = 0; o < kNumNaturalRanks; ++o) {
                if (o <= min_key) continue;
                emit(ComboKind::Single, rank_from_ordinal(o), {}, 1, rank_from_ordinal(o));
            }
        }
    }

    void same_rank(ComboKind kind, int size, int min_key) {
        const bool jokers_ok = kind == ComboKind::Pair;
        const int top = jokers_ok ? kNumRanks : kNumNaturalRanks;
        for (int o = 0; o < top; ++o) {
            if (o <= min_key) continue;
            Rank r = rank_from_ordinal(o);
            for (const RankPart& part : rank_parts(idx_, r, size, idx_.wild_count())) {
                emit(kind, r, part.cards, part.wilds_used, r);
            }
        }
    }

    void bombs(int min_size, int max_size, int min_key) {
        for (int size = min_size; size <= max_size; ++size) {
            for (int o = 0; o < kNumNaturalRanks; ++o) {
                if (o <= min_key) continue;
                Rank r = rank_from_ordinal(o);
                for (const RankPart& part : rank_parts(idx_, r, size, idx_.wild_count())) {
                    emit(ComboKind::Bomb, r, part.cards, part.wilds_used, r);
                }
            }
        }
    }

    void triple_with_pair(int min_key) {
        const int w = idx_.wild_count();
        for (int to = 0; to < kNumNaturalRanks; ++to) {
            if (to <= min_key) continue;
            Rank tr = rank_from_ordinal(to);
            auto triples = rank_parts(idx_, tr, 3, w);
            if (triples.empty()) continue;
            for (int po = 0; po < kNumRanks; ++po) {
                if (po == to) continue;
                Rank pr = rank_from_ordinal(po);
                auto pairs = rank_parts(idx_, pr, 2, w);
                for (const RankPart& t : triples) {
                    for (const RankPart& p : pairs) {
                        if (t.wilds_used + p.wilds_used > w) continue;
                        std::vector<Card> cards = t.cards;
                        cards.insert(cards.end(), p.cards.begin(), p.cards.end());
                        WildAssignment wild;
                        assign_wilds(wild, 0, t.wilds_used, {tr, Suit::Hearts});
                        assign_wilds(wild, t.wilds_used, p.wilds_used, {pr, Suit::Hearts});
                        push(ComboKind::TripleWithPair, tr, std::move(cards), std::move(wild));
                    }
                }
            }
        }
    }

    /// Runs where each rank appears `mult` times (wood/steel boards).
    void run_multi(ComboKind kind, int len, int mult, int min_key) {
        const int w = idx_.wild_count();
        for (const RunSpec& run : run_specs(len)) {
            if (ordinal(run.key) <= min_key) continue;
            std::vector<const std::vector<RankPart>*> options;
            std::vector<std::vector<RankPart>> storage;
            storage.reserve(run.ranks.size());
            bool feasible = true;
            for (Rank r : run.ranks) {
                storage.push_back(rank_parts(idx_, r, mult, w));
                if (storage.back().empty()) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
            std::vector<Card> cards;
            WildAssignment wild;
            auto dfs = [&](auto&& self, std::size_t pos, int wilds_used) -> void {
                if (pos == run.ranks.size()) {
                    push(kind, run.key, cards, wild);
                    return;
                }
                for (const RankPart& part : storage[pos]) {
                    if (wilds_used + part.wilds_used > w) continue;
                    const std::size_t nc = cards.size(), nw = wild.size();
                    cards.insert(cards.end(), part.cards.begin(), part.cards.end());
                    assign_wilds(wild, wilds_used, part.wilds_used,
                                 {run.ranks[pos], Suit::Hearts});
                    self(self, pos + 1, wilds_used + part.wilds_used);
                    cards.resize(nc);
                    wild.resize(nw);
                }
            };
            dfs(dfs, 0, 0);
        }
    }

    void straights(int min_key) { straight_like(ComboKind::Straight, min_key, std::nullopt); }

    void straight_flushes(int min_key) {
        for (int s = 0; s < kNumSuits; ++s) {
            straight_like(ComboKind::StraightFlush, min_key, static_cast<Suit>(s));
        }
    }

    const Card* natural_for(Rank r, std::optional<Suit> flush_suit) const {
        const auto& groups = idx_.by_rank[ordinal(r)];
        if (!flush_suit) return groups.empty() ? nullptr : &groups[0].cards[0];
        for (const FaceGroup& g : groups) {
            if (g.suit == *flush_suit) return &g.cards[0];
        }
        return nullptr;
    }

    void straight_like(ComboKind kind, int min_key, std::optional<Suit> flush_suit) {
        const int w = idx_.wild_count();
        for (const RunSpec& run : run_specs(5)) {
            if (ordinal(run.key) <= min_key) continue;
            std::vector<Card> cards;
            WildAssignment wild;
            auto dfs = [&](auto&& self, std::size_t pos, int wilds_used) -> void {
                if (pos == run.ranks.size()) {
                    push(kind, run.key, cards, wild);
                    return;
                }
                Rank r = run.ranks[pos];
                if (const Card* natural = natural_for(r, flush_suit)) {
                    cards.push_back(*natural);
                    self(self, pos + 1, wilds_used);
                    cards.pop_back();
                }
                if (wilds_used < w) {
                    Suit rep = flush_suit.value_or(Suit::Hearts);
                    wild.emplace_back(idx_.wilds[wilds_used], CardFace{r, rep});
                    self(self, pos + 1, wilds_used + 1);
                    wild.pop_back();
                }
            };
            dfs(dfs, 0, 0);
        }
    }

    void joker_bomb() {
        const auto& bj = idx_.by_rank[ordinal(Rank::BlackJoker)];
        const auto& rj = idx_.by_rank[ordinal(Rank::RedJoker)];
        if (!bj.empty() && bj[0].count == 2 && !rj.empty() && rj[0].count == 2) {
            push(ComboKind::JokerBomb, Rank::RedJoker,
                 {bj[0].cards[0], bj[0].cards[1], rj[0].cards[0], rj[0].cards[1]}, {});
        }
    }

    void assign_wilds(WildAssignment& wild, int offset, int count, CardFace face) {
        for (int i = 0; i < count; ++i) {
            wild.emplace_back(idx_.wilds[offset + i], face);
        }
    }

    /// Emit a combo built from `cards` plus `wilds_used` wildcards all
    /// representing rank `rep_rank` (Hearts).
    void emit(ComboKind kind, Rank key, std::vector<Card> cards, int wilds_used,
              Rank rep_rank) {
        WildAssignment wild;
        assign_wilds(wild, 0, wilds_used, {rep_rank, Suit::Hearts});
        push(kind, key, std::move(cards), std::move(wild));
    }

    void push(ComboKind kind, Rank key, std::vector<Card> cards, WildAssignment wild) {
        // A wildcard representing its own face is just the natural card.
        const CardFace natural{level_.rank(), Suit::Hearts};
        for (auto it = wild.begin(); it != wild.end();) {
            if (it->second == natural) {
                cards.push_back(it->first);
                it = wild.erase(it);
            } else {
                cards.push_back(it->first);
                ++it;
            }
        }
        std::sort(cards.begin(), cards.end());
        std::sort(wild.begin(), wild.end());
        Combo c{kind, std::move(cards), std::move(wild), key};
        if (seen_.insert(combo_identity(c)).second) out_.push_back(std::move(c));
    }

    Level level_;
    HandIndex idx_;
    std::vector<Combo> out_;
    std::unordered_set<ComboIdentity, ComboIdentityHash> seen_;
};

}  // namespace detail

/// Every distinct legal action for `hand`. Leading (no incumbent): all
/// formable combos, no Pass. Following: every combo beating the incumbent,
/// with Pass appended last. Deterministic order: kind, then key rank, then
/// card multiset text.
inline std::vector<Action> enumerate_legal_actions(const Hand& hand,
                                                   const std::optional<Combo>& incumbent,
                                                   const Level& level) {
    if (hand.empty()) throw InvalidStateError("cannot enumerate actions for an empty hand");
    detail::Enumerator en(hand, level);
    std::vector<Combo> combos = en.enumerate(incumbent);
    if (incumbent) {
        std::erase_if(combos, [&](const Combo& c) { return !beats(c, *incumbent); });
    }
    std::vector<std::pair<std::string, std::size_t>> order;
    order.reserve(combos.size());
    for (std::size_t i = 0; i < combos.size(); ++i) {
        order.emplace_back(combo_text(combos[i]), i);
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        const Combo& ca = combos[a.second];
        const Combo& cb = combos[b.second];
        if (ca.kind != cb.kind) return ca.kind < cb.kind;
        if (ca.key_rank != cb.key_rank) return ca.key_rank < cb.key_rank;
        return a.first < b.first;
    });
    std::vector<Action> actions;
    actions.reserve(combos.size() + 1);
    for (const auto& [text, i] : order) actions.push_back(Action::play(std::move(combos[i])));
    if (incumbent) actions.push_back(Action::pass());
    return actions;
}

}  // namespace guandan
