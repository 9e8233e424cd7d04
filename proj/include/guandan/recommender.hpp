#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "guandan/observation.hpp"

namespace guandan {

struct ScoredAction {
    Action action;
    double score = 0.0;
};

/// Weights of the heuristic action scorer. Named defaults, overridable in
/// config as recommender.weights.*.
struct ScorerWeights {
    double per_card = 2.0;
    double key_rank_penalty = 0.1;
    double category_two_penalty = 5.0;
    double empty_hand_bonus = 6.0;
    double opponent_incumbent_bonus = 1.5;
    double pass_score = -1.0;
};

/// Scores one legal action. Stands in for a learned scorer behind the same
/// interface: favors shedding many cards and cheap ranks, hoards bombs,
/// rewards going out and beating an opponent's play.
inline double heuristic_score(const Observation& obs, const Action& action,
                              const ScorerWeights& w = {}) {
    if (action.is_pass()) return w.pass_score;
    const Combo& c = action.combo();
    double score = w.per_card * static_cast<double>(c.cards.size());
    score -= w.key_rank_penalty * ordinal(c.key_rank);
    if (is_category_two(c.kind)) score -= w.category_two_penalty;
    if (c.cards.size() == obs.hand.size()) score += w.empty_hand_bonus;
    if (obs.last_play && team_of(obs.last_play->seat) != team_of(obs.seat))
        score += w.opponent_incumbent_bonus;
    return score;
}

/// Action-scoring interface; a trained model can stand in for the default
/// heuristic without touching any caller. Implementations must be pure.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual double score(const Observation& obs, const Action& action) const = 0;
};

class HeuristicScorer : public Scorer {
public:
    explicit HeuristicScorer(ScorerWeights weights = {}) : weights_(weights) {}
    double score(const Observation& obs, const Action& action) const override {
        return heuristic_score(obs, action, weights_);
    }

private:
    ScorerWeights weights_;
};

/// All legal actions scored, sorted by score descending; ties keep the
/// enumeration order.
inline std::vector<ScoredAction> score_actions(const Observation& obs, const Scorer& scorer) {
    std::vector<ScoredAction> scored;
    scored.reserve(obs.legal_actions.size());
    for (const Action& a : obs.legal_actions) {
        scored.push_back(ScoredAction{a, scorer.score(obs, a)});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const ScoredAction& a, const ScoredAction& b) { return a.score > b.score; });
    return scored;
}

inline std::vector<ScoredAction> score_actions(const Observation& obs,
                                               const ScorerWeights& w = {}) {
    return score_actions(obs, HeuristicScorer(w));
}

/// First min(k, n) items of the sorted list. When the input contains Pass
/// (a following decision) and the prefix dropped it, Pass is appended so a
/// planner can always decline.
inline std::vector<ScoredAction> top_k(const std::vector<ScoredAction>& scored, int k) {
    if (k < 1) throw InvalidInputError("top_k requires k >= 1");
    std::vector<ScoredAction> out(scored.begin(),
                                  scored.begin() + std::min<std::size_t>(k, scored.size()));
    auto is_pass = [](const ScoredAction& s) { return s.action.is_pass(); };
    if (std::none_of(out.begin(), out.end(), is_pass)) {
        auto it = std::find_if(scored.begin(), scored.end(), is_pass);
        if (it != scored.end()) out.push_back(*it);
    }
    return out;
}

/// Plays the top-scored action every turn.
class GreedyRecommenderAgent : public Agent {
public:
    explicit GreedyRecommenderAgent(ScorerWeights weights = {})
        : scorer_(std::make_shared<HeuristicScorer>(weights)) {}
    explicit GreedyRecommenderAgent(std::shared_ptr<const Scorer> scorer)
        : scorer_(std::move(scorer)) {}

    Action act(const Observation& obs) override {
        if (obs.legal_actions.empty()) throw InvalidStateError("no legal actions");
        return score_actions(obs, *scorer_).front().action;
    }

    std::string_view name() const override { return "reco"; }

private:
    std::shared_ptr<const Scorer> scorer_;
};

inline std::unique_ptr<Agent> greedy_recommender_agent(ScorerWeights weights = {}) {
    return std::make_unique<GreedyRecommenderAgent>(weights);
}

}  // namespace guandan
