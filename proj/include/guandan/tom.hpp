#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "guandan/interpreter.hpp"
#include "guandan/recommender.hpp"
#include "json.hpp"

namespace guandan {

enum class Role { System, User };

struct Message {
    Role role;
    std::string content;
    friend bool operator==(const Message&, const Message&) = default;
};

/// Ordered chat messages: the rule text as the system message, the
/// assembled task as the user message.
struct PromptBundle {
    std::vector<Message> messages;
    friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

/// FNV-1a digest of the whole bundle; keys the mock backend's canned
/// responses.
inline std::uint64_t bundle_digest(const PromptBundle& bundle) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0x1f;
        h *= 0x100000001b3ULL;
    };
    for (const Message& m : bundle.messages) {
        mix(m.role == Role::System ? "system" : "user");
        mix(m.content);
    }
    return h;
}

struct LlmParams {
    std::string model = "mock";
    double temperature = 0.0;
    int max_output = 1024;  // completion budget; responses are truncated to match
    int timeout_ms = 30000;
    int retries = 3;
};

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    /// Returns the completion text or throws BackendError after exhausting
    /// the backend's own retries.
    virtual std::string complete(const PromptBundle& bundle, const LlmParams& params) = 0;
};

/// Deterministic backend replaying canned responses keyed by the prompt
/// digest. Unknown prompts get the fixed default response, so a whole match
/// is bit-reproducible.
class MockBackend : public LlmBackend {
public:
    explicit MockBackend(std::string default_response = "Plan 0 is selected.")
        : default_response_(std::move(default_response)) {}

    void add_response(std::uint64_t digest, std::string response) {
        std::lock_guard lock(mu_);
        canned_[digest] = std::move(response);
    }

    void fail_always(bool fail) {
        std::lock_guard lock(mu_);
        fail_ = fail;
    }

    int call_count() const {
        std::lock_guard lock(mu_);
        return calls_;
    }

    std::string complete(const PromptBundle& bundle, const LlmParams&) override {
        std::lock_guard lock(mu_);
        ++calls_;
        if (fail_) throw BackendError("mock backend configured to fail");
        auto it = canned_.find(bundle_digest(bundle));
        return it == canned_.end() ? default_response_ : it->second;
    }

private:
    mutable std::mutex mu_;
    std::map<std::uint64_t, std::string> canned_;
    std::string default_response_;
    bool fail_ = false;
    int calls_ = 0;
};

/// Model-produced belief text from the behavior-pattern prompts.
struct BeliefReport {
    enum class Order { First, Second };
    std::string text;
    Order order = Order::First;
};

/// The planner's raw reply: per-action plans with gain estimates, ending in
/// a plan selection that parse_action_choice extracts.
struct PlanSet {
    std::string text;
};

/// Inputs shared by every prompt of one decision.
struct PromptContext {
    std::string rules;        // system message
    std::string observation;  // rendered state text
    std::string history;      // rendered history window
};

/// The behavior-pattern analysis prompt (first-order beliefs).
inline PromptBundle build_belief_prompt(const PromptContext& ctx, Locale locale,
                                        const TemplateStore& store) {
    TokenMap tokens;
    tokens["observation"] = ctx.observation;
    tokens["history"] = ctx.history;
    PromptBundle bundle;
    bundle.messages.push_back({Role::System, ctx.rules});
    bundle.messages.push_back(
        {Role::User, render_template(store.get(locale, "belief", "body"), tokens)});
    return bundle;
}

/// The opponents'-viewpoint prompt (second-order beliefs).
inline PromptBundle build_second_order_prompt(const PromptContext& ctx, Locale locale,
                                              const TemplateStore& store) {
    TokenMap tokens;
    tokens["observation"] = ctx.observation;
    tokens["history"] = ctx.history;
    PromptBundle bundle;
    bundle.messages.push_back({Role::System, ctx.rules});
    bundle.messages.push_back(
        {Role::User, render_template(store.get(locale, "second_order", "body"), tokens)});
    return bundle;
}

/// The merged planning + evaluation prompt over the top-k actions. Without
/// a belief this is the vanilla (zero-order) form; with one it is the ToM
/// form, differing only by the belief block.
inline PromptBundle build_plan_eval_prompt(const PromptContext& ctx,
                                           const std::optional<std::string>& belief,
                                           const std::vector<ScoredAction>& topk, Locale locale,
                                           const TemplateStore& store) {
    if (topk.empty()) throw InvalidInputError("plan prompt requires a non-empty action list");
    std::string action_list;
    for (std::size_t i = 0; i < topk.size(); ++i) {
        TokenMap tokens;
        tokens["index"] = std::to_string(i);
        std::string line;
        if (topk[i].action.is_pass()) {
            line = render_template(store.get(locale, "plan", "action_line_pass"), tokens);
        } else {
            const Combo& c = topk[i].action.combo();
            tokens["kind"] = std::string(text::kind_prompt_name(c.kind, locale));
            tokens["cards"] = text::plain_list(c.cards, locale);
            line = render_template(store.get(locale, "plan", "action_line"), tokens);
        }
        if (i) action_list += '\n';
        action_list += line;
    }
    TokenMap tokens;
    tokens["observation"] = ctx.observation;
    tokens["history"] = ctx.history;
    tokens["action_list"] = action_list;
    if (belief) {
        TokenMap btok;
        btok["belief"] = *belief;
        tokens["belief_block"] =
            render_template(store.get(locale, "plan", "belief_block"), btok);
    } else {
        tokens["belief_block"] = "";
    }
    PromptBundle bundle;
    bundle.messages.push_back({Role::System, ctx.rules});
    bundle.messages.push_back(
        {Role::User, render_template(store.get(locale, "plan", "body"), tokens)});
    return bundle;
}

struct ParsedChoice {
    int index = 0;
    bool fallback = false;
};

/// Extracts the chosen plan index from free-form model text: the last
/// in-range integer after a selection marker ("Plan", "index", "方案",
/// "索引"), else the last in-range bare integer, else index 0 with the
/// fallback flag set. Never returns an out-of-range index.
inline ParsedChoice parse_action_choice(const std::string& response, int presented_count) {
    if (presented_count < 1) throw InvalidInputError("presented action list is empty");
    static const std::vector<std::string> kMarkers = {"方案", "Plan", "plan", "index", "索引"};

    auto read_int_at = [&](std::size_t pos) -> std::optional<int> {
        while (pos < response.size()) {
            if (response[pos] == ' ' || response[pos] == ':' || response[pos] == '#') {
                ++pos;
            } else if (response.compare(pos, 3, "\xEF\xBC\x9A") == 0) {
                pos += 3;  // full-width colon
            } else {
                break;
            }
        }
        if (pos >= response.size() || !std::isdigit(static_cast<unsigned char>(response[pos])))
            return std::nullopt;
        int value = 0;
        while (pos < response.size() && std::isdigit(static_cast<unsigned char>(response[pos]))) {
            value = value * 10 + (response[pos] - '0');
            if (value > 1000) return std::nullopt;
            ++pos;
        }
        return value;
    };

    std::optional<int> marked;
    for (const std::string& marker : kMarkers) {
        std::size_t pos = 0;
        while ((pos = response.find(marker, pos)) != std::string::npos) {
            if (auto v = read_int_at(pos + marker.size()); v && *v < presented_count) marked = *v;
            pos += marker.size();
        }
    }
    if (marked) return {*marked, false};

    std::optional<int> bare;
    for (std::size_t i = 0; i < response.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(response[i])) &&
            (i == 0 || !std::isdigit(static_cast<unsigned char>(response[i - 1])))) {
            if (auto v = read_int_at(i); v && *v < presented_count) bare = *v;
        }
    }
    if (bare) return {*bare, false};
    return {0, true};
}

enum class TomMode { Vanilla, First, Second };

inline std::string_view tom_mode_name(TomMode m) {
    switch (m) {
        case TomMode::Vanilla: return "vanilla";
        case TomMode::First: return "first";
        case TomMode::Second: return "second";
    }
    return "vanilla";
}

struct TomAgentConfig {
    TomMode mode = TomMode::Vanilla;
    int top_k = 5;
    Locale locale = Locale::Zh;
    int history_window = 8;
    bool llm_interpreter = false;  // convert raw state via the backend
    ScorerWeights weights{};
    LlmParams params{};
};

/// Raw state fed to the optional LLM conversion step.
inline std::string raw_observation_json(const Observation& obs) {
    nlohmann::ordered_json j;
    j["seat"] = obs.seat;
    j["hand"] = nlohmann::ordered_json::array();
    for (const Card& c : obs.hand) j["hand"].push_back(card_text(c));
    j["level"] = std::string(rank_text(obs.level.rank()));
    j["teammate_count"] = obs.teammate_count;
    j["next_opponent_count"] = obs.next_opponent_count;
    j["previous_opponent_count"] = obs.previous_opponent_count;
    j["has_lead"] = obs.has_lead;
    if (obs.last_play) {
        j["last_play"] = {{"seat", obs.last_play->seat},
                          {"kind", std::string(kind_name(obs.last_play->combo.kind))},
                          {"cards", nlohmann::ordered_json::array()},
                          {"hand_count", obs.last_play->hand_count}};
        for (const Card& c : obs.last_play->combo.cards)
            j["last_play"]["cards"].push_back(card_text(c));
    } else {
        j["last_play"] = nullptr;
    }
    return j.dump();
}

/// The conversion prompt of the LLM-interpreter mode: observation rules
/// (input explanation and conversion tips) plus the raw state.
inline PromptBundle build_state_conversion_prompt(const std::string& rules,
                                                  const Observation& obs, Locale locale,
                                                  const TemplateStore& store) {
    TokenMap tokens;
    tokens["raw_state"] = raw_observation_json(obs);
    PromptBundle bundle;
    bundle.messages.push_back({Role::System, rules});
    bundle.messages.push_back(
        {Role::User, render_template(store.get(locale, "observation", "llm_convert"), tokens)});
    return bundle;
}

/// The LLM-backed player. Per decision it scores and filters the legal
/// actions, renders the context, runs the mode's prompt chain (one call for
/// vanilla, a belief call first for first-order ToM, belief plus the
/// opponents'-view call for second-order), parses the chosen plan index and
/// plays that action. Backend failures and unparseable replies fall back to
/// the recommender's top action.
class TomAgent : public Agent {
public:
    TomAgent(TomAgentConfig cfg, std::shared_ptr<LlmBackend> backend,
             const TemplateStore* store, std::shared_ptr<const Scorer> scorer = nullptr)
        : cfg_(cfg),
          backend_(std::move(backend)),
          store_(store),
          scorer_(scorer ? std::move(scorer)
                         : std::make_shared<HeuristicScorer>(cfg.weights)) {
        if (!backend_) throw InvalidInputError("tom agent requires a backend");
        if (!store_) throw InvalidInputError("tom agent requires a template store");
    }

    Action act(const Observation& obs) override {
        if (obs.legal_actions.empty()) throw InvalidStateError("no legal actions");
        auto scored = score_actions(obs, *scorer_);
        auto topk = top_k(scored, cfg_.top_k);

        PromptContext ctx;
        ctx.rules = rules_for(obs.level);
        ctx.observation = render_observation(obs, cfg_.locale, *store_).text;
        auto window = others_window(obs.history, obs.seat, cfg_.history_window);
        ctx.history = render_history(window, obs.seat, cfg_.locale, *store_).text;

        choice_ = AgentChoice{};
        choice_.presented_count = static_cast<int>(topk.size());
        transcript_.clear();

        if (cfg_.llm_interpreter) {
            // Off by default: ask the model itself to verbalize the raw
            // state. The template rendering above stays as the fallback.
            try {
                ctx.observation = call(
                    build_state_conversion_prompt(ctx.rules, obs, cfg_.locale, *store_));
            } catch (const BackendError&) {
            }
        }

        int index = 0;
        try {
            std::optional<std::string> belief;
            if (cfg_.mode != TomMode::Vanilla) {
                BeliefReport first;
                first.text = call(build_belief_prompt(ctx, cfg_.locale, *store_));
                first.order = BeliefReport::Order::First;
                belief = first.text;
                if (cfg_.mode == TomMode::Second) {
                    BeliefReport second;
                    second.text = call(build_second_order_prompt(ctx, cfg_.locale, *store_));
                    second.order = BeliefReport::Order::Second;
                    belief = first.text + "\n" + second.text;
                }
            }
            PlanSet plans{
                call(build_plan_eval_prompt(ctx, belief, topk, cfg_.locale, *store_))};
            ParsedChoice parsed =
                parse_action_choice(plans.text, static_cast<int>(topk.size()));
            index = parsed.index;
            choice_.fallback = parsed.fallback;
        } catch (const BackendError&) {
            index = 0;
            choice_.fallback = true;
        }

        choice_.chosen_index = index;
        choice_.detail = transcript_json(index);
        return topk[static_cast<std::size_t>(index)].action;
    }

    std::string_view name() const override {
        switch (cfg_.mode) {
            case TomMode::Vanilla: return "tom-vanilla";
            case TomMode::First: return "tom-1st";
            case TomMode::Second: return "tom-2nd";
        }
        return "tom";
    }

    std::optional<AgentChoice> last_choice() const override { return choice_; }

private:
    std::string call(const PromptBundle& bundle) {
        std::string reply = backend_->complete(bundle, cfg_.params);
        const std::size_t cap = static_cast<std::size_t>(cfg_.params.max_output) * 4;
        if (reply.size() > cap) reply.resize(cap);
        transcript_.emplace_back(bundle, reply);
        return reply;
    }

    const std::string& rules_for(const Level& level) {
        const int o = ordinal(level.rank());
        auto it = rules_cache_.find(o);
        if (it == rules_cache_.end()) {
            it = rules_cache_.emplace(o, render_rules(level, cfg_.locale, *store_).text).first;
        }
        return it->second;
    }

    std::string transcript_json(int chosen) const {
        nlohmann::ordered_json j;
        j["mode"] = std::string(tom_mode_name(cfg_.mode));
        j["prompts"] = nlohmann::ordered_json::array();
        j["responses"] = nlohmann::ordered_json::array();
        for (const auto& [bundle, reply] : transcript_) {
            nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
            for (const Message& m : bundle.messages) {
                msgs.push_back({{"role", m.role == Role::System ? "system" : "user"},
                                {"content", m.content}});
            }
            j["prompts"].push_back(msgs);
            j["responses"].push_back(reply);
        }
        j["chosen_index"] = chosen;
        return j.dump();
    }

    TomAgentConfig cfg_;
    std::shared_ptr<LlmBackend> backend_;
    const TemplateStore* store_;
    std::shared_ptr<const Scorer> scorer_;
    AgentChoice choice_;
    std::vector<std::pair<PromptBundle, std::string>> transcript_;
    std::map<int, std::string> rules_cache_;
};

inline std::unique_ptr<TomAgent> tom_agent(TomAgentConfig cfg,
                                           std::shared_ptr<LlmBackend> backend,
                                           const TemplateStore* store) {
    return std::make_unique<TomAgent>(cfg, std::move(backend), store);
}

}  // namespace guandan
