#pragma once

#include <atomic>
#include <future>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "guandan/agents.hpp"
#include "guandan/engine.hpp"
#include "guandan/log.hpp"
#include "guandan/recommender.hpp"
#include "guandan/tom.hpp"

namespace guandan {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-seat agent seed: a function of the game seed and the seat only, so
/// swapping the teams across halves replays the exact same decisions.
inline std::uint64_t agent_seed(std::uint64_t game_seed, int seat) {
    return splitmix64(game_seed * 4 + static_cast<std::uint64_t>(seat));
}

enum class AgentKind { Random, Rule, Reco, TomVanilla, TomFirst, TomSecond };

inline AgentKind parse_agent_kind(std::string_view text) {
    if (text == "random") return AgentKind::Random;
    if (text == "rule") return AgentKind::Rule;
    if (text == "reco") return AgentKind::Reco;
    if (text == "tom-vanilla") return AgentKind::TomVanilla;
    if (text == "tom-1st") return AgentKind::TomFirst;
    if (text == "tom-2nd") return AgentKind::TomSecond;
    throw InvalidInputError("unknown agent kind: " + std::string(text));
}

inline std::string_view agent_kind_name(AgentKind k) {
    switch (k) {
        case AgentKind::Random: return "random";
        case AgentKind::Rule: return "rule";
        case AgentKind::Reco: return "reco";
        case AgentKind::TomVanilla: return "tom-vanilla";
        case AgentKind::TomFirst: return "tom-1st";
        case AgentKind::TomSecond: return "tom-2nd";
    }
    return "random";
}

/// Shared wiring for agent construction. ToM kinds need the template store
/// and a backend; the plain kinds ignore them.
struct RunContext {
    const TemplateStore* templates = nullptr;
    std::shared_ptr<LlmBackend> backend;
    int top_k = 5;
    Locale locale = Locale::Zh;
    int history_window = 8;
    bool llm_interpreter = false;
    ScorerWeights weights{};
    LlmParams params{};
};

inline std::unique_ptr<Agent> make_agent(AgentKind kind, std::uint64_t seed,
                                         const RunContext& ctx) {
    switch (kind) {
        case AgentKind::Random: return random_agent(seed);
        case AgentKind::Rule: return best_p_low_v_agent();
        case AgentKind::Reco: return greedy_recommender_agent(ctx.weights);
        case AgentKind::TomVanilla:
        case AgentKind::TomFirst:
        case AgentKind::TomSecond: {
            TomAgentConfig cfg;
            cfg.mode = kind == AgentKind::TomVanilla ? TomMode::Vanilla
                       : kind == AgentKind::TomFirst ? TomMode::First
                                                     : TomMode::Second;
            cfg.top_k = ctx.top_k;
            cfg.locale = ctx.locale;
            cfg.history_window = ctx.history_window;
            cfg.llm_interpreter = ctx.llm_interpreter;
            cfg.weights = ctx.weights;
            cfg.params = ctx.params;
            return tom_agent(cfg, ctx.backend, ctx.templates);
        }
    }
    throw InvalidInputError("unhandled agent kind");
}

struct GameRow {
    int game = 0;
    std::uint64_t seed = 0;
    int half = 0;  // 0: team_a at seats {0,2}; 1: swapped
    int points_a = 0;
    std::vector<int> finish_order;
};

/// Per-game team points plus the protocol metadata needed to recompute
/// every average from the rows.
struct SeriesReport {
    std::string protocol;
    std::string team_a;
    std::string team_b;
    int n_games = 0;
    std::uint64_t base_seed = 0;
    std::vector<GameRow> games;
    double average_a = 0.0;
    std::optional<double> average_pos02;
    std::optional<double> average_pos13;
};

struct SeriesOptions {
    std::vector<Level> level_schedule{Level{Rank::Two}};
    int parallel = 1;
    std::ostream* game_log = nullptr;      // JSON-lines engine events
    std::ostream* decision_log = nullptr;  // JSON-lines per-decision stats
    std::ostream* tom_log = nullptr;       // JSON-lines prompt/response transcripts
};

namespace detail {

struct GameArtifacts {
    DealResult result;
    std::string game_log;
    std::string decision_log;
    std::string tom_log;
};

/// One game = one seeded deal. `swapped` seats team_a at {1,3}.
inline GameArtifacts play_game(int game_index, std::uint64_t seed, AgentKind team_a,
                               AgentKind team_b, bool swapped, const Level& level,
                               const RunContext& ctx) {
    MatchConfig cfg;
    cfg.num_deals = 1;
    cfg.base_seed = seed;
    cfg.level_schedule = {level};
    DealState st = new_deal(cfg, 0);

    std::array<std::unique_ptr<Agent>, 4> owned;
    std::array<Agent*, 4> agents{};
    for (int seat = 0; seat < kNumSeats; ++seat) {
        const bool team_a_seat = (team_of(seat) == 0) != swapped;
        owned[seat] = make_agent(team_a_seat ? team_a : team_b, agent_seed(seed, seat), ctx);
        agents[seat] = owned[seat].get();
    }

    GameArtifacts art;
    std::ostringstream game_log, decision_log, tom_log;
    GameLogWriter writer(game_log);
    DealHooks hooks;
    int last_step = 0;
    hooks.on_event = [&](const DealState& after, int step, int seat, const Action& action) {
        writer.event(game_index, step, seat, action, after);
        last_step = step;
    };
    hooks.on_decision = [&](const DecisionRecord& rec) {
        ordered_json j;
        j["deal"] = game_index;
        j["step"] = rec.step;
        j["seat"] = rec.seat;
        j["legal_count"] = rec.legal_count;
        j["presented_count"] = rec.presented_count;
        j["chosen_index"] = rec.chosen_index;
        j["fallback"] = rec.fallback;
        j["violation"] = rec.violation;
        decision_log << j.dump() << '\n';
        if (!rec.agent_detail.empty()) {
            ordered_json t;
            t["deal"] = game_index;
            t["step"] = rec.step;
            t["seat"] = rec.seat;
            auto detail = nlohmann::json::parse(rec.agent_detail);
            t["mode"] = detail.at("mode");
            t["prompts"] = detail.at("prompts");
            t["responses"] = detail.at("responses");
            t["chosen_index"] = detail.at("chosen_index");
            t["fallback"] = rec.fallback;
            tom_log << t.dump() << '\n';
        }
    };

    art.result = run_deal(st, agents, hooks);
    writer.terminal(game_index, art.result);
    art.game_log = game_log.str();
    art.decision_log = decision_log.str();
    art.tom_log = tom_log.str();
    return art;
}

inline void flush_artifacts(const GameArtifacts& art, const SeriesOptions& opts) {
    if (opts.game_log) *opts.game_log << art.game_log;
    if (opts.decision_log) *opts.decision_log << art.decision_log;
    if (opts.tom_log) *opts.tom_log << art.tom_log;
}

/// Runs games (possibly in parallel) and reduces in game-index order.
template <typename MakeGame>
inline std::vector<GameArtifacts> run_games(int n, int parallel, MakeGame&& make) {
    std::vector<GameArtifacts> all(static_cast<std::size_t>(n));
    if (parallel <= 1) {
        for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = make(i);
        return all;
    }
    std::vector<std::future<void>> workers;
    std::atomic<int> next{0};
    for (int t = 0; t < parallel; ++t) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                all[static_cast<std::size_t>(i)] = make(i);
            }
        }));
    }
    for (auto& w : workers) w.get();
    return all;
}

}  // namespace detail

/// Protocol one: n independent games, game i seeded with base_seed+i,
/// team_a fixed at seats {0,2}.
inline SeriesReport run_seeded_series(AgentKind team_a, AgentKind team_b, int n_games,
                                      std::uint64_t base_seed, const RunContext& ctx,
                                      const SeriesOptions& opts = {}) {
    if (n_games < 1) throw InvalidInputError("n_games must be >= 1");
    SeriesReport report;
    report.protocol = "seeded";
    report.team_a = agent_kind_name(team_a);
    report.team_b = agent_kind_name(team_b);
    report.n_games = n_games;
    report.base_seed = base_seed;

    auto artifacts = detail::run_games(n_games, opts.parallel, [&](int i) {
        const Level level = opts.level_schedule[i % opts.level_schedule.size()];
        return detail::play_game(i, base_seed + static_cast<std::uint64_t>(i), team_a, team_b,
                                 false, level, ctx);
    });
    long long total = 0;
    for (int i = 0; i < n_games; ++i) {
        const auto& art = artifacts[static_cast<std::size_t>(i)];
        detail::flush_artifacts(art, opts);
        GameRow row;
        row.game = i;
        row.seed = base_seed + static_cast<std::uint64_t>(i);
        row.points_a = art.result.team_points[0];
        row.finish_order = art.result.finish_order;
        total += row.points_a;
        report.games.push_back(std::move(row));
    }
    report.average_a = static_cast<double>(total) / n_games;
    return report;
}

/// Protocol two: the first n/2 games with team_a at seats {0,2}, then the
/// same seeds replayed with the teams exchanged, isolating the position
/// effect exactly.
inline SeriesReport run_position_swap(AgentKind team_a, AgentKind team_b, int n_games,
                                      std::uint64_t base_seed, const RunContext& ctx,
                                      const SeriesOptions& opts = {}) {
    if (n_games < 2 || n_games % 2 != 0)
        throw InvalidInputError("position swap requires an even number of games");
    SeriesReport report;
    report.protocol = "swap";
    report.team_a = agent_kind_name(team_a);
    report.team_b = agent_kind_name(team_b);
    report.n_games = n_games;
    report.base_seed = base_seed;

    const int half = n_games / 2;
    auto artifacts = detail::run_games(n_games, opts.parallel, [&](int i) {
        const bool swapped = i >= half;
        const int game_in_half = swapped ? i - half : i;
        const Level level =
            opts.level_schedule[game_in_half % opts.level_schedule.size()];
        return detail::play_game(i, base_seed + static_cast<std::uint64_t>(game_in_half),
                                 team_a, team_b, swapped, level, ctx);
    });
    long long total = 0, total02 = 0, total13 = 0;
    for (int i = 0; i < n_games; ++i) {
        const auto& art = artifacts[static_cast<std::size_t>(i)];
        detail::flush_artifacts(art, opts);
        const bool swapped = i >= half;
        GameRow row;
        row.game = i;
        row.seed = base_seed + static_cast<std::uint64_t>(swapped ? i - half : i);
        row.half = swapped ? 1 : 0;
        row.points_a = art.result.team_points[swapped ? 1 : 0];
        row.finish_order = art.result.finish_order;
        total += row.points_a;
        (swapped ? total13 : total02) += row.points_a;
        report.games.push_back(std::move(row));
    }
    report.average_a = static_cast<double>(total) / n_games;
    report.average_pos02 = static_cast<double>(total02) / half;
    report.average_pos13 = static_cast<double>(total13) / half;
    return report;
}

inline ordered_json report_json(const SeriesReport& r) {
    ordered_json j;
    j["protocol"] = r.protocol;
    j["team_a"] = r.team_a;
    j["team_b"] = r.team_b;
    j["n_games"] = r.n_games;
    j["base_seed"] = r.base_seed;
    j["games"] = ordered_json::array();
    for (const GameRow& g : r.games) {
        j["games"].push_back({{"game", g.game},
                              {"seed", g.seed},
                              {"half", g.half},
                              {"points_a", g.points_a},
                              {"finish_order", g.finish_order}});
    }
    j["average_a"] = r.average_a;
    if (r.average_pos02) j["average_pos02"] = *r.average_pos02;
    if (r.average_pos13) j["average_pos13"] = *r.average_pos13;
    return j;
}

/// Human-readable table in the shape of the evaluation write-ups.
inline std::string report_table(const SeriesReport& r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "Protocol: " << r.protocol << "  (" << r.n_games << " games, seed " << r.base_seed
        << ")\n";
    out << std::left << std::setw(28) << "Team" << std::right << std::setw(10) << "Avg pts"
        << '\n';
    if (r.protocol == "swap") {
        out << std::left << std::setw(28) << (r.team_a + " (Pos 0 & 2)") << std::right
            << std::setw(10) << *r.average_pos02 << '\n';
        out << std::left << std::setw(28) << (r.team_a + " (Pos 1 & 3)") << std::right
            << std::setw(10) << *r.average_pos13 << '\n';
        out << std::left << std::setw(28) << (r.team_a + " (combined)") << std::right
            << std::setw(10) << r.average_a << '\n';
    } else {
        out << std::left << std::setw(28) << (r.team_a + " vs " + r.team_b) << std::right
            << std::setw(10) << r.average_a << '\n';
    }
    return out.str();
}

/// Histograms over the per-decision stats log.
struct ActionStats {
    std::map<int, std::uint64_t> length_hist;  // legal-action-list length
    std::map<int, std::uint64_t> index_hist;   // selected action index
    int malformed = 0;
};

inline ActionStats collect_action_stats(std::istream& in) {
    ActionStats stats;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            if (!j.contains("legal_count") || !j.contains("chosen_index")) {
                stats.malformed++;
                continue;
            }
            stats.length_hist[j.at("legal_count").get<int>()]++;
            stats.index_hist[j.at("chosen_index").get<int>()]++;
        } catch (const nlohmann::json::exception&) {
            stats.malformed++;
        }
    }
    return stats;
}

inline std::string histogram_csv(const std::map<int, std::uint64_t>& hist) {
    std::ostringstream out;
    out << "bin,count\n";
    for (const auto& [bin, count] : hist) out << bin << ',' << count << '\n';
    return out.str();
}

}  // namespace guandan
