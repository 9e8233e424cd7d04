// Command-line front end: simulate matches, run the evaluation protocols,
// build action-distribution CSVs, and dump the prompt chain for the
// built-in fixture.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "guandan/fixtures.hpp"
#include "guandan/guandan.hpp"
#include "guandan/http_backend.hpp"

namespace fs = std::filesystem;
using namespace guandan;

namespace {

struct RunConfig {
    std::vector<std::string> agents{"random", "random", "random", "random"};
    int deals = 1;
    int games = 40;
    std::uint64_t seed = 0;
    std::vector<std::string> levels{"2"};
    std::string locale = "zh";
    int top_k = 5;
    ScorerWeights weights{};
    int history_window = 8;
    std::string templates_dir;
    std::string out_dir = "out";
    int parallel = 1;
    bool live = false;
    bool llm_interpreter = false;
    HttpBackendConfig http{};
    LlmParams params{};
};

void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                         const std::string& scope) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InvalidInputError("unknown config key: " + scope + key);
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    reject_unknown_keys(j, {"agents", "deals", "games", "seed", "levels", "locale",
                            "recommender", "backend", "history_window", "llm_interpreter",
                            "templates", "out", "parallel", "live"},
                        "");
    if (j.contains("agents")) cfg.agents = j["agents"].get<std::vector<std::string>>();
    if (j.contains("deals")) cfg.deals = j["deals"].get<int>();
    if (j.contains("games")) cfg.games = j["games"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("levels")) cfg.levels = j["levels"].get<std::vector<std::string>>();
    if (j.contains("locale")) cfg.locale = j["locale"].get<std::string>();
    if (j.contains("recommender")) {
        const auto& r = j["recommender"];
        reject_unknown_keys(r, {"k", "weights"}, "recommender.");
        if (r.contains("k")) cfg.top_k = r["k"].get<int>();
        if (r.contains("weights")) {
            const auto& w = r["weights"];
            reject_unknown_keys(w,
                                {"per_card", "key_rank_penalty", "category_two_penalty",
                                 "empty_hand_bonus", "opponent_incumbent_bonus", "pass_score"},
                                "recommender.weights.");
            if (w.contains("per_card")) cfg.weights.per_card = w["per_card"].get<double>();
            if (w.contains("key_rank_penalty"))
                cfg.weights.key_rank_penalty = w["key_rank_penalty"].get<double>();
            if (w.contains("category_two_penalty"))
                cfg.weights.category_two_penalty = w["category_two_penalty"].get<double>();
            if (w.contains("empty_hand_bonus"))
                cfg.weights.empty_hand_bonus = w["empty_hand_bonus"].get<double>();
            if (w.contains("opponent_incumbent_bonus"))
                cfg.weights.opponent_incumbent_bonus =
                    w["opponent_incumbent_bonus"].get<double>();
            if (w.contains("pass_score")) cfg.weights.pass_score = w["pass_score"].get<double>();
        }
    }
    if (j.contains("backend")) {
        const auto& b = j["backend"];
        reject_unknown_keys(b,
                            {"base_url", "path", "model", "api_key_env", "temperature",
                             "max_tokens", "timeout_ms", "retries"},
                            "backend.");
        if (b.contains("base_url")) cfg.http.base_url = b["base_url"].get<std::string>();
        if (b.contains("path")) cfg.http.path = b["path"].get<std::string>();
        if (b.contains("model")) cfg.params.model = b["model"].get<std::string>();
        if (b.contains("api_key_env")) cfg.http.api_key_env = b["api_key_env"].get<std::string>();
        if (b.contains("temperature")) cfg.params.temperature = b["temperature"].get<double>();
        if (b.contains("max_tokens")) cfg.params.max_output = b["max_tokens"].get<int>();
        if (b.contains("timeout_ms")) cfg.params.timeout_ms = b["timeout_ms"].get<int>();
        if (b.contains("retries")) cfg.params.retries = b["retries"].get<int>();
    }
    if (j.contains("history_window")) cfg.history_window = j["history_window"].get<int>();
    if (j.contains("llm_interpreter")) cfg.llm_interpreter = j["llm_interpreter"].get<bool>();
    if (j.contains("templates")) cfg.templates_dir = j["templates"].get<std::string>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("parallel")) cfg.parallel = j["parallel"].get<int>();
    if (j.contains("live")) cfg.live = j["live"].get<bool>();
}

fs::path default_templates_dir() {
    if (const char* env = std::getenv("GUANDAN_TEMPLATES"); env && *env) return env;
    if (fs::exists("templates/zh/rules.txt")) return "templates";
    return fs::path(GUANDAN_SOURCE_DIR) / "templates";
}

std::vector<Level> parse_levels(const std::vector<std::string>& names) {
    std::vector<Level> levels;
    for (const auto& n : names) levels.emplace_back(parse_rank(n));
    if (levels.empty()) throw InvalidInputError("level schedule must be non-empty");
    return levels;
}

bool needs_llm(const std::vector<AgentKind>& kinds) {
    for (AgentKind k : kinds) {
        if (k == AgentKind::TomVanilla || k == AgentKind::TomFirst || k == AgentKind::TomSecond)
            return true;
    }
    return false;
}

struct Wiring {
    std::unique_ptr<TemplateStore> store;
    RunContext ctx;
};

Wiring wire_context(const RunConfig& cfg, bool llm_needed) {
    Wiring w;
    fs::path tdir =
        cfg.templates_dir.empty() ? default_templates_dir() : fs::path(cfg.templates_dir);
    w.store = std::make_unique<TemplateStore>(tdir);
    w.ctx.templates = w.store.get();
    w.ctx.top_k = cfg.top_k;
    w.ctx.locale = parse_locale(cfg.locale);
    w.ctx.history_window = cfg.history_window;
    w.ctx.llm_interpreter = cfg.llm_interpreter;
    w.ctx.weights = cfg.weights;
    w.ctx.params = cfg.params;
    if (llm_needed) {
        if (cfg.live) {
            w.ctx.backend = std::make_shared<HttpBackend>(cfg.http);
        } else {
            w.ctx.backend = std::make_shared<MockBackend>();
        }
    }
    return w;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open output file: " + (dir / name).string());
    return out;
}

int cmd_simulate(const RunConfig& cfg) {
    if (cfg.agents.size() != 4) throw InvalidInputError("simulate needs exactly 4 agents");
    std::vector<AgentKind> kinds;
    for (const auto& a : cfg.agents) kinds.push_back(parse_agent_kind(a));
    Wiring w = wire_context(cfg, needs_llm(kinds));

    MatchConfig mc;
    mc.num_deals = cfg.deals;
    mc.base_seed = cfg.seed;
    mc.level_schedule = parse_levels(cfg.levels);
    validate(mc);

    std::array<std::unique_ptr<Agent>, 4> owned;
    std::array<Agent*, 4> agents{};
    for (int seat = 0; seat < kNumSeats; ++seat) {
        owned[seat] = make_agent(kinds[seat], agent_seed(cfg.seed, seat), w.ctx);
        agents[seat] = owned[seat].get();
    }

    fs::path out_dir(cfg.out_dir);
    auto game_log = open_out(out_dir, "game_log.jsonl");
    auto decision_log = open_out(out_dir, "decisions.jsonl");
    auto tom_log = open_out(out_dir, "tom_decisions.jsonl");
    GameLogWriter writer(game_log);

    auto hooks_for = [&](int deal) {
        DealHooks hooks;
        hooks.on_event = [&writer, deal](const DealState& after, int step, int seat,
                                         const Action& action) {
            writer.event(deal, step, seat, action, after);
        };
        hooks.on_decision = [&, deal](const DecisionRecord& rec) {
            ordered_json j;
            j["deal"] = deal;
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
                t["deal"] = deal;
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
        return hooks;
    };

    MatchResult result;
    int leader = 0;
    for (int i = 0; i < mc.num_deals; ++i) {
        DealState st = new_deal(mc, i);
        st.current_seat = leader;
        st.trick_leader = leader;
        DealResult dr = run_deal(st, agents, hooks_for(i));
        writer.terminal(i, dr);
        leader = dr.finish_order[0];
        result.totals[0] += dr.team_points[0];
        result.totals[1] += dr.team_points[1];
        std::cout << "deal " << i << ": finish [";
        for (std::size_t k = 0; k < dr.finish_order.size(); ++k)
            std::cout << (k ? "," : "") << dr.finish_order[k];
        std::cout << "] points 02=" << dr.team_points[0] << " 13=" << dr.team_points[1] << '\n';
        result.deals.push_back(std::move(dr));
    }
    std::cout << "totals: 02=" << result.totals[0] << " 13=" << result.totals[1] << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& protocol, const std::string& a,
                 const std::string& b) {
    AgentKind ka = parse_agent_kind(a);
    AgentKind kb = parse_agent_kind(b);
    Wiring w = wire_context(cfg, needs_llm({ka, kb}));

    fs::path out_dir(cfg.out_dir);
    auto game_log = open_out(out_dir, "game_log.jsonl");
    auto decision_log = open_out(out_dir, "decisions.jsonl");
    auto tom_log = open_out(out_dir, "tom_decisions.jsonl");

    SeriesOptions opts;
    opts.level_schedule = parse_levels(cfg.levels);
    opts.parallel = cfg.parallel;
    opts.game_log = &game_log;
    opts.decision_log = &decision_log;
    opts.tom_log = &tom_log;

    SeriesReport report;
    if (protocol == "seeded") {
        report = run_seeded_series(ka, kb, cfg.games, cfg.seed, w.ctx, opts);
    } else if (protocol == "swap") {
        report = run_position_swap(ka, kb, cfg.games, cfg.seed, w.ctx, opts);
    } else {
        throw InvalidInputError("unknown protocol: " + protocol);
    }

    auto report_file = open_out(out_dir, "report.json");
    report_file << report_json(report).dump(2) << '\n';
    std::cout << report_table(report);
    return 0;
}

int cmd_analyze(const std::string& logs_dir, const std::string& out_dir) {
    if (!fs::is_directory(logs_dir))
        throw InvalidInputError("logs directory not found: " + logs_dir);
    ActionStats stats;
    for (const auto& entry : fs::directory_iterator(logs_dir)) {
        // Decision stats live in decisions*.jsonl; engine event logs have
        // no per-decision fields and are skipped.
        if (entry.path().extension() != ".jsonl" ||
            entry.path().filename().string().rfind("decisions", 0) != 0)
            continue;
        std::ifstream in(entry.path());
        ActionStats part = collect_action_stats(in);
        for (const auto& [bin, count] : part.length_hist) stats.length_hist[bin] += count;
        for (const auto& [bin, count] : part.index_hist) stats.index_hist[bin] += count;
        stats.malformed += part.malformed;
    }
    fs::path out(out_dir.empty() ? logs_dir : out_dir);
    open_out(out, "action_lengths.csv") << histogram_csv(stats.length_hist);
    open_out(out, "selected_index.csv") << histogram_csv(stats.index_hist);
    if (stats.malformed > 0)
        std::cerr << "warning: skipped " << stats.malformed << " malformed log lines\n";
    std::cout << "wrote " << (out / "action_lengths.csv").string() << " and "
              << (out / "selected_index.csv").string() << '\n';
    return 0;
}

int cmd_render_prompt(const RunConfig& cfg, const std::string& mode_name) {
    TomMode mode;
    if (mode_name == "vanilla") {
        mode = TomMode::Vanilla;
    } else if (mode_name == "1st") {
        mode = TomMode::First;
    } else if (mode_name == "2nd") {
        mode = TomMode::Second;
    } else {
        throw InvalidInputError("unknown mode: " + mode_name);
    }
    Wiring w = wire_context(cfg, true);
    if (cfg.live) throw InvalidInputError("render-prompt is a dry run; drop --live");

    TomAgentConfig tc;
    tc.mode = mode;
    tc.top_k = cfg.top_k;
    tc.locale = parse_locale(cfg.locale);
    tc.history_window = cfg.history_window;
    tc.llm_interpreter = cfg.llm_interpreter;
    tc.weights = cfg.weights;
    tc.params = cfg.params;
    TomAgent agent(tc, w.ctx.backend, w.ctx.templates);

    DealState st = fixtures::reference_deal();
    Observation obs = observe(st);
    Action chosen = agent.act(obs);

    auto detail = nlohmann::json::parse(agent.last_choice()->detail);
    static const std::array<std::string, 3> kStageNames = {"belief prompt",
                                                           "second-order prompt", "plan prompt"};
    const auto& prompts = detail.at("prompts");
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        std::string stage;
        if (prompts.size() == 1) {
            stage = kStageNames[2];
        } else if (prompts.size() == 2) {
            stage = i == 0 ? kStageNames[0] : kStageNames[2];
        } else {
            stage = kStageNames[i];
        }
        std::cout << "=== " << stage << " ===\n";
        for (const auto& msg : prompts[i]) {
            std::cout << "[" << msg.at("role").get<std::string>() << "]\n"
                      << msg.at("content").get<std::string>() << "\n";
        }
        std::cout << "--- mock response ---\n"
                  << detail.at("responses")[i].get<std::string>() << "\n\n";
    }
    std::cout << "chosen action: " << action_text(chosen) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Guandan engine, baselines and LLM-agent evaluation harness"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    std::string agents_csv, levels_csv;
    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its values")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seed", cfg.seed, "base random seed");
        cmd->add_option("--levels", levels_csv, "comma-separated level schedule, e.g. 2,J");
        cmd->add_option("--locale", cfg.locale, "prompt locale: zh or en");
        cmd->add_option("--k", cfg.top_k, "recommender top-k");
        cmd->add_option("--out", cfg.out_dir, "output directory");
        cmd->add_option("--parallel", cfg.parallel, "concurrent games");
        cmd->add_flag("--live", cfg.live, "call the configured HTTP backend (off: mock)");
        cmd->add_flag("--llm-interpreter", cfg.llm_interpreter,
                      "let the model verbalize the raw state instead of the fixed template");
        cmd->add_option("--templates", cfg.templates_dir, "template directory");
    };

    auto* sim = app.add_subcommand("simulate", "run one match and write logs");
    sim->add_option("--agents", agents_csv, "4 comma-separated agent kinds")->required();
    sim->add_option("--deals", cfg.deals, "number of deals");
    add_shared(sim);

    std::string protocol = "seeded", team_a, team_b;
    auto* eva = app.add_subcommand("evaluate", "run an evaluation protocol");
    eva->add_option("--protocol", protocol, "seeded or swap");
    eva->add_option("--a", team_a, "team A agent kind")->required();
    eva->add_option("--b", team_b, "team B agent kind")->required();
    eva->add_option("--games", cfg.games, "number of games");
    add_shared(eva);

    std::string logs_dir, analyze_out;
    auto* ana = app.add_subcommand("analyze", "action-distribution CSVs from logs");
    ana->add_option("--logs", logs_dir, "directory of .jsonl logs")->required();
    ana->add_option("--out", analyze_out, "output directory (default: logs dir)");

    std::string mode = "vanilla";
    auto* ren = app.add_subcommand("render-prompt", "dump the prompt chain for the fixture");
    ren->add_option("--mode", mode, "vanilla, 1st or 2nd");
    add_shared(ren);

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            RunConfig base;
            load_config_file(base, config_path);
            // Flags already parsed into cfg win over file values only where
            // set; simplest faithful rule: re-parse flags on top of the file.
            std::swap(cfg, base);
            app.clear();
            app.parse(argc, argv);
        }
        if (!agents_csv.empty()) {
            cfg.agents.clear();
            std::stringstream ss(agents_csv);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.agents.push_back(item);
        }
        if (!levels_csv.empty()) {
            cfg.levels.clear();
            std::stringstream ss(levels_csv);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.levels.push_back(item);
        }
        if (sim->parsed()) return cmd_simulate(cfg);
        if (eva->parsed()) return cmd_evaluate(cfg, protocol, team_a, team_b);
        if (ana->parsed()) return cmd_analyze(logs_dir, analyze_out);
        if (ren->parsed()) return cmd_render_prompt(cfg, mode);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
