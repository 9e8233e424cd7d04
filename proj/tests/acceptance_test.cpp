// Acceptance suite: one test per criterion, each printing its own pass/fail
// line through the test runner.

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "guandan/fixtures.hpp"
#include "guandan/guandan.hpp"
#include "guandan/http_backend.hpp"
#include "golden_util.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace guandan;
using namespace guandan::testutil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

MatchConfig one_deal(std::uint64_t seed) {
    MatchConfig cfg;
    cfg.num_deals = 1;
    cfg.base_seed = seed;
    return cfg;
}

DealResult play_random_deal(std::uint64_t seed, DealState* final_state = nullptr,
                            std::string* log_text = nullptr) {
    DealState st = new_deal(one_deal(seed), 0);
    auto a0 = random_agent(agent_seed(seed, 0));
    auto a1 = random_agent(agent_seed(seed, 1));
    auto a2 = random_agent(agent_seed(seed, 2));
    auto a3 = random_agent(agent_seed(seed, 3));
    DealHooks hooks;
    std::ostringstream log;
    GameLogWriter writer(log);
    if (log_text) {
        hooks.on_event = [&](const DealState& after, int step, int seat, const Action& action) {
            writer.event(0, step, seat, action, after);
        };
    }
    DealResult result = run_deal(st, {a0.get(), a1.get(), a2.get(), a3.get()}, hooks);
    if (final_state) *final_state = st;
    if (log_text) *log_text = log.str();
    return result;
}

}  // namespace

TEST(Acceptance, C01_combo_validity_and_rankings) {
    const auto start = Clock::now();
    const Level lvl{Rank::Two};

    struct ShapeCase {
        ComboKind kind;
        std::vector<Card> cards;
        Rank key;
    };
    const std::vector<ShapeCase> shapes = {
        {ComboKind::Single, cards({{R7, S}}), Rank::Seven},
        {ComboKind::Pair, cards({{R9, D}, {R9, H}}), Rank::Nine},
        {ComboKind::Pair, {black_joker(0), black_joker(1)}, Rank::BlackJoker},
        {ComboKind::Triple, cards({{R8, S}, {R8, H}, {R8, C}}), Rank::Eight},
        // 223344
        {ComboKind::ThreeConsecutivePairs,
         cards({{R2, S}, {R2, H}, {R3, C}, {R3, D}, {R4, S}, {R4, H}}), Rank::Four},
        // 333444
        {ComboKind::TwoConsecutiveTriples,
         cards({{R3, S}, {R3, H}, {R3, C}, {R4, S}, {R4, H}, {R4, C}}), Rank::Four},
        // 55522
        {ComboKind::TripleWithPair, cards({{R5, S}, {R5, H}, {R5, C}, {R2, S}, {R2, H}}),
         Rank::Five},
        // 23456
        {ComboKind::Straight, cards({{R2, S}, {R3, H}, {R4, C}, {R5, D}, {R6, S}}), Rank::Six},
        {ComboKind::Bomb, cards({{R5, S}, {R5, H}, {R5, C}, {R5, D}}), Rank::Five},
        {ComboKind::StraightFlush, cards({{R5, H}, {R6, H}, {R7, H}, {R8, H}, {R9, H}}),
         Rank::Nine},
        {ComboKind::JokerBomb, {black_joker(0), black_joker(1), red_joker(0), red_joker(1)},
         Rank::RedJoker},
    };
    for (const auto& c : shapes) {
        Combo combo = validate_combo(c.cards, c.kind, {}, lvl);
        EXPECT_EQ(combo.key_rank, c.key) << kind_name(c.kind);
    }

    auto bomb = [&](Rank r, int size) {
        std::vector<Card> cs;
        for (int i = 0; i < size; ++i)
            cs.push_back(Card{r, static_cast<Suit>(i % 4), static_cast<std::uint8_t>(i / 4)});
        return validate_combo(cs, ComboKind::Bomb, {}, lvl);
    };
    Combo joker_bomb = validate_combo(
        {black_joker(0), black_joker(1), red_joker(0), red_joker(1)}, ComboKind::JokerBomb, {},
        lvl);
    Combo flush = validate_combo(cards({{R5, H}, {R6, H}, {R7, H}, {R8, H}, {R9, H}}),
                                 ComboKind::StraightFlush, {}, lvl);

    EXPECT_TRUE(beats(joker_bomb, bomb(Rank::Ace, 8)));
    EXPECT_FALSE(beats(bomb(Rank::Ace, 8), joker_bomb));
    EXPECT_TRUE(beats(flush, bomb(Rank::Ace, 4)));
    EXPECT_TRUE(beats(flush, bomb(Rank::Ace, 5)));
    EXPECT_FALSE(beats(flush, bomb(Rank::Two, 6)));
    EXPECT_TRUE(beats(bomb(Rank::Two, 6), flush));

    Combo low_triple_high_pair = validate_combo(
        cards({{R5, S}, {R5, H}, {R5, C}, {RA, S}, {RA, H}}), ComboKind::TripleWithPair, {}, lvl);
    Combo high_triple_low_pair = validate_combo(
        cards({{R6, S}, {R6, H}, {R6, C}, {R2, S}, {R2, H}}), ComboKind::TripleWithPair, {}, lvl);
    EXPECT_TRUE(beats(high_triple_low_pair, low_triple_high_pair));
    EXPECT_FALSE(beats(low_triple_high_pair, high_triple_low_pair));

    // Category boundaries.
    Combo straight = validate_combo(cards({{R2, S}, {R3, H}, {R4, C}, {R5, D}, {R6, S}}),
                                    ComboKind::Straight, {}, lvl);
    EXPECT_TRUE(beats(bomb(Rank::Five, 4), straight));
    EXPECT_FALSE(beats(straight, bomb(Rank::Five, 4)));

    EXPECT_LT(seconds_since(start), 1.0);
}

TEST(Acceptance, C02_move_generation_oracle_equivalence) {
    const auto start = Clock::now();
    const std::array<Level, 3> levels = {Level{Rank::Two}, Level{Rank::Five},
                                         Level{Rank::Jack}};
    const Combo pair7 =
        validate_combo(cards({{R7, S}, {R7, H}}), ComboKind::Pair, {}, Level{Rank::Two});

    std::atomic<int> mismatches{0};
    auto worker = [&](int begin, int end) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(begin) * 7919 + 1);
        for (int trial = begin; trial < end; ++trial) {
            const Level& level = levels[static_cast<std::size_t>(trial) % levels.size()];
            auto deck = shuffled_deck(build_deck(), rng());
            Hand hand(deck.begin(), deck.begin() + 1 + trial % 8);
            sort_hand(hand);
            for (const std::optional<Combo>& inc :
                 {std::optional<Combo>{}, std::optional<Combo>{pair7}}) {
                auto actions = enumerate_legal_actions(hand, inc, level);
                oracle::IdentitySet got;
                for (const Action& a : actions) {
                    if (!a.is_pass()) got.insert(detail::combo_identity(a.combo()));
                }
                auto want = oracle::legal_combo_identities(hand, inc, level);
                if (got != want) mismatches++;
            }
        }
    };
    const int n = 1000;
    std::vector<std::future<void>> futures;
    const int workers = 8;
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, worker, n * w / workers,
                                     n * (w + 1) / workers));
    }
    for (auto& f : futures) f.get();
    EXPECT_EQ(mismatches.load(), 0);
    EXPECT_LT(seconds_since(start), 60.0);
}

TEST(Acceptance, C03_reference_fixture_exact_action_list) {
    DealState st = fixtures::reference_deal();
    auto actions = legal_actions(st);
    ASSERT_EQ(actions.size(), 2u);
    EXPECT_EQ(actions[0].combo().kind, ComboKind::Pair);
    EXPECT_EQ(actions[0].combo().cards, cards({{RA, C}, {RA, C}}));
    EXPECT_TRUE(actions[0].combo().wild.empty());
    EXPECT_TRUE(actions[1].is_pass());
}

TEST(Acceptance, C04_scoring_zero_sum_over_ten_thousand_deals) {
    const auto start = Clock::now();
    // All six partner-position patterns.
    EXPECT_EQ(deal_outcome({0, 2, 1, 3}).team_points, (std::array<int, 2>{4, -4}));
    EXPECT_EQ(deal_outcome({0, 2, 3, 1}).team_points, (std::array<int, 2>{4, -4}));
    EXPECT_EQ(deal_outcome({0, 1, 2, 3}).team_points, (std::array<int, 2>{2, -2}));
    EXPECT_EQ(deal_outcome({0, 3, 2, 1}).team_points, (std::array<int, 2>{2, -2}));
    EXPECT_EQ(deal_outcome({0, 1, 3, 2}).team_points, (std::array<int, 2>{1, -1}));
    EXPECT_EQ(deal_outcome({0, 3, 1, 2}).team_points, (std::array<int, 2>{1, -1}));

    const int deals = 10000;
    std::atomic<int> failures{0};
    std::atomic<int> completed{0};
    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            DealState st;
            DealResult r = play_random_deal(static_cast<std::uint64_t>(i), &st);
            bool ok = st.over() && r.team_points[0] + r.team_points[1] == 0;
            const int winner_team = team_of(r.finish_order[0]);
            const int pts = r.team_points[winner_team];
            ok = ok && (pts == 4 || pts == 2 || pts == 1);
            // Teammate equality is structural: one score per team.
            if (!ok) failures++;
            completed++;
        }
    };
    std::vector<std::future<void>> futures;
    const int workers = 8;
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, worker, deals * w / workers,
                                     deals * (w + 1) / workers));
    }
    for (auto& f : futures) f.get();
    EXPECT_EQ(completed.load(), deals);
    EXPECT_EQ(failures.load(), 0);
    EXPECT_LT(seconds_since(start), 120.0);
}

TEST(Acceptance, C05_replay_one_thousand_deals_bit_identical) {
    const auto start = Clock::now();
    std::atomic<int> failures{0};
    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const auto seed = static_cast<std::uint64_t>(100000 + i);
            DealState final_state;
            std::string log_text;
            play_random_deal(seed, &final_state, &log_text);
            std::istringstream in(log_text);
            auto logged = parse_game_log(in);
            if (logged.size() != 1) {
                failures++;
                continue;
            }
            DealState replayed = replay_deal(one_deal(seed), 0, logged[0].events);
            if (!(replayed == final_state)) failures++;
        }
    };
    std::vector<std::future<void>> futures;
    const int workers = 8;
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, worker, 1000 * w / workers,
                                     1000 * (w + 1) / workers));
    }
    for (auto& f : futures) f.get();
    EXPECT_EQ(failures.load(), 0);
    EXPECT_LT(seconds_since(start), 60.0);
}

TEST(Acceptance, C06_action_lists_sometimes_exceed_eighty) {
    const auto start = Clock::now();
    auto run_batch = [&](std::uint64_t base_seed) {
        SeriesOptions opts;
        std::ostringstream decisions;
        opts.decision_log = &decisions;
        opts.parallel = 8;
        run_seeded_series(AgentKind::Random, AgentKind::Random, 100, base_seed, RunContext{},
                          opts);
        std::istringstream in(decisions.str());
        return collect_action_stats(in);
    };
    ActionStats stats = run_batch(2024);
    int max_len = stats.length_hist.empty() ? 0 : stats.length_hist.rbegin()->first;
    if (max_len < 80) {
        // Statistical criterion: one rerun with the next seed is allowed.
        stats = run_batch(2025);
        max_len = stats.length_hist.empty() ? 0 : stats.length_hist.rbegin()->first;
    }
    EXPECT_GE(max_len, 80);

    std::filesystem::create_directories("acceptance_out");
    std::ofstream("acceptance_out/action_lengths.csv") << histogram_csv(stats.length_hist);
    std::ofstream("acceptance_out/selected_index.csv") << histogram_csv(stats.index_hist);
    EXPECT_TRUE(std::filesystem::exists("acceptance_out/action_lengths.csv"));
    EXPECT_LT(seconds_since(start), 120.0);
}

TEST(Acceptance, C07_rule_baseline_dominates_random) {
    const auto start = Clock::now();
    SeriesOptions opts;
    opts.parallel = 8;
    auto report =
        run_seeded_series(AgentKind::Rule, AgentKind::Random, 200, 7, RunContext{}, opts);
    EXPECT_GT(report.average_a, 1.0);
    EXPECT_LT(seconds_since(start), 300.0);
}

TEST(Acceptance, C08_position_swap_symmetry_exact) {
    auto report =
        run_position_swap(AgentKind::Random, AgentKind::Random, 40, 17, RunContext{});
    EXPECT_DOUBLE_EQ(report.average_a, 0.0);
    ASSERT_EQ(report.games.size(), 40u);
    for (int i = 0; i < 20; ++i) {
        EXPECT_EQ(report.games[static_cast<std::size_t>(i)].points_a,
                  -report.games[static_cast<std::size_t>(i + 20)].points_a);
    }
}

TEST(Acceptance, C09_prompt_golden_files) {
    DealState st = fixtures::reference_deal();
    Observation obs = observe(st);
    for (Locale loc : {Locale::En, Locale::Zh}) {
        PromptContext ctx;
        ctx.rules = render_rules(st.level, loc, shared_templates()).text;
        ctx.observation = render_observation(obs, loc, shared_templates()).text;
        auto window = others_window(obs.history, obs.seat, 8);
        ctx.history = render_history(window, obs.seat, loc, shared_templates()).text;
        auto topk = top_k(score_actions(obs), 5);

        EXPECT_EQ(ctx.rules, golden(loc, "rules.txt"));
        EXPECT_EQ(ctx.observation, golden(loc, "observation.txt"));
        EXPECT_EQ(ctx.history, golden(loc, "history.txt"));
        EXPECT_EQ(serialize_bundle(build_belief_prompt(ctx, loc, shared_templates())),
                  golden(loc, "belief_prompt.txt"));
        auto plan = build_plan_eval_prompt(ctx, std::nullopt, topk, loc, shared_templates());
        EXPECT_EQ(serialize_bundle(plan), golden(loc, "plan_prompt.txt"));
        EXPECT_EQ(serialize_bundle(build_second_order_prompt(ctx, loc, shared_templates())),
                  golden(loc, "second_order_prompt.txt"));

        const std::string& user = plan.messages[1].content;
        if (loc == Locale::En) {
            EXPECT_NE(user.find("Legal action index 0: The card combination type is a pair, "
                                "and the hand cards forming the combination are Club A, Club A."),
                      std::string::npos);
            EXPECT_NE(user.find("Legal action index 1: The card combination type is pass"),
                      std::string::npos);
        } else {
            EXPECT_NE(user.find("合法动作索引0：牌型为对牌，组成牌型的手牌为梅花 A, 梅花 A。"),
                      std::string::npos);
            EXPECT_NE(user.find("合法动作索引1：牌型为过牌，组成牌型的手牌为无。"),
                      std::string::npos);
        }
    }
}

TEST(Acceptance, C10_tom_pipeline_on_mock_backend) {
    const auto start = Clock::now();
    DealState st = fixtures::reference_deal();
    Observation obs = observe(st);

    // Call counts: 1 (vanilla), 2 (first), 3 (second).
    const std::array<std::pair<TomMode, int>, 3> cases = {
        std::pair{TomMode::Vanilla, 1}, {TomMode::First, 2}, {TomMode::Second, 3}};
    for (auto [mode, expected] : cases) {
        auto backend = std::make_shared<MockBackend>();
        TomAgentConfig cfg;
        cfg.mode = mode;
        TomAgent agent(cfg, backend, &shared_templates());
        agent.act(obs);
        EXPECT_EQ(backend->call_count(), expected);
    }

    // Scripted "plan 1" answer makes the agent pass on the fixture.
    {
        auto backend = std::make_shared<MockBackend>("因此选择方案1。");
        TomAgentConfig cfg;
        cfg.mode = TomMode::Vanilla;
        TomAgent agent(cfg, backend, &shared_templates());
        EXPECT_TRUE(agent.act(obs).is_pass());
    }

    // Malformed responses fall back to the recommender's top action.
    {
        auto backend = std::make_shared<MockBackend>("嗯……不好说。");
        TomAgentConfig cfg;
        cfg.mode = TomMode::Second;
        TomAgent agent(cfg, backend, &shared_templates());
        Action a = agent.act(obs);
        ASSERT_FALSE(a.is_pass());
        EXPECT_EQ(a.combo().kind, ComboKind::Pair);
        EXPECT_EQ(a.combo().key_rank, Rank::Ace);
        EXPECT_TRUE(agent.last_choice()->fallback);
    }

    // A 10-deal match of mock ToM agents is bit-reproducible, logs included.
    auto run_match_once = [&]() {
        RunContext ctx;
        ctx.templates = &shared_templates();
        ctx.backend = std::make_shared<MockBackend>();
        std::array<std::unique_ptr<Agent>, 4> owned;
        std::array<Agent*, 4> agents{};
        const std::array<AgentKind, 4> kinds = {AgentKind::TomVanilla, AgentKind::TomFirst,
                                                AgentKind::TomSecond, AgentKind::TomVanilla};
        for (int seat = 0; seat < kNumSeats; ++seat) {
            owned[seat] = make_agent(kinds[seat], agent_seed(99, seat), ctx);
            agents[seat] = owned[seat].get();
        }
        MatchConfig mc;
        mc.num_deals = 10;
        mc.base_seed = 99;
        std::ostringstream log;
        GameLogWriter writer(log);
        auto hooks_for = [&](int deal) {
            DealHooks hooks;
            hooks.on_event = [&writer, deal](const DealState& after, int step, int seat,
                                             const Action& action) {
                writer.event(deal, step, seat, action, after);
            };
            return hooks;
        };
        MatchResult r = run_match(mc, agents, hooks_for);
        std::ostringstream out;
        out << r.totals[0] << '/' << r.totals[1] << '\n' << log.str();
        return out.str();
    };
    EXPECT_EQ(run_match_once(), run_match_once());
    EXPECT_LT(seconds_since(start), 60.0);
}

namespace {

class CannedChatServer {
public:
    explicit CannedChatServer(std::string reply) : reply_(std::move(reply)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request&,
                                                    httplib::Response& res) {
            requests_++;
            nlohmann::json j;
            j["choices"] = {{{"message", {{"content", reply_}}}}};
            res.set_content(j.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~CannedChatServer() {
        server_.stop();
        thread_.join();
    }
    int port() const { return port_; }
    int requests() const { return requests_; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::string reply_;
    std::atomic<int> requests_{0};
};

}  // namespace

TEST(Acceptance, C11_http_backend_live_mode_smoke) {
    // Score levels against real LLM backends are not asserted anywhere in
    // this suite; they depend on paid model quality. This smoke test drives
    // one full deal through the HTTP chat-completion path against a local
    // server; `--live` on the CLI points the same client at a real endpoint.
    CannedChatServer server("Plan 0 is selected.");
    HttpBackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(server.port());
    cfg.api_key_env = "GUANDAN_TEST_KEY";

    RunContext ctx;
    ctx.templates = &shared_templates();
    ctx.backend = std::make_shared<HttpBackend>(cfg);

    auto tom = make_agent(AgentKind::TomVanilla, 1, ctx);
    auto r1 = random_agent(2), r2 = random_agent(3), r3 = random_agent(4);
    DealState st = new_deal(one_deal(31), 0);
    DealResult result = run_deal(st, {tom.get(), r1.get(), r2.get(), r3.get()});
    EXPECT_EQ(result.finish_order.size(), 4u);
    EXPECT_GT(server.requests(), 0);
    EXPECT_EQ(result.team_points[0] + result.team_points[1], 0);
}
