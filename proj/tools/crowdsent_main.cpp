// crowdsent — sentiment, correlation, author-ranking and backtest pipeline
// over crowd-contributed financial text. Subcommands mirror the pipeline
// stages; every run drops a manifest.txt into its output directory with
// enough information to reproduce it byte for byte.

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowdsent/author_ranking.hpp"
#include "crowdsent/backtest.hpp"
#include "crowdsent/corpus.hpp"
#include "crowdsent/correlation.hpp"
#include "crowdsent/graph_metrics.hpp"
#include "crowdsent/lexicon_sentiment.hpp"
#include "crowdsent/market_data.hpp"
#include "crowdsent/message_classifier.hpp"
#include "crowdsent/synth.hpp"
#include "crowdsent/util.hpp"
#include "crowdsent/version.hpp"

namespace cs = crowdsent;

namespace {

std::string quote_arg(const std::string& a) {
    if (a.find_first_of(" \t\"") == std::string::npos) return a;
    std::string out = "\"";
    for (char c : a) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

struct RunContext {
    std::vector<std::string> argv;  // args after the program name
    std::string config_path;
};

void write_manifest(const RunContext& ctx, const std::string& subcommand,
                    const std::vector<std::string>& inputs, const std::string& out_dir,
                    const std::string& seed) {
    std::ofstream out = cs::open_output(std::filesystem::path(out_dir) / "manifest.txt");
    out << "crowdsent manifest v1\n";
    out << "version " << cs::kVersion << '\n';
    out << "subcommand " << subcommand << '\n';
    out << "config " << (ctx.config_path.empty() ? "-" : ctx.config_path) << '\n';
    out << "seed " << (seed.empty() ? "-" : seed) << '\n';
    for (const std::string& in : inputs) out << "input " << in << '\n';
    out << "output " << out_dir << '\n';
    out << "args";
    for (const std::string& a : ctx.argv) out << ' ' << quote_arg(a);
    out << '\n';
}

cs::DayNum parse_date_flag(const std::string& s, const char* flag) {
    auto d = cs::parse_iso_date(s);
    if (!d) throw std::runtime_error(std::string("bad date for ") + flag + ": " + s);
    return *d;
}

void report_rejects(const cs::LoadReport& report) {
    if (!report.rejects.empty())
        std::cerr << "corpus: " << report.rejects.size() << " line(s) rejected, see "
                  << report.rejects_path.string() << '\n';
}

std::set<std::string> read_symbol_file(const std::string& path) {
    std::set<std::string> out;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open symbol file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = cs::strip(line);
        if (!t.empty() && t[0] != '#') out.insert(cs::to_upper(t));
    }
    return out;
}

// ---------------------------------------------------------------- synth ---

void add_synth(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("synth", "generate a synthetic corpus, prices and ground truth");
    auto opt = std::make_shared<cs::SynthConfig>();
    auto out_dir = std::make_shared<std::string>();
    auto start = std::make_shared<std::string>("2013-01-01");
    auto end = std::make_shared<std::string>("2014-01-01");
    auto planted = std::make_shared<int>(0);
    auto kind = std::make_shared<std::string>("article");

    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->add_option("--seed", opt->seed, "generator seed");
    cmd->add_option("--authors", opt->n_authors, "number of authors");
    cmd->add_option("--stocks", opt->n_stocks, "number of stocks");
    cmd->add_option("--posts", opt->posts_per_author, "posts per author");
    cmd->add_option("--planted", *planted, "number of planted (accurate) authors");
    cmd->add_option("--p-good", opt->p_good, "planted author accuracy");
    cmd->add_option("--p-bg", opt->p_background, "background author accuracy");
    cmd->add_option("--bump", opt->price_model.signal_bump, "signal bump (fraction)");
    cmd->add_option("--bump-window", opt->price_model.signal_window_days, "bump window (days)");
    cmd->add_option("--vol", opt->price_model.daily_vol, "daily log volatility");
    cmd->add_option("--drift", opt->price_model.drift, "daily log drift");
    cmd->add_option("--comment-rate", opt->comment_model.base_rate, "mean comments per post");
    cmd->add_option("--comment-mult", opt->comment_model.planted_multiplier,
                    "planted comment multiplier");
    cmd->add_option("--start", *start, "period start (YYYY-MM-DD)");
    cmd->add_option("--end", *end, "period end, exclusive (YYYY-MM-DD)");
    cmd->add_option("--kind", *kind, "post kind: article|message")
        ->check(CLI::IsMember({"article", "message"}));

    cmd->callback([&ctx, opt, out_dir, start, end, planted, kind]() {
        opt->period_start = parse_date_flag(*start, "--start");
        opt->period_end = parse_date_flag(*end, "--end");
        opt->planted_authors = cs::first_authors(*planted);
        opt->post_kind = *kind == "article" ? cs::PostKind::Article : cs::PostKind::Message;
        cs::SynthBundle bundle = cs::generate(*opt);
        cs::write_bundle(bundle, *opt, *out_dir);
        write_manifest(ctx, "synth", {}, *out_dir, std::to_string(opt->seed));
        std::cout << "synth: " << bundle.corpus.posts.size() << " posts, "
                  << bundle.prices.series.size() << " price series -> " << *out_dir << '\n';
    });
}

// ------------------------------------------------------------ sentiment ---

void add_sentiment(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("sentiment", "extract per-stock sentiment from a corpus");
    struct Opts {
        std::string corpus, lexicon, phrases, names, model, out;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--corpus", o->corpus, "corpus JSONL file")->required();
    cmd->add_option("--lexicon", o->lexicon, "word lexicon TSV (articles)");
    cmd->add_option("--phrases", o->phrases, "phrase override TSV");
    cmd->add_option("--names", o->names, "company name TSV");
    cmd->add_option("--model", o->model, "classifier model file (messages)");
    cmd->add_option("--out", o->out, "output directory")->required();

    cmd->callback([&ctx, o]() {
        cs::LoadReport report;
        cs::Corpus corpus = cs::load_corpus(o->corpus, std::nullopt, &report);
        report_rejects(report);

        bool any_article = false, any_unlabeled_message = false, any_message = false;
        for (const cs::Post& p : corpus.posts) {
            if (p.kind == cs::PostKind::Article) any_article = true;
            else {
                any_message = true;
                if (!p.label) any_unlabeled_message = true;
            }
        }
        if (any_article && o->lexicon.empty())
            throw std::runtime_error("corpus contains articles: --lexicon is required");
        if (any_unlabeled_message && o->model.empty())
            throw std::runtime_error("corpus contains unlabeled messages: --model is required");

        std::vector<cs::StockSentiment> rows;
        if (any_article) {
            cs::Lexicon lexicon = cs::load_lexicon(o->lexicon);
            if (!o->phrases.empty()) cs::load_lexicon_file(o->phrases, lexicon);
            cs::CompanyNames names;
            if (!o->names.empty()) names = cs::load_company_names(o->names);
            for (const cs::Post& p : corpus.posts) {
                if (p.kind != cs::PostKind::Article) continue;
                for (auto& s : cs::analyze_article(p, lexicon, names)) rows.push_back(std::move(s));
            }
        }
        if (any_message) {
            cs::LinearModel model;
            cs::FeatureSpace fs;
            if (!o->model.empty()) std::tie(model, fs) = cs::load_model(o->model);
            for (auto& s : cs::label_corpus(model, fs, corpus.posts)) rows.push_back(std::move(s));
        }
        cs::save_sentiments(rows, std::filesystem::path(o->out) / "sentiments.csv");
        write_manifest(ctx, "sentiment", {o->corpus}, o->out, "");
        std::cout << "sentiment: " << rows.size() << " rows -> " << o->out << '\n';
    });
}

// ---------------------------------------------------------------- train ---

void add_train(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("train", "train the message classifier with cross-validation");
    struct Opts {
        std::string corpus, stopwords, names, out;
        std::int64_t min_count = 300;
        int folds = 10;
        cs::TrainConfig config;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--corpus", o->corpus, "corpus JSONL file (labeled messages)")->required();
    cmd->add_option("--stopwords", o->stopwords, "stopword file, one token per line")->required();
    cmd->add_option("--names", o->names, "company name TSV (excluded from features)");
    cmd->add_option("--min-count", o->min_count, "minimum unigram frequency");
    cmd->add_option("--folds", o->folds, "cross-validation folds");
    cmd->add_option("--epochs", o->config.epochs, "training epochs");
    cmd->add_option("--lr", o->config.learning_rate, "learning rate");
    cmd->add_option("--reg", o->config.regularization, "L2 regularization strength");
    cmd->add_option("--seed", o->config.seed, "shuffle seed");
    cmd->add_option("--out", o->out, "output directory")->required();

    cmd->callback([&ctx, o]() {
        cs::LoadReport report;
        cs::Corpus corpus = cs::load_corpus(o->corpus, cs::PostKind::Message, &report);
        report_rejects(report);
        std::vector<cs::Post> labeled;
        std::set<std::string> excluded;
        for (const cs::Post& p : corpus.posts) {
            if (p.label) labeled.push_back(p);
            for (const std::string& s : p.symbols) excluded.insert(s);
        }
        if (labeled.empty()) throw std::runtime_error("no labeled messages in corpus");
        if (!o->names.empty()) {
            for (const auto& [ticker, names] : cs::load_company_names(o->names)) {
                excluded.insert(ticker);
                for (const std::string& n : names) excluded.insert(n);
            }
        }
        std::set<std::string> stopwords = cs::load_token_set(o->stopwords);

        cs::CvReport cv =
            cs::cross_validate(labeled, o->folds, o->min_count, stopwords, excluded, o->config);

        cs::FeatureSpace fs = cs::build_features(labeled, o->min_count, stopwords, excluded);
        std::vector<std::vector<std::uint32_t>> xs;
        std::vector<int> ys;
        for (const cs::Post& p : labeled) {
            xs.push_back(cs::vectorize(p, fs));
            ys.push_back(*p.label == cs::Label::Bullish ? +1 : -1);
        }
        cs::LinearModel model = cs::train(xs, ys, o->config, fs.dim());
        cs::save_model(model, fs, std::filesystem::path(o->out) / "model.txt");
        {
            std::ofstream rep = cs::open_output(std::filesystem::path(o->out) / "cv_report.csv");
            rep << "fold,accuracy\n";
            for (std::size_t i = 0; i < cv.fold_accuracies.size(); ++i)
                rep << (i + 1) << ',' << cs::fmt_double(cv.fold_accuracies[i], 6) << '\n';
            rep << "mean," << cs::fmt_double(cv.mean_accuracy, 6) << '\n';
            rep << "confusion," << cv.confusion[0][0] << ',' << cv.confusion[0][1] << ','
                << cv.confusion[1][0] << ',' << cv.confusion[1][1] << '\n';
        }
        write_manifest(ctx, "train", {o->corpus}, o->out, std::to_string(o->config.seed));
        std::cout << "train: cv mean accuracy " << cs::fmt_double(cv.mean_accuracy, 4) << " over "
                  << o->folds << " folds, " << fs.dim() << " features -> " << o->out << '\n';
    });
}

// ------------------------------------------------------------ correlate ---

void add_correlate(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("correlate", "sentiment vs forward-move correlation table");
    struct Opts {
        std::string corpus, sentiments, prices, out;
        std::vector<int> horizons{1, 7, 30};
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--corpus", o->corpus, "corpus JSONL file")->required();
    cmd->add_option("--sentiments", o->sentiments, "sentiment CSV")->required();
    cmd->add_option("--prices", o->prices, "price directory")->required();
    cmd->add_option("--horizons", o->horizons, "forward horizons in days")->delimiter(',');
    cmd->add_option("--out", o->out, "output directory")->required();

    cmd->callback([&ctx, o]() {
        cs::Corpus corpus = cs::load_corpus(o->corpus);
        std::vector<cs::StockSentiment> sentiments = cs::load_sentiments(o->sentiments);
        cs::PriceStore prices = cs::load_prices(o->prices);
        auto cells = cs::correlate_by_year_horizon(sentiments, cs::post_times(corpus), prices,
                                                   o->horizons);
        cs::save_correlation_table(cells, std::filesystem::path(o->out) / "correlation.csv");
        write_manifest(ctx, "correlate", {o->corpus, o->sentiments, o->prices}, o->out, "");
        std::cout << "correlate: " << cells.size() << " cells -> " << o->out << '\n';
    });
}

// ----------------------------------------------------------------- rank ---

void add_rank(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("rank", "rank authors for a calendar year");
    struct Opts {
        std::string corpus, sentiments, prices, metric = "PerA", out;
        int year = 0;
        int horizon = 7, min_posts = 5, universe = 500;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--corpus", o->corpus, "corpus JSONL file")->required();
    cmd->add_option("--sentiments", o->sentiments, "sentiment CSV (PerA/PerS)");
    cmd->add_option("--prices", o->prices, "price directory (PerA/PerS)");
    cmd->add_option("--metric", o->metric, "PerA|PerS|AllCom|AvgCom");
    cmd->add_option("--year", o->year, "ranking year")->required();
    cmd->add_option("--horizon", o->horizon, "return horizon W in days");
    cmd->add_option("--min-posts", o->min_posts, "eligibility floor");
    cmd->add_option("--universe-size", o->universe, "portfolio universe size");
    cmd->add_option("--out", o->out, "output directory")->required();

    cmd->callback([&ctx, o]() {
        cs::Corpus corpus = cs::load_corpus(o->corpus);
        cs::RankingConfig rc;
        rc.metric = cs::parse_rank_metric(o->metric);
        rc.period_start = cs::year_start(o->year);
        rc.period_end = cs::year_start(o->year + 1);
        rc.horizon_days = o->horizon;
        rc.min_posts = o->min_posts;
        rc.universe_size = o->universe;

        std::vector<cs::StockSentiment> sentiments;
        cs::PriceStore prices;
        const bool needs_returns = rc.metric == cs::RankMetric::PerA ||
                                   rc.metric == cs::RankMetric::PerS;
        if (needs_returns) {
            if (o->sentiments.empty() || o->prices.empty())
                throw std::runtime_error("--sentiments and --prices are required for " + o->metric);
            sentiments = cs::load_sentiments(o->sentiments);
            prices = cs::load_prices(o->prices);
        }
        cs::AuthorRanking ranking = cs::rank_authors(corpus, sentiments, prices, rc);
        cs::save_ranking(ranking, std::filesystem::path(o->out) / "ranking.csv");

        cs::Universe universe =
            cs::select_universe(ranking, corpus, rc.period_start, rc.period_end);
        {
            std::ofstream uni = cs::open_output(std::filesystem::path(o->out) / "universe.csv");
            uni << "symbol,sponsors\n";
            for (const cs::UniverseEntry& e : universe.entries) {
                uni << e.symbol << ',';
                for (std::size_t i = 0; i < e.sponsors.size(); ++i)
                    uni << (i ? ";" : "") << e.sponsors[i];
                uni << '\n';
            }
        }
        std::vector<std::string> inputs{o->corpus};
        if (needs_returns) {
            inputs.push_back(o->sentiments);
            inputs.push_back(o->prices);
        }
        write_manifest(ctx, "rank", inputs, o->out, "");
        std::cout << "rank: " << ranking.entries.size() << " authors, universe "
                  << universe.entries.size() << (universe.short_universe ? " (short)" : "")
                  << " -> " << o->out << '\n';
    });
}

// ------------------------------------------------------------- backtest ---

void add_backtest(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("backtest", "run a sentiment-driven strategy");
    struct Opts {
        std::string corpus, sentiments, prices, out;
        std::string strategy = "index", scope = "all", benchmark, universe_file, metric = "AllCom";
        std::string start, end;
        int K = 7, rank_year = 0, rank_horizon = 7, min_posts = 5, universe_size = 500;
        double capital = 1.0e6;
        bool rerank = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--corpus", o->corpus, "corpus JSONL file")->required();
    cmd->add_option("--sentiments", o->sentiments, "sentiment CSV")->required();
    cmd->add_option("--prices", o->prices, "price directory")->required();
    cmd->add_option("--strategy", o->strategy, "index|long|longshort|hold")
        ->check(CLI::IsMember({"index", "long", "longshort", "hold"}));
    cmd->add_option("--K", o->K, "aggregation window / trading cadence in days");
    cmd->add_option("--scope", o->scope, "all|universe (index strategy)")
        ->check(CLI::IsMember({"all", "universe"}));
    cmd->add_option("--benchmark", o->benchmark, "benchmark symbol (index/hold)");
    cmd->add_option("--universe-file", o->universe_file, "ticker list for the universe");
    cmd->add_option("--rank-year", o->rank_year, "build the universe from this year's ranking");
    cmd->add_flag("--rerank", o->rerank, "yearly re-ranking cycle over the corpus span");
    cmd->add_option("--metric", o->metric, "ranking metric for --rerank/--rank-year");
    cmd->add_option("--rank-horizon", o->rank_horizon, "ranking return horizon W");
    cmd->add_option("--min-posts", o->min_posts, "ranking eligibility floor");
    cmd->add_option("--universe-size", o->universe_size, "universe size N");
    cmd->add_option("--capital", o->capital, "initial capital");
    cmd->add_option("--start", o->start, "run start (YYYY-MM-DD), default corpus span");
    cmd->add_option("--end", o->end, "run end (YYYY-MM-DD), default corpus span");
    cmd->add_option("--out", o->out, "output directory")->required();

    cmd->callback([&ctx, o]() {
        cs::Corpus corpus = cs::load_corpus(o->corpus);
        std::vector<cs::StockSentiment> sentiments = cs::load_sentiments(o->sentiments);
        cs::PriceStore prices = cs::load_prices(o->prices);
        if (!o->benchmark.empty()) prices.benchmark_symbol = cs::to_upper(o->benchmark);

        if (!corpus.span && (o->start.empty() || o->end.empty()))
            throw std::runtime_error("empty corpus: --start and --end are required");
        cs::DayNum start = o->start.empty() ? cs::day_of(corpus.span->first)
                                            : parse_date_flag(o->start, "--start");
        cs::DayNum end = o->end.empty() ? cs::day_of(corpus.span->second)
                                        : parse_date_flag(o->end, "--end");

        cs::BacktestResult result;
        if (o->rerank) {
            cs::RerankRunConfig rr;
            rr.metric = cs::parse_rank_metric(o->metric);
            rr.rank_horizon_days = o->rank_horizon;
            rr.min_posts = o->min_posts;
            rr.universe_size = o->universe_size;
            rr.kind = cs::parse_strategy_kind(o->strategy);
            rr.window_days = o->K;
            rr.initial_capital = o->capital;
            result = cs::run_reranked(corpus, sentiments, prices, rr);
        } else {
            cs::StrategyConfig sc;
            sc.kind = cs::parse_strategy_kind(o->strategy);
            sc.window_days = o->K;
            sc.initial_capital = o->capital;
            sc.scope = o->scope == "universe" ? cs::SentimentScope::UniverseOnly
                                              : cs::SentimentScope::AllSentiment;

            if (!o->universe_file.empty()) {
                for (const std::string& sym : read_symbol_file(o->universe_file))
                    sc.universe.entries.push_back({sym, {}});
            } else if (o->rank_year != 0) {
                cs::RankingConfig rc;
                rc.metric = cs::parse_rank_metric(o->metric);
                rc.period_start = cs::year_start(o->rank_year);
                rc.period_end = cs::year_start(o->rank_year + 1);
                rc.horizon_days = o->rank_horizon;
                rc.min_posts = o->min_posts;
                rc.universe_size = o->universe_size;
                cs::AuthorRanking ranking = cs::rank_authors(corpus, sentiments, prices, rc);
                sc.universe = cs::select_universe(ranking, corpus, rc.period_start, rc.period_end);
            }

            std::vector<cs::SentimentEvent> events = cs::make_events(corpus, sentiments);
            switch (sc.kind) {
                case cs::StrategyKind::IndexSentiment:
                    result = cs::run_index_strategy(events, prices.benchmark(), sc, start, end);
                    break;
                case cs::StrategyKind::Long:
                    result = cs::run_long_strategy(events, prices, sc, start, end);
                    break;
                case cs::StrategyKind::LongShort:
                    result = cs::run_long_short_strategy(events, prices, sc, start, end);
                    break;
                case cs::StrategyKind::BuyAndHold:
                    if (!sc.universe.entries.empty())
                        result = cs::run_buy_and_hold_universe(prices, sc, start, end);
                    else
                        result = cs::run_buy_and_hold(prices.benchmark(), sc.initial_capital,
                                                      start, end);
                    break;
            }
        }
        cs::save_backtest_result(result, o->out);
        write_manifest(ctx, "backtest", {o->corpus, o->sentiments, o->prices}, o->out, "");
        for (const std::string& n : result.notes) std::cerr << "note: " << n << '\n';
        std::cout << "backtest: total return " << cs::fmt_double(result.summary.total_return_pct, 2)
                  << "%, max drawdown " << cs::fmt_double(result.summary.max_drawdown_pct, 2)
                  << "%, " << result.summary.trade_count << " trades -> " << o->out << '\n';
    });
}

// ------------------------------------------------------------ graphstats ---

void add_graphstats(CLI::App& app, RunContext& ctx) {
    auto* cmd = app.add_subcommand("graphstats", "social-graph metrics from an edge list");
    struct Opts {
        std::string edges, out;
        bool directed = false;
        std::size_t path_samples = 1000;
        std::uint64_t seed = 1;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--edges", o->edges, "edge list TSV (src<TAB>dst)")->required();
    cmd->add_flag("--directed", o->directed, "treat edges as directed");
    cmd->add_option("--path-samples", o->path_samples, "BFS sources for average path length");
    cmd->add_option("--seed", o->seed, "sampling seed");
    cmd->add_option("--out", o->out, "output directory")->required();

    cmd->callback([&ctx, o]() {
        cs::GraphLoadReport report;
        cs::Graph g = cs::load_edges(o->edges, o->directed, &report);
        if (report.self_loops_dropped || report.duplicate_edges_dropped)
            std::cerr << "graph: dropped " << report.self_loops_dropped << " self-loop(s), "
                      << report.duplicate_edges_dropped << " duplicate edge(s)\n";
        cs::GraphStats stats = cs::compute_stats(g, o->path_samples, o->seed);
        cs::save_graph_stats(stats, std::filesystem::path(o->out) / "graphstats.csv");
        write_manifest(ctx, "graphstats", {o->edges}, o->out, std::to_string(o->seed));
        std::cout << "graphstats: " << stats.nodes << " nodes, " << stats.edges << " edges -> "
                  << o->out << '\n';
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowd-sourced financial sentiment pipeline"};
    app.set_version_flag("--version", cs::kVersion);
    app.require_subcommand(1);

    const char* env_config = std::getenv("CROWDSENT_CONFIG");
    app.set_config("--config", env_config ? env_config : "", "config file (key = value lines)");

    RunContext ctx;
    for (int i = 1; i < argc; ++i) ctx.argv.emplace_back(argv[i]);

    add_synth(app, ctx);
    add_sentiment(app, ctx);
    add_train(app, ctx);
    add_correlate(app, ctx);
    add_rank(app, ctx);
    add_backtest(app, ctx);
    add_graphstats(app, ctx);

    try {
        app.parse(argc, argv);
        ctx.config_path = app.get_config_ptr() ? app.get_config_ptr()->as<std::string>() : "";
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
