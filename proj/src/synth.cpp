#include "crowdsent/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "crowdsent/rng.hpp"
#include "crowdsent/util.hpp"

namespace crowdsent {

std::string synth_author_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "A%04d", index);
    return buf;
}

std::string synth_stock_symbol(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%04d", index);
    return buf;
}

std::set<std::string> first_authors(int count) {
    std::set<std::string> out;
    for (int i = 0; i < count; ++i) out.insert(synth_author_id(i));
    return out;
}

namespace {

// Templates are built from the mini lexicon's vocabulary only, so the
// dictionary extractor recovers the intended polarity on every post.
const char* kPositiveArticles[] = {
    "%SYM% delivered strong results this quarter and we remain bullish. The growth outlook is "
    "positive.",
    "We see upside in %SYM% after another solid report. Momentum remains strong.",
    "%SYM% continues to beat expectations. A robust rally looks likely from here.",
};
const char* kNegativeArticles[] = {
    "%SYM% missed estimates and the outlook is bearish. We see downside ahead.",
    "Weak demand weighs on %SYM% and losses are mounting. The decline may continue.",
    "%SYM% faces declining margins and rising risk. We remain pessimistic.",
};
const char* kPositiveMessages[] = {
    "$%SYM% looking strong, bullish here.",
    "$%SYM% set to rally, upside ahead.",
    "$%SYM% solid momentum, we like the growth.",
};
const char* kNegativeMessages[] = {
    "$%SYM% weak, bearish, expecting losses.",
    "$%SYM% heading into a decline, downside risk.",
    "$%SYM% missed badly, bearish from here.",
};

std::string instantiate(const char* tpl, const std::string& symbol) {
    std::string text(tpl);
    const std::string token = "%SYM%";
    std::size_t pos;
    while ((pos = text.find(token)) != std::string::npos) text.replace(pos, token.size(), symbol);
    return text;
}

struct PlannedPost {
    int author_index = 0;
    int stock_index = 0;
    DayNum date = 0;
    int intended = 0;
    bool accurate = false;
    bool planted = false;
    std::int64_t comments = 0;
    int template_index = 0;
};

}  // namespace

SynthBundle generate(const SynthConfig& config) {
    if (config.period_start >= config.period_end)
        throw std::invalid_argument("synth: empty period");
    if (config.n_authors < 1 || config.n_stocks < 1 || config.posts_per_author < 1)
        throw std::invalid_argument("synth: counts must be positive");
    if (config.p_good < 0.5 || config.p_good > 1.0)
        throw std::invalid_argument("synth: p_good must lie in [0.5, 1]");
    if (config.price_model.signal_bump <= 0.0)
        throw std::invalid_argument("synth: signal_bump must be positive");

    Rng rng(config.seed);
    const std::int64_t span_days = config.period_end - config.period_start;

    // plan all posts first; price paths then fold in the per-post bumps
    std::vector<PlannedPost> plan;
    plan.reserve(static_cast<std::size_t>(config.n_authors) * config.posts_per_author);
    for (int a = 0; a < config.n_authors; ++a) {
        const bool planted = config.planted_authors.count(synth_author_id(a)) > 0;
        const double p = planted ? config.p_good : config.p_background;
        for (int i = 0; i < config.posts_per_author; ++i) {
            PlannedPost pp;
            pp.author_index = a;
            pp.planted = planted;
            pp.date = config.period_start + static_cast<DayNum>(rng.below(span_days));
            while (!is_weekday(pp.date))
                pp.date = config.period_start + static_cast<DayNum>(rng.below(span_days));
            pp.stock_index = static_cast<int>(rng.below(config.n_stocks));
            pp.intended = rng.below(2) == 0 ? +1 : -1;
            pp.accurate = rng.bernoulli(p);
            pp.comments = rng.count_with_mean(config.comment_model.base_rate);
            if (planted)
                pp.comments = static_cast<std::int64_t>(
                    static_cast<double>(pp.comments) * config.comment_model.planted_multiplier);
            pp.template_index = static_cast<int>(rng.below(3));
            plan.push_back(pp);
        }
    }

    SynthBundle bundle;
    std::int64_t next_id = 1;
    for (const PlannedPost& pp : plan) {
        Post post;
        char id[16];
        std::snprintf(id, sizeof(id), "P%06lld", static_cast<long long>(next_id++));
        post.post_id = id;
        post.author_id = synth_author_id(pp.author_index);
        post.published_at = day_start(pp.date) + 54000;  // 15:00 UTC
        post.kind = config.post_kind;
        const std::string symbol = synth_stock_symbol(pp.stock_index);
        post.symbols.push_back(symbol);
        post.comment_count = pp.comments;
        if (config.post_kind == PostKind::Article) {
            post.text = instantiate(
                pp.intended > 0 ? kPositiveArticles[pp.template_index]
                                : kNegativeArticles[pp.template_index],
                symbol);
        } else {
            post.text = instantiate(
                pp.intended > 0 ? kPositiveMessages[pp.template_index]
                                : kNegativeMessages[pp.template_index],
                symbol);
            post.label = pp.intended > 0 ? Label::Bullish : Label::Bearish;
        }
        bundle.corpus.posts.push_back(std::move(post));

        GroundTruthRow row;
        row.post_id = id;
        row.author_id = synth_author_id(pp.author_index);
        row.symbol = symbol;
        row.intended_polarity = pp.intended;
        row.accurate = pp.accurate;
        row.planted = pp.planted;
        bundle.ground_truth.push_back(std::move(row));
    }
    finalize_corpus(bundle.corpus);

    // prices: log-normal daily steps plus the per-post signal bumps, bars on
    // weekdays only (weekend log-returns roll into Monday's bar)
    const DayNum lo = config.period_start - 7;
    const DayNum hi = config.period_end + 40;  // room for 30-day horizons plus slip
    const std::size_t n_days = static_cast<std::size_t>(hi - lo + 1);
    const PriceModel& pm = config.price_model;
    const double bump_per_day =
        std::log1p(pm.signal_bump) / static_cast<double>(pm.signal_window_days);

    auto build_series = [&](const std::string& symbol, double start_price,
                            const std::vector<double>* adjustments) {
        std::vector<double> logret(n_days, 0.0);
        for (std::size_t i = 1; i < n_days; ++i) logret[i] = pm.drift + pm.daily_vol * rng.normal();
        if (adjustments) {
            for (std::size_t i = 0; i < n_days; ++i) logret[i] += (*adjustments)[i];
        }
        PriceSeries series;
        series.symbol = symbol;
        double logp = std::log(start_price);
        double prev_close = start_price;
        for (std::size_t i = 0; i < n_days; ++i) {
            logp += i == 0 ? 0.0 : logret[i];
            DayNum date = lo + static_cast<DayNum>(i);
            if (!is_weekday(date)) continue;
            PriceBar bar;
            bar.date = date;
            bar.close = std::exp(logp);
            bar.open = series.bars.empty() ? bar.close : prev_close;
            bar.high = std::max(bar.open, bar.close);
            bar.low = std::min(bar.open, bar.close);
            bar.volume = 1000 + static_cast<std::int64_t>(rng.below(9000));
            prev_close = bar.close;
            series.bars.push_back(bar);
        }
        return series;
    };

    for (int s = 0; s < config.n_stocks; ++s) {
        std::vector<double> adjustments(n_days, 0.0);
        for (std::size_t k = 0; k < plan.size(); ++k) {
            const PlannedPost& pp = plan[k];
            if (pp.stock_index != s) continue;
            const int sign = pp.accurate ? pp.intended : -pp.intended;
            for (int j = 1; j <= pm.signal_window_days; ++j) {
                DayNum day = pp.date + j;
                if (day < lo || day > hi) continue;
                adjustments[static_cast<std::size_t>(day - lo)] += sign * bump_per_day;
            }
        }
        const double start_price = 40.0 + 7.0 * static_cast<double>(s % 16);
        std::string symbol = synth_stock_symbol(s);
        bundle.prices.series.emplace(symbol, build_series(symbol, start_price, &adjustments));
    }
    bundle.prices.series.emplace(kSynthBenchmarkSymbol,
                                 build_series(kSynthBenchmarkSymbol, 100.0, nullptr));
    bundle.prices.benchmark_symbol = kSynthBenchmarkSymbol;
    return bundle;
}

std::vector<std::pair<std::string, std::string>> make_follow_edges(const SynthConfig& config) {
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::pair<std::string, std::string>> edges;
    for (int f = 0; f < config.n_authors; ++f) {
        for (int a = 0; a < config.n_authors; ++a) {
            if (a == f) continue;
            const bool planted = config.planted_authors.count(synth_author_id(a)) > 0;
            if (rng.bernoulli(planted ? 0.4 : 0.04))
                edges.emplace_back(synth_author_id(f), synth_author_id(a));
        }
    }
    return edges;
}

void write_bundle(const SynthBundle& bundle, const SynthConfig& config,
                  const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory / "prices");
    save_corpus(bundle.corpus, directory / "corpus.jsonl");
    for (const auto& [symbol, series] : bundle.prices.series)
        save_price_series(series, directory / "prices" / (symbol + ".csv"));
    {
        std::ofstream out = open_output(directory / "ground_truth.csv");
        out << "post_id,author,symbol,intended,accurate,planted\n";
        for (const GroundTruthRow& r : bundle.ground_truth)
            out << r.post_id << ',' << r.author_id << ',' << r.symbol << ','
                << r.intended_polarity << ',' << (r.accurate ? 1 : 0) << ','
                << (r.planted ? 1 : 0) << '\n';
    }
    {
        std::ofstream out = open_output(directory / "edges.tsv");
        for (const auto& [src, dst] : make_follow_edges(config)) out << src << '\t' << dst << '\n';
    }
}

}  // namespace crowdsent
