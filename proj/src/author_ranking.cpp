#include "crowdsent/author_ranking.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "crowdsent/util.hpp"

namespace crowdsent {

const char* rank_metric_name(RankMetric m) {
    switch (m) {
        case RankMetric::PerA: return "PerA";
        case RankMetric::PerS: return "PerS";
        case RankMetric::AllCom: return "AllCom";
        default: return "AvgCom";
    }
}

RankMetric parse_rank_metric(const std::string& name) {
    if (name == "PerA") return RankMetric::PerA;
    if (name == "PerS") return RankMetric::PerS;
    if (name == "AllCom") return RankMetric::AllCom;
    if (name == "AvgCom") return RankMetric::AvgCom;
    throw std::invalid_argument("unknown ranking metric: " + name);
}

AuthorRanking rank_authors(const Corpus& corpus, const std::vector<StockSentiment>& sentiments,
                           const PriceStore& prices, const RankingConfig& config) {
    if (config.period_start >= config.period_end)
        throw std::invalid_argument("rank_authors: empty ranking period");

    struct Tally {
        int post_count = 0;
        std::int64_t comment_total = 0;
        std::map<std::string, std::vector<double>> returns_by_stock;
    };
    std::map<std::string, Tally> tallies;
    std::map<std::string, const Post*> in_period;  // post_id -> post

    for (const Post& p : corpus.posts) {
        if (p.published_at < config.period_start || p.published_at >= config.period_end) continue;
        in_period.emplace(p.post_id, &p);
        Tally& t = tallies[p.author_id];
        t.post_count += 1;
        t.comment_total += p.comment_count;
    }

    const bool needs_returns =
        config.metric == RankMetric::PerA || config.metric == RankMetric::PerS;
    if (needs_returns) {
        PostTimes times = post_times(corpus);
        for (const StockSentiment& s : sentiments) {
            auto it = in_period.find(s.post_id);
            if (it == in_period.end()) continue;
            if (s.polarity == Polarity::Neutral || s.symbol == "*") continue;
            auto ar = article_return(s, times, prices, config.horizon_days);
            if (!ar) continue;
            tallies[it->second->author_id].returns_by_stock[s.symbol].push_back(ar->r);
        }
    }

    AuthorRanking ranking;
    ranking.config = config;
    for (const auto& [author, t] : tallies) {
        if (t.post_count < config.min_posts) continue;
        double value = 0.0;
        switch (config.metric) {
            case RankMetric::PerA: {
                double sum = 0.0;
                std::size_t n = 0;
                for (const auto& [_, rs] : t.returns_by_stock) {
                    for (double r : rs) sum += r;
                    n += rs.size();
                }
                if (n == 0) continue;  // no measurable returns: metric undefined
                value = sum / static_cast<double>(n);
                break;
            }
            case RankMetric::PerS: {
                double sum_of_means = 0.0;
                std::size_t stocks = 0;
                for (const auto& [_, rs] : t.returns_by_stock) {
                    double s = 0.0;
                    for (double r : rs) s += r;
                    sum_of_means += s / static_cast<double>(rs.size());
                    ++stocks;
                }
                if (stocks == 0) continue;
                value = sum_of_means / static_cast<double>(stocks);
                break;
            }
            case RankMetric::AllCom:
                value = static_cast<double>(t.comment_total);
                break;
            case RankMetric::AvgCom:
                value = static_cast<double>(t.comment_total) / static_cast<double>(t.post_count);
                break;
        }
        ranking.entries.push_back({author, value, t.post_count, t.comment_total});
    }
    if (ranking.entries.empty())
        throw std::runtime_error(
            "rank_authors: no eligible authors in period (min_posts=" +
            std::to_string(config.min_posts) + ", metric=" + rank_metric_name(config.metric) + ")");

    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const RankedAuthor& a, const RankedAuthor& b) {
                  if (a.metric_value != b.metric_value) return a.metric_value > b.metric_value;
                  return a.author_id < b.author_id;
              });
    return ranking;
}

void save_ranking(const AuthorRanking& ranking, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "rank,author,metric,value,posts,comments\n";
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const RankedAuthor& e = ranking.entries[i];
        out << (i + 1) << ',' << e.author_id << ',' << rank_metric_name(ranking.config.metric)
            << ',' << fmt_double(e.metric_value, 8) << ',' << e.post_count << ','
            << e.comment_total << '\n';
    }
}

Universe select_universe(const AuthorRanking& ranking, const Corpus& corpus, Timestamp start,
                         Timestamp end) {
    if (ranking.entries.empty()) throw std::invalid_argument("select_universe: empty ranking");

    // per-author in-period posts, ordered by publication date
    std::map<std::string, std::vector<const Post*>> posts_by_author;
    for (const Post& p : corpus.posts) {
        if (p.published_at < start || p.published_at >= end) continue;
        posts_by_author[p.author_id].push_back(&p);
    }
    for (auto& [_, posts] : posts_by_author) {
        std::sort(posts.begin(), posts.end(), [](const Post* a, const Post* b) {
            if (a->published_at != b->published_at) return a->published_at < b->published_at;
            return a->post_id < b->post_id;
        });
    }

    Universe universe;
    std::map<std::string, std::size_t> index_of;
    const std::size_t target = static_cast<std::size_t>(ranking.config.universe_size);
    for (const RankedAuthor& entry : ranking.entries) {
        if (universe.entries.size() >= target) break;  // authors are processed whole
        auto it = posts_by_author.find(entry.author_id);
        if (it == posts_by_author.end()) continue;
        for (const Post* post : it->second) {
            for (const std::string& sym : post->symbols) {
                auto found = index_of.find(sym);
                if (found == index_of.end()) {
                    if (universe.entries.size() >= target) continue;
                    index_of.emplace(sym, universe.entries.size());
                    universe.entries.push_back({sym, {entry.author_id}});
                } else {
                    auto& sponsors = universe.entries[found->second].sponsors;
                    if (std::find(sponsors.begin(), sponsors.end(), entry.author_id) ==
                        sponsors.end())
                        sponsors.push_back(entry.author_id);
                }
            }
        }
    }
    universe.short_universe = universe.entries.size() < target;
    return universe;
}

std::vector<RerankPeriod> yearly_rerank_schedule(Timestamp span_min, Timestamp span_max) {
    int first_year = year_of(span_min);
    int last_year = year_of(span_max);
    if (last_year <= first_year)
        throw std::invalid_argument("yearly_rerank_schedule: span covers fewer than 2 years");
    std::vector<RerankPeriod> schedule;
    for (int y = first_year + 1; y <= last_year; ++y) schedule.push_back({y - 1, y});
    return schedule;
}

}  // namespace crowdsent
