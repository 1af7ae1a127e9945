#include "crowdsent/lexicon_sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "crowdsent/text.hpp"
#include "crowdsent/util.hpp"

namespace crowdsent {

const char* polarity_name(Polarity p) {
    switch (p) {
        case Polarity::Positive: return "pos";
        case Polarity::Negative: return "neg";
        default: return "neu";
    }
}

static Polarity polarity_of_score(double score) {
    if (score > 0) return Polarity::Positive;
    if (score < 0) return Polarity::Negative;
    return Polarity::Neutral;
}

StockSentiment sentiment_from_counts(std::string post_id, std::string symbol, std::int64_t pos,
                                     std::int64_t neg) {
    StockSentiment s;
    s.post_id = std::move(post_id);
    s.symbol = std::move(symbol);
    s.pos_count = pos;
    s.neg_count = neg;
    s.score = std::log((1.0 + static_cast<double>(pos)) / (1.0 + static_cast<double>(neg)));
    s.polarity = polarity_of_score(s.score);
    return s;
}

StockSentiment sentiment_binary(std::string post_id, std::string symbol, int polarity) {
    StockSentiment s;
    s.post_id = std::move(post_id);
    s.symbol = std::move(symbol);
    s.score = polarity >= 0 ? 1.0 : -1.0;
    s.polarity = polarity >= 0 ? Polarity::Positive : Polarity::Negative;
    return s;
}

std::size_t Lexicon::max_phrase_len() const {
    std::size_t n = 0;
    for (const auto& [phrase, _] : phrase_overrides) n = std::max(n, phrase.size());
    return n;
}

void load_lexicon_file(const std::filesystem::path& path, Lexicon& lexicon) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (strip(line).empty() || line[0] == '#') continue;
        auto cols = split(line, '\t');
        if (cols.size() != 2)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected term<TAB>polarity");
        std::vector<std::string> tokens = tokenize(cols[0]);
        std::string pol = strip(cols[1]);
        if (tokens.empty())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": empty term");
        if (tokens.size() > 1) {
            if (tokens.size() > 4)
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": phrases are limited to 4 tokens");
            if (pol == "pos") lexicon.phrase_overrides[tokens] = +1;
            else if (pol == "neg") lexicon.phrase_overrides[tokens] = -1;
            else
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": phrase polarity must be pos or neg");
            continue;
        }
        const std::string& word = tokens[0];
        if (pol == "pos") lexicon.positive_words.insert(word);
        else if (pol == "neg") lexicon.negative_words.insert(word);
        else if (pol == "negation") lexicon.negation_words.insert(word);
        else
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": unknown polarity: " + pol);
    }
    for (const std::string& w : lexicon.positive_words) {
        if (lexicon.negative_words.count(w))
            throw std::runtime_error("term is both positive and negative: " + w);
    }
}

Lexicon load_lexicon(const std::filesystem::path& words_path) {
    Lexicon lex;
    load_lexicon_file(words_path, lex);
    return lex;
}

CompanyNames load_company_names(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open company names file: " + path.string());
    CompanyNames names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (strip(line).empty() || line[0] == '#') continue;
        auto cols = split(line, '\t');
        if (cols.size() != 2) continue;
        names[to_upper(strip(cols[0]))].push_back(strip(cols[1]));
    }
    return names;
}

std::vector<Sentence> segment_sentences(const std::string& text) {
    std::vector<Sentence> out;
    const std::size_t n = text.size();
    std::size_t start = 0;

    auto flush = [&](std::size_t end) {
        // trim surrounding whitespace but keep the original offset of the
        // first retained character
        std::size_t b = start;
        while (b < end && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
        std::size_t e = end;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        if (e > b) out.push_back({text.substr(b, e - b), b});
        start = end;
    };

    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t j = i;
        while (j + 1 < n && (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?')) ++j;
        bool at_end = j + 1 >= n;
        if (at_end || std::isspace(static_cast<unsigned char>(text[j + 1]))) {
            flush(j + 1);
            i = j;
        } else {
            i = j;  // '.' glued to the next char: decimal, ticker dot, abbreviation
        }
    }
    flush(n);
    return out;
}

namespace {

bool word_bounded_match(const std::string& haystack_lower, const std::string& needle_lower,
                        std::size_t pos) {
    if (pos > 0 && ascii_alnum(haystack_lower[pos - 1])) return false;
    std::size_t end = pos + needle_lower.size();
    if (end < haystack_lower.size() && ascii_alnum(haystack_lower[end])) return false;
    return true;
}

void collect_occurrences(const std::string& text_lower, const std::string& needle,
                         const std::string& symbol, std::vector<Landmark>& out) {
    if (needle.empty()) return;
    std::string n = to_lower(needle);
    std::size_t pos = 0;
    while ((pos = text_lower.find(n, pos)) != std::string::npos) {
        if (word_bounded_match(text_lower, n, pos)) out.push_back({symbol, pos, false});
        pos += 1;
    }
}

}  // namespace

std::vector<Landmark> find_landmarks(const std::string& text,
                                     const std::vector<std::string>& symbols,
                                     const CompanyNames& names) {
    std::string lower = to_lower(text);
    std::vector<Landmark> landmarks;
    for (const std::string& sym : symbols) {
        std::size_t before = landmarks.size();
        collect_occurrences(lower, sym, sym, landmarks);
        if (auto it = names.find(sym); it != names.end()) {
            for (const std::string& name : it->second) collect_occurrences(lower, name, sym, landmarks);
        }
        if (landmarks.size() == before) landmarks.push_back({sym, 0, true});
    }
    // stable: equal offsets keep post symbol order, real mentions before synthetics
    std::stable_sort(landmarks.begin(), landmarks.end(),
                     [](const Landmark& a, const Landmark& b) { return a.offset < b.offset; });
    return landmarks;
}

std::vector<SentenceAssignment> slice_article(const std::vector<Sentence>& sentences,
                                              const std::vector<Landmark>& landmarks) {
    if (landmarks.empty()) throw std::invalid_argument("slice_article: no landmarks");
    std::vector<SentenceAssignment> out;
    out.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const std::size_t s = sentences[i].offset;
        std::size_t best = 0;
        std::size_t best_dist = std::numeric_limits<std::size_t>::max();
        for (std::size_t k = 0; k < landmarks.size(); ++k) {
            std::size_t o = landmarks[k].offset;
            std::size_t dist = s > o ? s - o : o - s;
            if (dist < best_dist) {  // strict: ties stay with the earlier landmark
                best_dist = dist;
                best = k;
            }
        }
        out.push_back({i, landmarks[best].symbol, landmarks[best].offset});
    }
    return out;
}

SegmentScore score_segment(const std::vector<std::string>& sentences, const Lexicon& lexicon) {
    SegmentScore total;
    const std::size_t max_phrase = lexicon.max_phrase_len();
    for (const std::string& sentence : sentences) {
        std::vector<std::string> tokens = tokenize(sentence);
        std::size_t i = 0;
        while (i < tokens.size()) {
            int polarity = 0;
            std::size_t span = 1;
            // longest phrase override first
            for (std::size_t len = std::min(max_phrase, tokens.size() - i); len >= 2; --len) {
                std::vector<std::string> cand(tokens.begin() + i, tokens.begin() + i + len);
                if (auto it = lexicon.phrase_overrides.find(cand); it != lexicon.phrase_overrides.end()) {
                    polarity = it->second;
                    span = len;
                    break;
                }
            }
            if (polarity == 0) {
                if (lexicon.positive_words.count(tokens[i])) polarity = +1;
                else if (lexicon.negative_words.count(tokens[i])) polarity = -1;
            }
            if (polarity != 0) {
                int negations = 0;
                std::size_t w = static_cast<std::size_t>(lexicon.negation_window);
                for (std::size_t back = 1; back <= w && back <= i; ++back) {
                    if (lexicon.negation_words.count(tokens[i - back])) ++negations;
                }
                if (negations % 2 == 1) polarity = -polarity;
                if (polarity > 0) ++total.pos_count;
                else ++total.neg_count;
            }
            i += span;
        }
    }
    total.score = std::log((1.0 + static_cast<double>(total.pos_count)) /
                           (1.0 + static_cast<double>(total.neg_count)));
    return total;
}

std::vector<StockSentiment> analyze_article(const Post& post, const Lexicon& lexicon,
                                            const CompanyNames& names) {
    if (post.kind != PostKind::Article)
        throw std::invalid_argument("analyze_article: post is not an article");

    std::vector<Sentence> sentences = segment_sentences(post.text);

    if (post.symbols.empty()) {
        std::vector<std::string> texts;
        texts.reserve(sentences.size());
        for (const Sentence& s : sentences) texts.push_back(s.text);
        SegmentScore sc = score_segment(texts, lexicon);
        return {sentiment_from_counts(post.post_id, "*", sc.pos_count, sc.neg_count)};
    }

    std::vector<Landmark> landmarks = find_landmarks(post.text, post.symbols, names);
    std::vector<SentenceAssignment> assignments = slice_article(sentences, landmarks);

    std::map<std::string, std::vector<std::string>> segment_texts;
    for (const SentenceAssignment& a : assignments)
        segment_texts[a.symbol].push_back(sentences[a.sentence_index].text);

    std::vector<StockSentiment> out;
    out.reserve(post.symbols.size());
    for (const std::string& sym : post.symbols) {
        auto it = segment_texts.find(sym);
        SegmentScore sc = it == segment_texts.end() ? score_segment({}, lexicon)
                                                    : score_segment(it->second, lexicon);
        out.push_back(sentiment_from_counts(post.post_id, sym, sc.pos_count, sc.neg_count));
    }
    return out;
}

void save_sentiments(const std::vector<StockSentiment>& sentiments,
                     const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "post_id,symbol,score,polarity\n";
    for (const StockSentiment& s : sentiments)
        out << s.post_id << ',' << s.symbol << ',' << fmt_double(s.score, 6) << ','
            << polarity_name(s.polarity) << '\n';
}

std::vector<StockSentiment> load_sentiments(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sentiment file: " + path.string());
    std::vector<StockSentiment> out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (strip(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto cols = split(line, ',');
        if (cols.size() != 4) throw std::runtime_error("bad sentiment row: " + line);
        StockSentiment s;
        s.post_id = cols[0];
        s.symbol = cols[1];
        s.score = std::strtod(cols[2].c_str(), nullptr);
        std::string pol = strip(cols[3]);
        // the polarity column is authoritative; the printed score is rounded
        if (pol == "pos") s.polarity = Polarity::Positive;
        else if (pol == "neg") s.polarity = Polarity::Negative;
        else if (pol == "neu") s.polarity = Polarity::Neutral;
        else throw std::runtime_error("bad polarity: " + pol);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace crowdsent
