#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crowdsent/corpus.hpp"

namespace crowdsent {

enum class Polarity { Positive, Negative, Neutral };

const char* polarity_name(Polarity p);

// Per-stock sentiment produced by either extractor. For dictionary scores,
// score = ln((1 + pos_count) / (1 + neg_count)); binary message sentiment
// carries score +/-1 with zero counts.
struct StockSentiment {
    std::string post_id;
    std::string symbol;  // "*" = market-wide (post had no tagged stocks)
    double score = 0.0;
    std::int64_t pos_count = 0;
    std::int64_t neg_count = 0;
    Polarity polarity = Polarity::Neutral;
};

StockSentiment sentiment_from_counts(std::string post_id, std::string symbol, std::int64_t pos,
                                     std::int64_t neg);
StockSentiment sentiment_binary(std::string post_id, std::string symbol, int polarity);

struct Lexicon {
    std::set<std::string> positive_words;
    std::set<std::string> negative_words;
    std::set<std::string> negation_words;
    // tokenized lowercase phrase (2..4 tokens) -> +1 / -1
    std::map<std::vector<std::string>, int> phrase_overrides;
    // number of sentiment tokens a preceding negation can flip; see score_segment
    int negation_window = 3;

    std::size_t max_phrase_len() const;
};

// TSV `term<TAB>polarity` with polarity in {pos, neg, negation}; multi-token
// terms become phrase overrides. May be called repeatedly to layer files.
void load_lexicon_file(const std::filesystem::path& path, Lexicon& lexicon);
Lexicon load_lexicon(const std::filesystem::path& words_path);

// ticker -> alternative names, from TSV `ticker<TAB>name`
using CompanyNames = std::map<std::string, std::vector<std::string>>;
CompanyNames load_company_names(const std::filesystem::path& path);

struct Sentence {
    std::string text;
    std::size_t offset = 0;  // char offset of sentence start in the article
};

// Splits on '.', '!', '?' followed by whitespace/end; a '.' with no trailing
// whitespace (decimals, tickers like BRK.B) does not split.
std::vector<Sentence> segment_sentences(const std::string& text);

struct Landmark {
    std::string symbol;
    std::size_t offset = 0;
    bool synthetic = false;  // symbol never occurred in the text
};

// Whole-word, case-insensitive occurrences of each symbol or any of its
// company names; a symbol with no occurrence gets one synthetic landmark at
// offset 0. Result is sorted by offset (stable in post symbol order).
std::vector<Landmark> find_landmarks(const std::string& text,
                                     const std::vector<std::string>& symbols,
                                     const CompanyNames& names);

struct SentenceAssignment {
    std::size_t sentence_index = 0;
    std::string symbol;
    std::size_t landmark_offset = 0;
};

// Nearest landmark by |sentence start - landmark offset|; ties go to the
// earlier landmark.
std::vector<SentenceAssignment> slice_article(const std::vector<Sentence>& sentences,
                                              const std::vector<Landmark>& landmarks);

struct SegmentScore {
    std::int64_t pos_count = 0;
    std::int64_t neg_count = 0;
    double score = 0.0;  // ln((1+pos)/(1+neg))
};

SegmentScore score_segment(const std::vector<std::string>& sentences, const Lexicon& lexicon);

// Full pipeline for one article: one StockSentiment per tagged symbol, or a
// single market-wide ("*") sentiment when the article tags none.
std::vector<StockSentiment> analyze_article(const Post& post, const Lexicon& lexicon,
                                            const CompanyNames& names);

// sentiment report I/O: post_id,symbol,score,polarity
void save_sentiments(const std::vector<StockSentiment>& sentiments,
                     const std::filesystem::path& path);
std::vector<StockSentiment> load_sentiments(const std::filesystem::path& path);

}  // namespace crowdsent
