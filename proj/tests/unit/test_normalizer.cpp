#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "kcn/error.hpp"
#include "kcn/normalizer.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace kcn;

TEST(Fold, Examples) {
    EXPECT_EQ(fold_case_hyphens("Self-Regulated Learning"), "self regulated learning");
    EXPECT_EQ(fold_case_hyphens("ai"), "ai");
    EXPECT_EQ(fold_case_hyphens("E-Learning  Systems"), "e learning systems");
    EXPECT_EQ(fold_case_hyphens("  Human\xE2\x80\x90" "Centered \t Design "), "human centered design");
}

TEST(Fold, EmptyRejected) {
    EXPECT_THROW(fold_case_hyphens("   "), Error);
    EXPECT_THROW(fold_case_hyphens("--"), Error);
}

TEST(Singularize, Examples) {
    const auto prot = default_protected_tokens();
    EXPECT_EQ(singularize("neural networks", prot), "neural network");
    EXPECT_EQ(singularize("ses", prot), "ses");
    EXPECT_EQ(singularize("learning analytics", prot), "learning analytics");
    EXPECT_EQ(singularize("massive open online courses", prot), "massive open online course");
}

TEST(Singularize, OrderedRules) {
    const std::set<std::string> none;
    EXPECT_EQ(singularize("children", none), "child");
    EXPECT_EQ(singularize("big data", none), "big data");
    EXPECT_EQ(singularize("meta analyses", none), "meta analysis");
    EXPECT_EQ(singularize("criteria", none), "criterion");
    EXPECT_EQ(singularize("social media", none), "social media");
    EXPECT_EQ(singularize("technologies", none), "technology");
    EXPECT_EQ(singularize("hypotheses", none), "hypothesis");
    EXPECT_EQ(singularize("classes", none), "class");
    EXPECT_EQ(singularize("class", none), "class");
    EXPECT_EQ(singularize("corpus", none), "corpus");
    EXPECT_EQ(singularize("analysis", none), "analysis");
    EXPECT_EQ(singularize("networks of games", none), "networks of game");
}

TEST(Singularize, Idempotent) {
    const auto prot = default_protected_tokens();
    for (const char* w : {"technologies", "analyses", "classes", "boxes", "buses", "series", "dynamics",
                          "studies", "children", "games", "mooc"}) {
        const auto once = singularize(w, prot);
        EXPECT_EQ(singularize(once, prot), once) << w;
    }
}

TEST(Parenthetical, Examples) {
    auto lex = default_lexicon();
    EXPECT_EQ(expand_parenthetical("explainable ai (xai)", lex), "explainable ai");
    EXPECT_EQ(lex.abbrev_map.at("xai"), "explainable ai");
    EXPECT_EQ(expand_parenthetical("learning analytics", lex), "learning analytics");
    EXPECT_EQ(expand_parenthetical("intelligent tutoring system (its)", lex), "intelligent tutoring system");
    EXPECT_EQ(lex.abbrev_map.at("its"), "intelligent tutoring system");
}

TEST(Parenthetical, UnbalancedWarns) {
    auto lex = default_lexicon();
    EXPECT_EQ(expand_parenthetical("explainable ai (xai", lex), "explainable ai (xai");
    ASSERT_FALSE(lex.audit.empty());
    EXPECT_FALSE(lex.audit.back().warning.empty());
    EXPECT_TRUE(lex.abbrev_map.empty());
}

TEST(Abbrev, Lookup) {
    auto lex = default_lexicon();
    expand_parenthetical("explainable ai (xai)", lex);
    EXPECT_EQ(apply_abbrev_map("xai", lex), "explainable ai");
    EXPECT_EQ(apply_abbrev_map("gpt", lex), "gpt");
}

TEST(Abbrev, DefaultLexiconFile) {
    auto lex = default_lexicon();
    load_abbreviations(std::filesystem::path(KCN_DATA_DIR) / "lexicon" / "abbrev.tsv", lex);
    EXPECT_EQ(apply_abbrev_map("llm", lex), "large language model");
}

TEST(Abbrev, MapStaysChainFree) {
    auto lex = default_lexicon();
    lex.register_abbreviation("b", "c");
    lex.register_abbreviation("a", "b");
    for (const auto& [k, v] : lex.abbrev_map) EXPECT_FALSE(lex.abbrev_map.contains(v)) << k;
    EXPECT_EQ(lex.abbrev_map.at("a"), "c");
}

TEST(Abbrev, FileCycleRejected) {
    const auto path = std::filesystem::temp_directory_path() / "kcn_cycle_abbrev.tsv";
    std::ofstream(path) << "a\tb\nb\ta\n";
    auto lex = default_lexicon();
    EXPECT_THROW(load_abbreviations(path, lex), Error);
    std::filesystem::remove(path);
}

TEST(Similarity, Examples) {
    EXPECT_NEAR(similarity("principle component analysis", "principal component analysis").value, 96.43, 0.01);
    EXPECT_EQ(similarity("abc", "abc").value, 100.0);
    EXPECT_EQ(similarity("abc", "xyz").value, 0.0);
    EXPECT_EQ(similarity("", "").value, 100.0);
    // LCS("deep learning", "machine learning") = 10, so 200*10/29.
    EXPECT_EQ(oracle::lcs("deep learning", "machine learning"), 10u);
    EXPECT_NEAR(similarity("deep learning", "machine learning").value, 2000.0 / 29.0, 1e-12);
}

TEST(Similarity, MatchesDynamicProgramOnRandomStrings) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(0, 90);
    std::uniform_int_distribution<int> ch(0, 5);
    for (int t = 0; t < 500; ++t) {
        std::string a, b;
        for (int i = len(rng); i > 0; --i) a.push_back(static_cast<char>('a' + ch(rng)));
        for (int i = len(rng); i > 0; --i) b.push_back(static_cast<char>('a' + ch(rng)));
        ASSERT_EQ(lcs_length(a, b), oracle::lcs(a, b)) << a << " / " << b;
        const double s = similarity(a, b).value;
        EXPECT_NEAR(s, oracle::indel_similarity(a, b), 1e-12);
        EXPECT_EQ(s, similarity(b, a).value);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 100.0);
        EXPECT_EQ(s == 100.0, a == b);
    }
}

TEST(Merge, SpellingAndCompoundVariants) {
    const std::map<std::string, std::size_t> counts{{"human centred computing", 1},
                                                    {"human centered computing", 3},
                                                    {"clickstream", 2},
                                                    {"click stream", 1},
                                                    {"deep learning", 5},
                                                    {"machine learning", 5}};
    const auto lex = merge_synonyms(counts, default_lexicon());
    EXPECT_EQ(lex.merge_map.at("human centred computing"), "human centered computing");
    EXPECT_EQ(lex.merge_map.at("click stream"), "clickstream");
    EXPECT_FALSE(lex.merge_map.contains("deep learning"));
    EXPECT_FALSE(lex.merge_map.contains("machine learning"));
}

TEST(Merge, CanonicalTieBreaks) {
    // Equal counts: shorter wins; equal length: lexicographic.
    auto lex = merge_synonyms({{"clickstream", 1}, {"click stream", 1}}, default_lexicon());
    EXPECT_EQ(lex.merge_map.at("click stream"), "clickstream");
    lex = merge_synonyms({{"modelling x", 2}, {"modeling xy", 2}}, default_lexicon());
    EXPECT_EQ(lex.merge_map.at("modelling x"), "modeling xy");
}

TEST(Merge, AllowAndDenyLists) {
    auto base = default_lexicon();
    base.merge_rules = {{"mooc", "massive open online course", MergeDirective::allow},
                        {"human centred computing", "human centered computing", MergeDirective::deny}};
    const auto lex = merge_synonyms(
        {{"mooc", 4}, {"massive open online course", 1}, {"human centred computing", 1}, {"human centered computing", 1}},
        base);
    EXPECT_EQ(lex.merge_map.at("mooc"), "massive open online course");
    EXPECT_FALSE(lex.merge_map.contains("human centred computing"));
    EXPECT_FALSE(lex.merge_map.contains("human centered computing"));
}

TEST(Merge, TransitiveClosureAndCanonicalNeverKey) {
    // a~b and b~c at 90 while a and c are further apart.
    const std::map<std::string, std::size_t> counts{
        {"abcdefghijklmnopqrst", 1}, {"abcdefghijklmnopqrsx", 2}, {"abcdefghijklmnopqryx", 1}};
    const auto lex = merge_synonyms(counts, default_lexicon());
    EXPECT_EQ(lex.merge_map.size(), 2u);
    for (const auto& [k, v] : lex.merge_map) {
        EXPECT_EQ(v, "abcdefghijklmnopqrsx");
        EXPECT_FALSE(lex.merge_map.contains(v));
    }
}

TEST(Merge, BlockingAgreesWithExhaustiveOnRandomVocabulary) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(3, 14);
    std::uniform_int_distribution<int> ch(0, 3);
    std::uniform_int_distribution<int> count(1, 4);
    std::map<std::string, std::size_t> counts;
    while (counts.size() < 150) {
        std::string s;
        for (int i = len(rng); i > 0; --i) s.push_back(static_cast<char>('a' + ch(rng)));
        counts[s] = static_cast<std::size_t>(count(rng));
    }
    auto exhaustive = default_lexicon();
    exhaustive.exhaustive_pairing = true;
    const auto full = merge_synonyms(counts, exhaustive);
    const auto blocked = merge_synonyms(counts, default_lexicon());
    // Blocking may only drop pairs, never invent them.
    for (const auto& [k, v] : blocked.merge_map) {
        ASSERT_TRUE(full.merge_map.contains(k)) << k;
    }
}

namespace {

Corpus corpus_of(const std::vector<std::vector<std::string>>& keyword_lists) {
    Corpus c;
    for (std::size_t i = 0; i < keyword_lists.size(); ++i) {
        c.records.push_back({"r" + std::to_string(i), "v", 2020 + static_cast<int>(i % 3), keyword_lists[i]});
    }
    return c;
}

}  // namespace

TEST(NormalizeCorpus, Examples) {
    auto result = normalize_corpus(corpus_of({{"Explainable AI (XAI)", "xai"}, {"ai"}}), default_lexicon());
    EXPECT_EQ(result.corpus.records[0].keywords, (std::vector<std::string>{"explainable ai"}));
    EXPECT_EQ(result.corpus.records[1].keywords, (std::vector<std::string>{"ai"}));
}

TEST(NormalizeCorpus, IdempotentOnFuzzedKeywords) {
    std::mt19937_64 rng(99);
    const auto words = gen::fuzz_keywords(rng, 1000);
    const auto once = normalize_corpus(gen::corpus_of(words, 5), default_lexicon()).corpus;
    const auto twice = normalize_corpus(once, default_lexicon()).corpus;
    ASSERT_EQ(once.records.size(), twice.records.size());
    for (std::size_t i = 0; i < once.records.size(); ++i) EXPECT_EQ(once.records[i], twice.records[i]);
}

TEST(NormalizeCorpus, OutputIsFoldedAndNeverGrows) {
    std::mt19937_64 rng(3);
    const auto words = gen::fuzz_keywords(rng, 400);
    const auto in = gen::corpus_of(words, 4);
    const auto out = normalize_corpus(in, default_lexicon()).corpus;
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        EXPECT_LE(out.records[i].keywords.size(), in.records[i].keywords.size());
        for (const auto& kw : out.records[i].keywords) {
            EXPECT_EQ(kw.find('-'), std::string::npos) << kw;
            EXPECT_EQ(kw.find("  "), std::string::npos) << kw;
            EXPECT_TRUE(std::none_of(kw.begin(), kw.end(), ::isupper)) << kw;
        }
    }
}

TEST(NormalizeCorpus, AuditReplayReproducesOutput) {
    std::mt19937_64 rng(17);
    const auto words = gen::fuzz_keywords(rng, 600);
    const auto in = gen::corpus_of(words, 6);
    const auto result = normalize_corpus(in, default_lexicon());
    const auto replayed = replay_audit(in, parse_audit_jsonl(audit_jsonl(result.lexicon.audit)));
    for (std::size_t i = 0; i < in.records.size(); ++i) {
        EXPECT_EQ(replayed.records[i].keywords, result.corpus.records[i].keywords);
    }
}

TEST(NormalizeCorpus, InputOrderDoesNotChangeGroups) {
    std::mt19937_64 rng(23);
    const auto words = gen::fuzz_keywords(rng, 300);
    auto a = gen::corpus_of(words, 3);
    auto b = a;
    std::shuffle(b.records.begin(), b.records.end(), rng);
    const auto ra = normalize_corpus(a, default_lexicon()).lexicon.merge_map;
    const auto rb = normalize_corpus(b, default_lexicon()).lexicon.merge_map;
    EXPECT_EQ(ra, rb);
}

TEST(Audit, JsonlRoundTrip) {
    std::vector<AuditEntry> audit{{"XAI", "xai", Rule::fold, ""}, {"a (b", "a (b", Rule::paren, "unbalanced"}};
    const auto text = audit_jsonl(audit);
    EXPECT_EQ(text.substr(0, text.find('\n')), R"({"raw":"XAI","canonical":"xai","rule":"fold"})");
    EXPECT_EQ(parse_audit_jsonl(text), audit);
}
