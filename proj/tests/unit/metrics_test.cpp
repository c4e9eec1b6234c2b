#include "rair/errors.hpp"
#include "rair/metrics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

namespace rair {
namespace {

EvalItem item(std::string id, std::string source, std::string hypothesis, std::string reference) {
  return {std::move(id), std::move(source), {}, std::move(hypothesis), std::move(reference)};
}

TEST(EditDistance, Examples) {
  EXPECT_EQ(edit_distance("天气很好", "天气很好"), 0u);
  EXPECT_EQ(edit_distance("机器外汇", "即期外汇"), 2u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(edit_distance("caf\xC3\xA9", "cafe\xCC\x81"), 0u);
}

TEST(EditDistance, MatchesRecursiveDefinition) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 2000; ++i) {
    const auto a = testing::random_text(rng, 7);
    const auto b = testing::random_text(rng, 7);
    ASSERT_EQ(edit_distance(a, b), testing::recursive_edit_distance(testing::decode(a), testing::decode(b)))
        << a << " / " << b;
  }
}

TEST(EditDistance, MetricAxiomsAndBounds) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_text(rng, 8);
    const auto b = testing::random_text(rng, 8);
    const auto c = testing::random_text(rng, 8);
    const auto ab = edit_distance(a, b);
    ASSERT_EQ(ab, edit_distance(b, a));
    ASSERT_EQ(ab == 0, a == b);
    ASSERT_LE(edit_distance(a, c), ab + edit_distance(b, c));
    const auto la = testing::count_code_points(a);
    const auto lb = testing::count_code_points(b);
    ASSERT_GE(ab, la > lb ? la - lb : lb - la);
    ASSERT_LE(ab, std::max(la, lb));
  }
}

TEST(Cer, Examples) {
  const std::vector<EvalItem> exact = {item("1", "x", "天气很好", "天气很好")};
  EXPECT_EQ(cer(exact).cer, 0.0);

  const std::vector<EvalItem> one = {item("1", "x", "机器二三四五六七八九", "即期二三四五六七八九")};
  const auto report = cer(one);
  EXPECT_EQ(report.total_edits, 2u);
  EXPECT_EQ(report.total_ref_chars, 10u);
  EXPECT_DOUBLE_EQ(report.cer, 0.2);
}

TEST(Cer, PooledAndMacroDiffer) {
  const std::vector<EvalItem> items = {item("1", "", "ab", "aa"), item("2", "", "abcd", "abcd")};
  EXPECT_DOUBLE_EQ(cer(items).cer, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(cer(items, CerAveraging::Macro).cer, 0.25);
}

TEST(Cer, EmptyReferenceNamesTheItem) {
  const std::vector<EvalItem> items = {item("ok", "", "a", "a"), item("bad", "", "a", "")};
  try {
    cer(items);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.item(), "bad");
  }
}

TEST(Cer, MatchesSummationOracleAndIgnoresOrder) {
  std::mt19937_64 rng(100);
  std::vector<EvalItem> items;
  std::size_t edits = 0, chars = 0;
  for (int i = 0; i < 100; ++i) {
    const auto ref = testing::random_text(rng, 7, testing::mixed_alphabet(), 1);
    auto hyp = testing::decode(ref);
    if (rng() % 2) hyp[rng() % hyp.size()] = U'错';
    if (rng() % 3 == 0) hyp.push_back(U'多');
    std::string h;
    for (auto c : hyp) h += testing::encode(c);
    edits += testing::recursive_edit_distance(hyp, testing::decode(ref));
    chars += testing::count_code_points(ref);
    items.push_back(item(std::to_string(i), ref, h, ref));
  }
  const auto report = cer(items);
  EXPECT_EQ(report.total_edits, edits);
  EXPECT_EQ(report.total_ref_chars, chars);
  EXPECT_DOUBLE_EQ(report.cer, static_cast<double>(edits) / static_cast<double>(chars));
  std::shuffle(items.begin(), items.end(), rng);
  EXPECT_DOUBLE_EQ(cer(items).cer, report.cer);
}

TEST(Cerr, TableValues) {
  EXPECT_NEAR(cerr(5.84, 4.15) * 100.0, 28.9, 0.1);
  EXPECT_NEAR(cerr(5.84, 9.84) * 100.0, -68.5, 0.1);
  EXPECT_EQ(cerr(0.0584, 0.0584), 0.0);
  EXPECT_DOUBLE_EQ(cerr(0.4, 0.1), 1.0 - 0.1 / 0.4);
  EXPECT_THROW(cerr(0.0, 0.1), ArgumentError);
}

TEST(F1, TableValues) {
  EXPECT_NEAR(f1_score(73.1, 60.4), 66.1, 0.1);
  EXPECT_NEAR(f1_score(61.8, 44.9), 52.0, 0.1);
  EXPECT_EQ(f1_score(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(f1_score(1.0, 1.0), 1.0);
}

TEST(SentencePrf, HandBuiltConfusionMatrix) {
  const std::vector<EvalItem> items = {
      item("tp1", "天汽", "天气", "天气"),   item("tp2", "很号", "很好", "很好"),
      item("fp", "正确", "正却", "正确"),    item("fn", "错字", "错字", "错自"),
      item("tn1", "无误", "无误", "无误"),   item("tn2", "甲乙", "甲乙", "甲乙"),
  };
  const auto prf = sentence_prf(items);
  EXPECT_EQ(prf.tp, 2u);
  EXPECT_EQ(prf.fp, 1u);
  EXPECT_EQ(prf.fn, 1u);
  EXPECT_DOUBLE_EQ(prf.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(prf.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(prf.f1, 2.0 / 3.0);
}

TEST(SentencePrf, WrongCorrectionOfAnErrorIsFpAndFn) {
  const std::vector<EvalItem> items = {item("1", "天汽", "天器", "天气")};
  const auto prf = sentence_prf(items);
  EXPECT_EQ(prf.tp, 0u);
  EXPECT_EQ(prf.fp, 1u);
  EXPECT_EQ(prf.fn, 1u);
}

TEST(SentencePrf, PerfectAndEmpty) {
  const std::vector<EvalItem> perfect = {item("1", "a", "b", "b"), item("2", "c", "d", "d")};
  const auto prf = sentence_prf(perfect);
  EXPECT_EQ(prf.precision, 1.0);
  EXPECT_EQ(prf.recall, 1.0);
  EXPECT_EQ(prf.f1, 1.0);
  const auto none = sentence_prf(std::span<const EvalItem>{});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);
}

TEST(SentencePrf, CountIdentitiesOnRandomSets) {
  std::mt19937_64 rng(6);
  const std::vector<std::string> words = {"甲", "乙", "丙"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<EvalItem> items;
    std::size_t pred_pos = 0, cond_pos = 0;
    for (int i = 0; i < 12; ++i) {
      auto s = words[rng() % 3], h = words[rng() % 3], r = words[rng() % 3];
      pred_pos += h != s;
      cond_pos += r != s;
      items.push_back(item(std::to_string(i), s, h, r));
    }
    const auto prf = sentence_prf(items);
    ASSERT_EQ(prf.tp + prf.fp, pred_pos);
    ASSERT_EQ(prf.tp + prf.fn, cond_pos);
  }
}

TEST(LengthAccuracy, CountsMatchingLengths) {
  std::vector<EvalItem> items = {item("1", "天汽很号", "天气很好", ""), item("2", "天汽很号", "天气很好啊", ""),
                                 item("3", "短", "短", "")};
  EXPECT_EQ(length_accuracy(items, TaskKind::Spelling), 2u);
  EXPECT_EQ(length_accuracy(items, TaskKind::Splitting), 2u);

  std::vector<EvalItem> domains;
  for (int d = 0; d < 3; ++d) {
    for (int i = 0; i < 500; ++i) domains.push_back(item("x", "一二三", i % 7 ? "一二三" : "一二", ""));
  }
  std::size_t per_domain = 0;
  for (int i = 0; i < 500; ++i) per_domain += (i % 7) != 0;
  EXPECT_EQ(length_accuracy(domains, TaskKind::Spelling), 3 * per_domain);
}

TEST(LengthAccuracy, NBestUsesCandidateRange) {
  EvalItem nb{"n", "一二", {"一二", "一二三四"}, "一二三", ""};
  const std::vector<EvalItem> items = {nb};
  EXPECT_EQ(length_accuracy(items, TaskKind::NBest), 1u);
}

CorrectionResult scripted(std::vector<std::size_t> output_lengths, std::size_t source_len) {
  const auto task = CorrectionTask::sentence("r", TaskKind::Spelling, std::string(source_len, 'a'));
  std::vector<std::string> replies;
  for (auto n : output_lengths) replies.push_back(std::string(n, 'a'));
  MockChatBackend llm(replies);
  return correct_direct(task, llm, {});
}

TEST(RoundHistogram, BucketsByRoundsUsed) {
  const std::vector<CorrectionResult> results = {scripted({3, 2}, 2), scripted({1, 2}, 2), scripted({1, 1, 2}, 2),
                                                 scripted({2}, 2), scripted({1, 1, 1, 1, 1}, 2)};
  EXPECT_EQ(round_histogram(results, 4), (std::vector<std::size_t>{2, 1, 0, 0}));
  const std::vector<CorrectionResult> immediate = {scripted({2}, 2)};
  EXPECT_EQ(round_histogram(immediate, 4), (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(Report, FormatsOneDecimal) {
  EXPECT_EQ(format_percent(0.6612), "66.1");
  EXPECT_EQ(format_percent(1.0), "100.0");
  const std::vector<EvalItem> items = {item("1", "天汽", "天气", "天气")};
  const auto records = evaluate(items, TaskKind::Spelling);
  std::ostringstream out;
  write_report(out, records);
  EXPECT_NE(out.str().find("F1 = 100.0  (tp=1 fp=0 fn=0)"), std::string::npos) << out.str();
}

}  // namespace
}  // namespace rair
