#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "binfm/error.hpp"
#include "binfm/ovr.hpp"

using namespace binfm;

TEST(Ovr, HeadCount) {
  EXPECT_EQ(ovr_head_count(2), 1U);
  EXPECT_EQ(ovr_head_count(3), 3U);
  EXPECT_EQ(ovr_head_count(7), 7U);
}

TEST(Ovr, TargetsForBinaryAndMulticlass) {
  const std::vector<std::int32_t> labels = {0, 1, 2, 1};
  EXPECT_EQ(ovr_targets(std::vector<std::int32_t>{0, 1, 1}, 2, 0), (std::vector<std::int8_t>{-1, 1, 1}));
  EXPECT_EQ(ovr_targets(labels, 3, 1), (std::vector<std::int8_t>{-1, 1, -1, 1}));
  EXPECT_EQ(ovr_targets(labels, 3, 2), (std::vector<std::int8_t>{-1, -1, 1, -1}));
}

TEST(Ovr, DecisionRules) {
  EXPECT_EQ(ovr_decide(std::vector<double>{0.1}), 1);
  EXPECT_EQ(ovr_decide(std::vector<double>{-0.1}), 0);
  EXPECT_EQ(ovr_decide(std::vector<double>{0.0}), 0);
  EXPECT_EQ(ovr_decide(std::vector<double>{0.2, 0.9, 0.3}), 1);
  EXPECT_EQ(ovr_decide(std::vector<double>(7, 0.4)), 0);
  EXPECT_EQ(ovr_decide(std::vector<double>{-1.0, 2.0, 2.0}), 1);
}

TEST(Ovr, EveryClassMustBePresent) {
  EXPECT_THROW(require_all_classes(std::vector<std::int32_t>{0, 0, 2}, 3), Error);
  EXPECT_THROW(require_all_classes(std::vector<std::int32_t>{0, 0}, 1), Error);
  EXPECT_NO_THROW(require_all_classes(std::vector<std::int32_t>{1, 0, 2}, 3));
}

TEST(Ovr, ForEachHeadVisitsEveryHeadOnce) {
  for (std::size_t jobs : {1, 2, 5, 16}) {
    std::vector<std::atomic<int>> hits(9);
    for_each_head(9, jobs, [&](std::size_t h) { hits[h]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Ovr, ForEachHeadPropagatesErrors) {
  EXPECT_THROW(for_each_head(4, 2,
                             [](std::size_t h) {
                               if (h == 3) throw Error(ErrorKind::divergence, "boom");
                             }),
               Error);
}
