#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace binfm {

/// Number of binary heads a one-vs-all reduction needs: one for two classes,
/// otherwise one per class.
[[nodiscard]] constexpr std::size_t ovr_head_count(std::size_t classes) noexcept { return classes == 2 ? 1 : classes; }

/// +-1 targets for `head`. With a single head, class 1 is the positive class.
std::vector<std::int8_t> ovr_targets(std::span<const std::int32_t> labels, std::size_t classes, std::size_t head);

/// Predicted class from head scores: sign rule for one head (a score of 0
/// predicts class 0), argmax otherwise with ties going to the lowest class id.
std::int32_t ovr_decide(std::span<const double> head_scores);

/// Throws Error(data) unless every class id in [0, classes) occurs in labels.
void require_all_classes(std::span<const std::int32_t> labels, std::size_t classes);

/// Runs fn(head) for every head on up to `jobs` threads.
template <typename Fn>
void for_each_head(std::size_t heads, std::size_t jobs, Fn&& fn);

}  // namespace binfm

#include "binfm/detail/ovr_impl.hpp"
