#include "binfm/ovr.hpp"

#include <string>

#include "binfm/error.hpp"

namespace binfm {

std::vector<std::int8_t> ovr_targets(std::span<const std::int32_t> labels, std::size_t classes, std::size_t head) {
  const std::int32_t positive = classes == 2 ? 1 : static_cast<std::int32_t>(head);
  std::vector<std::int8_t> y;
  y.reserve(labels.size());
  for (std::int32_t l : labels) y.push_back(l == positive ? 1 : -1);
  return y;
}

std::int32_t ovr_decide(std::span<const double> head_scores) {
  if (head_scores.size() == 1) return head_scores[0] > 0.0 ? 1 : 0;
  std::size_t best = 0;
  for (std::size_t k = 1; k < head_scores.size(); ++k)
    if (head_scores[k] > head_scores[best]) best = k;
  return static_cast<std::int32_t>(best);
}

void require_all_classes(std::span<const std::int32_t> labels, std::size_t classes) {
  if (classes < 2) throw Error(ErrorKind::data, "training needs at least two classes");
  std::vector<bool> seen(classes, false);
  for (std::int32_t l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= classes) throw Error(ErrorKind::data, "label out of range");
    seen[static_cast<std::size_t>(l)] = true;
  }
  for (std::size_t k = 0; k < classes; ++k)
    if (!seen[k]) throw Error(ErrorKind::data, "class " + std::to_string(k) + " does not occur in the training data");
}

}  // namespace binfm
