// Builds a mixed minibatch plan and evaluates the multi-task loss on random
// segment scores for one real and one virtual sample.
#include <cstdio>

#include "phav/cooltsn.hpp"

using namespace phav::cooltsn;

int main() {
  phav::RngStream rng(2017, "sample-loss");

  std::vector<std::string> real_ids, virtual_ids;
  for (int i = 0; i < 500; ++i) real_ids.push_back("ucf_" + std::to_string(i));
  for (int i = 0; i < 40; ++i) virtual_ids.push_back("v" + std::to_string(i));
  const auto plan = build_minibatch(real_ids, virtual_ids, rng);
  std::printf("blocks=%zu real=%zu virtual=%zu w_real=%.4f w_virtual=%.4f\n", plan.blocks.size(),
              plan.count(Source::real), plan.count(Source::virtual_), plan.w_real, plan.w_virtual);

  auto random_scores = [&](int k, int c) {
    MatrixXd m(k, c);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(-3.0, 3.0);
    return m;
  };
  const SegmentScores scores{random_scores(3, 101), random_scores(3, 35)};
  const HeadVectors g = segmental_consensus(scores);

  for (const MultiTaskLabel y : {MultiTaskLabel{Source::real, 7}, MultiTaskLabel{Source::virtual_, 12}}) {
    const double l = multitask_loss(g, y, plan.weights());
    const auto check = check_gradient(g, y, plan.weights());
    std::printf("%-7s class %2zu: loss=%.6f  max fd relative error=%.2e\n", to_string(y.source), y.cls, l,
                check.max_relative_error);
  }
  return 0;
}
