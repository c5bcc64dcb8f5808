#ifndef BGNER_INDUCTION_HPP
#define BGNER_INDUCTION_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/crf.hpp"
#include "bgner/predicate.hpp"

namespace bgner::induction {

/// One training sentence: its observations and gold labels.
struct Instance {
  pred::ObservationTable obs;
  corpus::LabelSequence labels;
};

struct InductionConfig {
  int rounds = 3;
  int candidates_per_round = 1000;
  int additions_per_round = 200;  // must not exceed candidates_per_round
  int max_arity = 3;
  double gain_floor = 0.0;
  double error_threshold = 0.5;  // gold marginal below this marks an error position
  crf::TrainConfig train;        // retraining settings; sigma is taken from the model
};

struct InducedFeature {
  int round;
  pred::Predicate predicate;
  double gain;
};

struct InductionReport {
  std::vector<InducedFeature> added;
};

/// `round<TAB>predicate<TAB>gain` per added feature.
std::string report_tsv(const InductionReport& report);

/// Conjunction candidates built at error positions (gold-label marginal
/// below the threshold): pairs of co-firing atoms plus one-atom extensions
/// of conjunctions already firing there. At most k, ranked by error-position
/// co-occurrence count, ties lexicographic; predicates already in the model
/// are excluded.
std::vector<pred::Predicate> propose_candidates(std::span<const Instance> data,
                                                const crf::Model& model, int k, int max_arity = 3,
                                                double error_threshold = 0.5);

/// Exact gain of the candidate: the improvement in regularized
/// log-likelihood when the weight of one new (candidate, label) feature is
/// optimized with all other weights held fixed, maximized over the gold
/// labels observed where the candidate fires. The candidate must not be in
/// the model already.
double score_gain(const pred::Predicate& candidate, std::span<const Instance> data,
                  const crf::Model& model);

/// Rounds of propose / score / add / retrain. Added conjunctions are
/// inserted into the observations at their firing positions, so later
/// rounds can extend them; retraining warm-starts from the previous
/// weights with new features at zero.
std::pair<crf::Model, InductionReport> induce(std::span<const Instance> data, crf::Model model,
                                              const InductionConfig& config);

/// Inserts every conjunction predicate known to the model at the positions
/// where all of its atoms' base predicates fire. Idempotent; required
/// before decoding with a model that carries induced conjunctions.
void augment_with_model_conjunctions(pred::ObservationTable& obs, const crf::Model& model);

}  // namespace bgner::induction

#endif
