#ifndef BGNER_CRF_HPP
#define BGNER_CRF_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/predicate.hpp"

namespace bgner::crf {

inline constexpr int kNumLabels = corpus::kNumLabels;

/// Dense feature ids. The 81 transition features (prev, cur) occupy ids
/// 0..80 in row-major order; emission features (predicate, label) are
/// appended in insertion order. Emission features for one predicate share
/// a row so a lattice build touches each predicate once.
class FeatureIndex {
 public:
  static constexpr std::int32_t kTransitionCount = kNumLabels * kNumLabels;

  struct FeatureKey {
    bool transition;
    std::int32_t row;  // emission: row index; transition: unused
    int prev;          // transition only
    int label;
  };

  FeatureIndex();

  /// Inserts if absent. Throws ConfigError when frozen and absent.
  std::int32_t add_emission(const pred::Predicate& p, int label);

  std::int32_t emission_id(const std::string& p, int label) const;
  static constexpr std::int32_t transition_id(int prev, int label) {
    return prev * kNumLabels + label;
  }

  std::int32_t row_of(const std::string& p) const;  // -1 when unknown
  std::int32_t row_count() const { return static_cast<std::int32_t>(rows_.size()); }
  const std::array<std::int32_t, kNumLabels>& row_features(std::int32_t row) const {
    return rows_[static_cast<std::size_t>(row)];
  }
  const std::string& row_name(std::int32_t row) const {
    return row_names_[static_cast<std::size_t>(row)];
  }

  std::size_t size() const { return keys_.size(); }
  const FeatureKey& key(std::int32_t id) const { return keys_[static_cast<std::size_t>(id)]; }

  void freeze() { frozen_ = true; }
  void unfreeze() { frozen_ = false; }
  bool frozen() const { return frozen_; }

 private:
  std::unordered_map<std::string, std::int32_t> pred_rows_;
  std::vector<std::string> row_names_;
  std::vector<std::array<std::int32_t, kNumLabels>> rows_;
  std::vector<FeatureKey> keys_;
  bool frozen_ = false;
};

struct Model {
  FeatureIndex index;
  std::vector<double> weights;  // length == index.size(), all finite
  double l2_sigma = 10.0;       // +infinity disables the prior
  std::string fingerprint;
};

struct Lattice {
  std::vector<std::array<double, kNumLabels>> emission;
  std::array<std::array<double, kNumLabels>, kNumLabels> transition;  // [prev][cur]
  std::size_t length() const { return emission.size(); }
};

/// A sentence reduced to the emission rows firing at each position.
struct EncodedSentence {
  std::vector<std::vector<std::int32_t>> rows;
  std::vector<int> gold;  // empty for unlabeled input
  std::size_t length() const { return rows.size(); }
};

/// Registers the supported emission features of one training sentence:
/// every predicate observed at a position is paired with that position's
/// gold label.
void index_training_features(FeatureIndex& index, const pred::ObservationTable& obs,
                             const corpus::LabelSequence& labels);

EncodedSentence encode(const pred::ObservationTable& obs, const FeatureIndex& index);
EncodedSentence encode(const pred::ObservationTable& obs, const corpus::LabelSequence& labels,
                       const FeatureIndex& index);

Lattice build_lattice(const EncodedSentence& sentence, const Model& model);
Lattice build_lattice(const pred::ObservationTable& obs, const Model& model);

struct Marginals {
  double log_z;
  std::vector<std::array<double, kNumLabels>> node;
  std::vector<std::array<std::array<double, kNumLabels>, kNumLabels>> edge;
};

Marginals forward_backward(const Lattice& lat);

struct Objective {
  double value;
  std::vector<double> gradient;
};

/// L2-regularized conditional log-likelihood and its exact gradient.
Objective log_likelihood_and_gradient(std::span<const EncodedSentence> data, const Model& model);

struct IterationInfo {
  int iteration;
  double objective;        // regularized log-likelihood (maximized)
  double grad_inf_norm;
  const std::vector<double>& weights;
};

struct TrainConfig {
  double l2_sigma = 10.0;
  int max_iterations = 300;
  double grad_tolerance = 1e-4;
  std::function<void(const IterationInfo&)> on_iteration;
};

/// Deterministic L-BFGS fit; weights start at zero (or `initial`).
Model train(std::span<const EncodedSentence> data, FeatureIndex index, const TrainConfig& config);
Model train(std::span<const EncodedSentence> data, FeatureIndex index, const TrainConfig& config,
            std::vector<double> initial);

/// Maximum-score path; ties at each decision go to the lowest label id.
/// With `bio_mask`, transitions into I-X from anything but B-X/I-X and
/// I-X at the first position are excluded from the search.
corpus::LabelSequence viterbi(const Lattice& lat, bool bio_mask = false);

bool bio_transition_allowed(int prev, int label);
bool bio_start_allowed(int label);

void serialize(const Model& model, std::ostream& out);
Model deserialize(std::istream& in);
void save_model_file(const Model& model, const std::string& path);
Model load_model_file(const std::string& path);

}  // namespace bgner::crf

#endif
