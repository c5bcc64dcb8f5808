#include "bgner/induction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "bgner/error.hpp"

namespace bgner::induction {

namespace {

using crf::EncodedSentence;
using crf::Lattice;
using crf::Model;
using pred::Predicate;

std::vector<Predicate> base_predicates(const Predicate& p) {
  if (!pred::is_conjunction(p)) return {p};
  std::vector<Predicate> out;
  for (const std::string& atom : pred::conjunction_atoms(p)) {
    out.push_back(pred::predicate_from_atom(atom));
  }
  return out;
}

bool fires_at(const pred::PredicateSet& position, std::span<const Predicate> bases) {
  for (const Predicate& b : bases) {
    if (!position.contains(b)) return false;
  }
  return true;
}

void validate(const InductionConfig& c) {
  if (c.rounds < 0) throw ConfigError("induction rounds must be non-negative");
  if (c.candidates_per_round <= 0) throw ConfigError("candidates_per_round must be positive");
  if (c.additions_per_round <= 0) throw ConfigError("additions_per_round must be positive");
  if (c.additions_per_round > c.candidates_per_round) {
    throw ConfigError("additions_per_round must not exceed candidates_per_round");
  }
  if (c.max_arity < 2) throw ConfigError("max_arity must be at least 2");
  if (!(c.gain_floor >= 0.0)) throw ConfigError("gain_floor must be non-negative");
  if (!(c.error_threshold >= 0.0) || !(c.error_threshold <= 1.0)) {
    throw ConfigError("error_threshold must lie in [0, 1]");
  }
}

// Sentence state needed to evaluate one candidate's gain: the unmodified
// lattice, its log partition, and the candidate's firing positions.
struct AffectedSentence {
  Lattice base;
  double base_log_z;
  std::vector<std::size_t> firing;
  std::vector<int> gold;
};

struct CandidateContext {
  std::vector<AffectedSentence> sentences;
  std::set<int> supported;  // gold labels seen at firing positions
};

CandidateContext gather(const Predicate& candidate, std::span<const Instance> data,
                        const Model& model) {
  CandidateContext ctx;
  const std::vector<Predicate> bases = base_predicates(candidate);
  for (const Instance& inst : data) {
    std::vector<std::size_t> firing;
    for (std::size_t t = 0; t < inst.obs.size(); ++t) {
      if (fires_at(inst.obs[t], bases)) firing.push_back(t);
    }
    if (firing.empty()) continue;
    AffectedSentence s;
    s.base = crf::build_lattice(crf::encode(inst.obs, inst.labels, model.index), model);
    s.base_log_z = crf::forward_backward(s.base).log_z;
    s.firing = std::move(firing);
    for (corpus::Label l : inst.labels) s.gold.push_back(corpus::label_id(l));
    for (std::size_t t : s.firing) ctx.supported.insert(s.gold[t]);
    ctx.sentences.push_back(std::move(s));
  }
  return ctx;
}

// Log partition and expected firing count of the candidate feature
// (label y, weight v) with all other weights fixed.
std::pair<double, double> log_z_and_expectation(const AffectedSentence& s, int y, double v) {
  Lattice lat = s.base;
  for (std::size_t t : s.firing) lat.emission[t][static_cast<std::size_t>(y)] += v;
  crf::Marginals m = crf::forward_backward(lat);
  double expect = 0.0;
  for (std::size_t t : s.firing) expect += m.node[t][static_cast<std::size_t>(y)];
  return {m.log_z, expect};
}

double gain_for_label(const CandidateContext& ctx, int y, double sigma) {
  double emp = 0.0;
  for (const AffectedSentence& s : ctx.sentences) {
    for (std::size_t t : s.firing) {
      if (s.gold[t] == y) emp += 1.0;
    }
  }
  const bool prior = std::isfinite(sigma);
  const double inv_var = prior ? 1.0 / (sigma * sigma) : 0.0;

  // The objective is concave in v, so its derivative is decreasing;
  // bracket the root of the derivative, then bisect.
  auto derivative = [&](double v) {
    double expect = 0.0;
    for (const AffectedSentence& s : ctx.sentences) expect += log_z_and_expectation(s, y, v).second;
    return emp - expect - v * inv_var;
  };

  constexpr double kCap = 1e3;
  const double d0 = derivative(0.0);
  double lo = 0.0, hi = 0.0;
  if (d0 > 0.0) {
    hi = 1.0;
    while (derivative(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi >= kCap) {
        hi = kCap;
        if (derivative(hi) > 0.0) lo = hi;  // optimum beyond the cap; take the cap
        break;
      }
    }
  } else if (d0 < 0.0) {
    lo = -1.0;
    while (derivative(lo) < 0.0) {
      hi = lo;
      lo *= 2.0;
      if (lo <= -kCap) {
        lo = -kCap;
        if (derivative(lo) < 0.0) hi = lo;
        break;
      }
    }
  }
  for (int i = 0; i < 100 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (derivative(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);

  double gain = -v * v * 0.5 * inv_var;
  for (const AffectedSentence& s : ctx.sentences) {
    double emp_s = 0.0;
    for (std::size_t t : s.firing) {
      if (s.gold[t] == y) emp_s += 1.0;
    }
    gain += v * emp_s - (log_z_and_expectation(s, y, v).first - s.base_log_z);
  }
  return std::max(gain, 0.0);
}

}  // namespace

std::vector<Predicate> propose_candidates(std::span<const Instance> data, const Model& model,
                                          int k, int max_arity, double error_threshold) {
  if (k <= 0) return {};
  std::map<Predicate, std::int64_t> counts;
  for (const Instance& inst : data) {
    const EncodedSentence enc = crf::encode(inst.obs, inst.labels, model.index);
    const crf::Marginals m = crf::forward_backward(crf::build_lattice(enc, model));
    for (std::size_t t = 0; t < inst.obs.size(); ++t) {
      const int gold = corpus::label_id(inst.labels[t]);
      if (m.node[t][static_cast<std::size_t>(gold)] >= error_threshold) continue;

      std::vector<std::string> atoms;
      std::vector<Predicate> conjs;
      for (const Predicate& p : inst.obs[t]) {
        if (pred::is_conjunction(p)) {
          conjs.push_back(p);
        } else {
          atoms.push_back(pred::atom_from_predicate(p));
        }
      }

      std::set<Predicate> here;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
          here.insert(pred::make_conjunction({atoms[i], atoms[j]}));
        }
      }
      for (const Predicate& c : conjs) {
        const std::vector<std::string> catoms = pred::conjunction_atoms(c);
        if (static_cast<int>(catoms.size()) + 1 > max_arity) continue;
        for (const std::string& a : atoms) {
          if (std::find(catoms.begin(), catoms.end(), a) != catoms.end()) continue;
          here.insert(pred::extend_conjunction(c, a));
        }
      }
      for (const Predicate& c : here) {
        if (model.index.row_of(c) < 0) ++counts[c];
      }
    }
  }

  std::vector<std::pair<Predicate, std::int64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > static_cast<std::size_t>(k)) ranked.resize(static_cast<std::size_t>(k));
  std::vector<Predicate> out;
  out.reserve(ranked.size());
  for (auto& [p, count] : ranked) out.push_back(std::move(p));
  return out;
}

double score_gain(const Predicate& candidate, std::span<const Instance> data, const Model& model) {
  if (model.index.row_of(candidate) >= 0) {
    throw ConfigError("candidate is already a model feature: " + candidate);
  }
  const CandidateContext ctx = gather(candidate, data, model);
  if (ctx.sentences.empty()) return 0.0;
  double best = 0.0;
  for (int y : ctx.supported) best = std::max(best, gain_for_label(ctx, y, model.l2_sigma));
  return best;
}

std::pair<Model, InductionReport> induce(std::span<const Instance> data, Model model,
                                         const InductionConfig& config) {
  validate(config);
  InductionReport report;
  std::vector<Instance> work(data.begin(), data.end());

  crf::TrainConfig tc = config.train;
  tc.l2_sigma = model.l2_sigma;

  for (int round = 1; round <= config.rounds; ++round) {
    const std::vector<Predicate> candidates = propose_candidates(
        work, model, config.candidates_per_round, config.max_arity, config.error_threshold);
    if (candidates.empty()) break;

    struct Scored {
      double gain;
      Predicate predicate;
    };
    std::vector<Scored> scored;
    for (const Predicate& c : candidates) {
      const double g = score_gain(c, work, model);
      if (g > config.gain_floor) scored.push_back({g, c});
    }
    if (scored.empty()) break;
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.gain != b.gain) return a.gain > b.gain;
      return a.predicate < b.predicate;
    });
    if (scored.size() > static_cast<std::size_t>(config.additions_per_round)) {
      scored.resize(static_cast<std::size_t>(config.additions_per_round));
    }

    crf::FeatureIndex index = model.index;
    index.unfreeze();
    std::vector<double> weights = model.weights;
    for (const Scored& s : scored) {
      const std::vector<Predicate> bases = base_predicates(s.predicate);
      for (Instance& inst : work) {
        for (std::size_t t = 0; t < inst.obs.size(); ++t) {
          if (!fires_at(inst.obs[t], bases)) continue;
          inst.obs[t].insert(s.predicate);
          index.add_emission(s.predicate, corpus::label_id(inst.labels[t]));
        }
      }
      report.added.push_back({round, s.predicate, s.gain});
    }
    weights.resize(index.size(), 0.0);

    std::vector<EncodedSentence> enc;
    enc.reserve(work.size());
    for (const Instance& inst : work) enc.push_back(crf::encode(inst.obs, inst.labels, index));
    model = crf::train(enc, std::move(index), tc, std::move(weights));
  }
  return {std::move(model), std::move(report)};
}

void augment_with_model_conjunctions(pred::ObservationTable& obs, const crf::Model& model) {
  for (std::int32_t row = 0; row < model.index.row_count(); ++row) {
    const Predicate& name = model.index.row_name(row);
    if (!pred::is_conjunction(name)) continue;
    const std::vector<Predicate> bases = base_predicates(name);
    for (pred::PredicateSet& position : obs) {
      if (fires_at(position, bases)) position.insert(name);
    }
  }
}

std::string report_tsv(const InductionReport& report) {
  std::string out;
  char gain[48];
  for (const InducedFeature& f : report.added) {
    std::snprintf(gain, sizeof gain, "%.6f", f.gain);
    out += std::to_string(f.round);
    out += '\t';
    out += f.predicate;
    out += '\t';
    out += gain;
    out += '\n';
  }
  return out;
}

}  // namespace bgner::induction
