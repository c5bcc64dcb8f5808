#ifndef BGNER_EVAL_HPP
#define BGNER_EVAL_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "bgner/corpus.hpp"

namespace bgner::eval {

struct Scores {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  double precision() const;  // percent; 0 when tp+fp == 0
  double recall() const;     // percent; 0 when tp+fn == 0
  double f1() const;         // harmonic mean; 0 when both are 0
};

struct EvalReport {
  std::array<Scores, corpus::kNumEntityTypes> per_type;

  Scores& of(corpus::EntityType t) { return per_type[static_cast<std::size_t>(t)]; }
  const Scores& of(corpus::EntityType t) const { return per_type[static_cast<std::size_t>(t)]; }

  /// Micro-average: counts summed over the four types.
  Scores overall() const;
};

/// Entity-level scoring with exact-boundary matching: a predicted span is a
/// true positive only when a gold span with the same type, start and end
/// exists in the same sentence.
EvalReport evaluate(std::span<const corpus::LabelSequence> gold,
                    std::span<const corpus::LabelSequence> pred);

/// Overlap scoring: a predicted span is credited when it shares at least one
/// token with a same-type gold span; each gold span is creditable once,
/// assigned greedily in predicted-span order.
EvalReport evaluate_relaxed(std::span<const corpus::LabelSequence> gold,
                            std::span<const corpus::LabelSequence> pred);

/// Human-readable table: one row per entity type plus OVERALL.
std::string format_report(const EvalReport& report);

/// Machine-readable: type, tp, fp, fn, precision, recall, f1 per line.
std::string format_report_tsv(const EvalReport& report);

}  // namespace bgner::eval

#endif
