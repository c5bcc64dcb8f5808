#include "bgner/eval.hpp"

#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "bgner/error.hpp"

namespace bgner::eval {

namespace {

using corpus::EntitySpan;
using corpus::EntityType;

// Display order follows the report layout: ORG, PER, LOC, MISC.
constexpr EntityType kDisplayOrder[] = {EntityType::Org, EntityType::Per, EntityType::Loc,
                                        EntityType::Misc};

std::string_view display_name(EntityType t) {
  switch (t) {
    case EntityType::Per: return "Person";
    case EntityType::Org: return "Organization";
    case EntityType::Loc: return "Location";
    case EntityType::Misc: return "Miscellaneous";
  }
  return "";
}

void check_aligned(std::span<const corpus::LabelSequence> gold,
                   std::span<const corpus::LabelSequence> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences, predictions have " +
                    std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw DataError("sentence " + std::to_string(i + 1) + ": gold has " +
                      std::to_string(gold[i].size()) + " tokens, predictions have " +
                      std::to_string(pred[i].size()));
    }
  }
}

bool overlaps(const EntitySpan& a, const EntitySpan& b) {
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

}  // namespace

double Scores::precision() const {
  return tp + fp == 0 ? 0.0 : 100.0 * double(tp) / double(tp + fp);
}

double Scores::recall() const {
  return tp + fn == 0 ? 0.0 : 100.0 * double(tp) / double(tp + fn);
}

double Scores::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Scores EvalReport::overall() const {
  Scores sum;
  for (const Scores& s : per_type) {
    sum.tp += s.tp;
    sum.fp += s.fp;
    sum.fn += s.fn;
  }
  return sum;
}

EvalReport evaluate(std::span<const corpus::LabelSequence> gold,
                    std::span<const corpus::LabelSequence> pred) {
  check_aligned(gold, pred);
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto gold_spans = corpus::spans_from_bio(gold[i]);
    const auto pred_spans = corpus::spans_from_bio(pred[i]);
    const std::set<EntitySpan> gold_set(gold_spans.begin(), gold_spans.end());
    const std::set<EntitySpan> pred_set(pred_spans.begin(), pred_spans.end());
    for (const EntitySpan& p : pred_spans) {
      Scores& s = report.of(p.type);
      if (gold_set.contains(p)) {
        ++s.tp;
      } else {
        ++s.fp;
      }
    }
    for (const EntitySpan& g : gold_spans) {
      if (!pred_set.contains(g)) ++report.of(g.type).fn;
    }
  }
  return report;
}

EvalReport evaluate_relaxed(std::span<const corpus::LabelSequence> gold,
                            std::span<const corpus::LabelSequence> pred) {
  check_aligned(gold, pred);
  EvalReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto gold_spans = corpus::spans_from_bio(gold[i]);
    const auto pred_spans = corpus::spans_from_bio(pred[i]);
    std::vector<bool> credited(gold_spans.size(), false);
    for (const EntitySpan& p : pred_spans) {
      Scores& s = report.of(p.type);
      bool matched = false;
      for (std::size_t j = 0; j < gold_spans.size(); ++j) {
        if (credited[j] || gold_spans[j].type != p.type || !overlaps(gold_spans[j], p)) continue;
        credited[j] = true;
        matched = true;
        break;
      }
      if (matched) {
        ++s.tp;
      } else {
        ++s.fp;
      }
    }
    for (std::size_t j = 0; j < gold_spans.size(); ++j) {
      if (!credited[j]) ++report.of(gold_spans[j].type).fn;
    }
  }
  return report;
}

std::string format_report(const EvalReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %10s %10s %12s\n", "NE type", "Precision", "Recall",
                "F1-measure");
  out += line;
  auto row = [&](std::string_view name, const Scores& s) {
    std::snprintf(line, sizeof line, "%-14.*s %10.2f %10.2f %12.2f\n", int(name.size()),
                  name.data(), s.precision(), s.recall(), s.f1());
    out += line;
  };
  for (EntityType t : kDisplayOrder) row(display_name(t), report.of(t));
  row("OVERALL", report.overall());
  return out;
}

std::string format_report_tsv(const EvalReport& report) {
  std::string out = "type\ttp\tfp\tfn\tprecision\trecall\tf1\n";
  char line[128];
  auto row = [&](std::string_view name, const Scores& s) {
    std::snprintf(line, sizeof line, "%.*s\t%lld\t%lld\t%lld\t%.2f\t%.2f\t%.2f\n", int(name.size()),
                  name.data(), static_cast<long long>(s.tp), static_cast<long long>(s.fp),
                  static_cast<long long>(s.fn), s.precision(), s.recall(), s.f1());
    out += line;
  };
  for (EntityType t : kDisplayOrder) row(corpus::to_string(t), report.of(t));
  row("OVERALL", report.overall());
  return out;
}

}  // namespace bgner::eval
