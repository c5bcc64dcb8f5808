#include "bgner/crf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "bgner/error.hpp"

namespace bgner::crf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(const std::array<double, kNumLabels>& v) {
  double mx = v[0];
  for (int y = 1; y < kNumLabels; ++y) mx = std::max(mx, v[y]);
  if (mx == kNegInf) return kNegInf;
  double sum = 0.0;
  for (int y = 0; y < kNumLabels; ++y) sum += std::exp(v[y] - mx);
  return mx + std::log(sum);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text, const char* what) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(std::string("corrupt model file: bad ") + what);
  }
  return out;
}

std::string canonical_label_list() {
  std::string out;
  for (int i = 0; i < kNumLabels; ++i) {
    if (i > 0) out += ' ';
    out += corpus::to_string(corpus::label_from_id(i));
  }
  return out;
}

}  // namespace

FeatureIndex::FeatureIndex() {
  keys_.reserve(kTransitionCount);
  for (int prev = 0; prev < kNumLabels; ++prev) {
    for (int label = 0; label < kNumLabels; ++label) {
      keys_.push_back({true, -1, prev, label});
    }
  }
}

std::int32_t FeatureIndex::add_emission(const pred::Predicate& p, int label) {
  auto it = pred_rows_.find(p);
  std::int32_t row;
  if (it != pred_rows_.end()) {
    row = it->second;
  } else {
    if (frozen_) throw ConfigError("feature index is frozen; cannot add '" + p + "'");
    row = static_cast<std::int32_t>(rows_.size());
    pred_rows_.emplace(p, row);
    row_names_.push_back(p);
    rows_.push_back({-1, -1, -1, -1, -1, -1, -1, -1, -1});
  }
  std::int32_t& id = rows_[static_cast<std::size_t>(row)][static_cast<std::size_t>(label)];
  if (id < 0) {
    if (frozen_) throw ConfigError("feature index is frozen; cannot add '" + p + "'");
    id = static_cast<std::int32_t>(keys_.size());
    keys_.push_back({false, row, -1, label});
  }
  return id;
}

std::int32_t FeatureIndex::emission_id(const std::string& p, int label) const {
  auto it = pred_rows_.find(p);
  if (it == pred_rows_.end()) return -1;
  return rows_[static_cast<std::size_t>(it->second)][static_cast<std::size_t>(label)];
}

std::int32_t FeatureIndex::row_of(const std::string& p) const {
  auto it = pred_rows_.find(p);
  return it == pred_rows_.end() ? -1 : it->second;
}

void index_training_features(FeatureIndex& index, const pred::ObservationTable& obs,
                             const corpus::LabelSequence& labels) {
  if (obs.size() != labels.size()) {
    throw DataError("observation table and label sequence lengths differ");
  }
  for (std::size_t t = 0; t < obs.size(); ++t) {
    const int gold = corpus::label_id(labels[t]);
    for (const pred::Predicate& p : obs[t]) index.add_emission(p, gold);
  }
}

EncodedSentence encode(const pred::ObservationTable& obs, const FeatureIndex& index) {
  EncodedSentence out;
  out.rows.reserve(obs.size());
  for (const pred::PredicateSet& position : obs) {
    std::vector<std::int32_t> rows;
    for (const pred::Predicate& p : position) {
      std::int32_t row = index.row_of(p);
      if (row >= 0) rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end());
    out.rows.push_back(std::move(rows));
  }
  return out;
}

EncodedSentence encode(const pred::ObservationTable& obs, const corpus::LabelSequence& labels,
                       const FeatureIndex& index) {
  if (obs.size() != labels.size()) {
    throw DataError("observation table and label sequence lengths differ");
  }
  EncodedSentence out = encode(obs, index);
  out.gold.reserve(labels.size());
  for (corpus::Label l : labels) out.gold.push_back(corpus::label_id(l));
  return out;
}

Lattice build_lattice(const EncodedSentence& sentence, const Model& model) {
  if (sentence.length() == 0) throw DataError("cannot build a lattice for an empty sentence");
  Lattice lat;
  lat.emission.assign(sentence.length(), {});
  for (std::size_t t = 0; t < sentence.length(); ++t) {
    for (std::int32_t row : sentence.rows[t]) {
      const auto& feats = model.index.row_features(row);
      for (int y = 0; y < kNumLabels; ++y) {
        if (feats[static_cast<std::size_t>(y)] >= 0) {
          lat.emission[t][static_cast<std::size_t>(y)] +=
              model.weights[static_cast<std::size_t>(feats[static_cast<std::size_t>(y)])];
        }
      }
    }
  }
  for (int prev = 0; prev < kNumLabels; ++prev) {
    for (int y = 0; y < kNumLabels; ++y) {
      lat.transition[static_cast<std::size_t>(prev)][static_cast<std::size_t>(y)] =
          model.weights[static_cast<std::size_t>(FeatureIndex::transition_id(prev, y))];
    }
  }
  return lat;
}

Lattice build_lattice(const pred::ObservationTable& obs, const Model& model) {
  return build_lattice(encode(obs, model.index), model);
}

Marginals forward_backward(const Lattice& lat) {
  const std::size_t n = lat.length();
  if (n == 0) throw DataError("cannot run forward-backward on an empty lattice");
  std::vector<std::array<double, kNumLabels>> alpha(n), beta(n);

  alpha[0] = lat.emission[0];
  std::array<double, kNumLabels> scratch;
  for (std::size_t t = 1; t < n; ++t) {
    for (int y = 0; y < kNumLabels; ++y) {
      for (int p = 0; p < kNumLabels; ++p) {
        scratch[static_cast<std::size_t>(p)] =
            alpha[t - 1][static_cast<std::size_t>(p)] +
            lat.transition[static_cast<std::size_t>(p)][static_cast<std::size_t>(y)];
      }
      alpha[t][static_cast<std::size_t>(y)] =
          lat.emission[t][static_cast<std::size_t>(y)] + logsumexp(scratch);
    }
  }

  beta[n - 1].fill(0.0);
  for (std::size_t t = n - 1; t > 0; --t) {
    for (int p = 0; p < kNumLabels; ++p) {
      for (int y = 0; y < kNumLabels; ++y) {
        scratch[static_cast<std::size_t>(y)] =
            lat.transition[static_cast<std::size_t>(p)][static_cast<std::size_t>(y)] +
            lat.emission[t][static_cast<std::size_t>(y)] + beta[t][static_cast<std::size_t>(y)];
      }
      beta[t - 1][static_cast<std::size_t>(p)] = logsumexp(scratch);
    }
  }

  Marginals out;
  out.log_z = logsumexp(alpha[n - 1]);
  out.node.assign(n, {});
  for (std::size_t t = 0; t < n; ++t) {
    for (int y = 0; y < kNumLabels; ++y) {
      out.node[t][static_cast<std::size_t>(y)] =
          std::exp(alpha[t][static_cast<std::size_t>(y)] + beta[t][static_cast<std::size_t>(y)] -
                   out.log_z);
    }
  }
  if (n > 1) {
    out.edge.assign(n - 1, {});
    for (std::size_t t = 0; t + 1 < n; ++t) {
      for (int p = 0; p < kNumLabels; ++p) {
        for (int y = 0; y < kNumLabels; ++y) {
          out.edge[t][static_cast<std::size_t>(p)][static_cast<std::size_t>(y)] = std::exp(
              alpha[t][static_cast<std::size_t>(p)] +
              lat.transition[static_cast<std::size_t>(p)][static_cast<std::size_t>(y)] +
              lat.emission[t + 1][static_cast<std::size_t>(y)] +
              beta[t + 1][static_cast<std::size_t>(y)] - out.log_z);
        }
      }
    }
  }
  return out;
}

namespace {

double gold_path_score(const EncodedSentence& s, const Lattice& lat) {
  double score = 0.0;
  for (std::size_t t = 0; t < s.length(); ++t) {
    score += lat.emission[t][static_cast<std::size_t>(s.gold[t])];
    if (t > 0) {
      score += lat.transition[static_cast<std::size_t>(s.gold[t - 1])]
                             [static_cast<std::size_t>(s.gold[t])];
    }
  }
  return score;
}

}  // namespace

Objective log_likelihood_and_gradient(std::span<const EncodedSentence> data, const Model& model) {
  Objective out{0.0, std::vector<double>(model.weights.size(), 0.0)};

  for (const EncodedSentence& s : data) {
    if (s.gold.size() != s.length()) throw DataError("sentence without gold labels in training data");
    Lattice lat = build_lattice(s, model);
    Marginals m = forward_backward(lat);
    out.value += gold_path_score(s, lat) - m.log_z;

    for (std::size_t t = 0; t < s.length(); ++t) {
      const int gold = s.gold[t];
      for (std::int32_t row : s.rows[t]) {
        const auto& feats = model.index.row_features(row);
        if (feats[static_cast<std::size_t>(gold)] >= 0) {
          out.gradient[static_cast<std::size_t>(feats[static_cast<std::size_t>(gold)])] += 1.0;
        }
        for (int y = 0; y < kNumLabels; ++y) {
          const std::int32_t f = feats[static_cast<std::size_t>(y)];
          if (f >= 0) {
            out.gradient[static_cast<std::size_t>(f)] -= m.node[t][static_cast<std::size_t>(y)];
          }
        }
      }
      if (t > 0) {
        out.gradient[static_cast<std::size_t>(
            FeatureIndex::transition_id(s.gold[t - 1], gold))] += 1.0;
      }
    }
    for (std::size_t t = 0; t + 1 < s.length(); ++t) {
      for (int p = 0; p < kNumLabels; ++p) {
        for (int y = 0; y < kNumLabels; ++y) {
          out.gradient[static_cast<std::size_t>(FeatureIndex::transition_id(p, y))] -=
              m.edge[t][static_cast<std::size_t>(p)][static_cast<std::size_t>(y)];
        }
      }
    }
  }

  if (std::isfinite(model.l2_sigma)) {
    const double inv_var = 1.0 / (model.l2_sigma * model.l2_sigma);
    for (std::size_t f = 0; f < model.weights.size(); ++f) {
      out.value -= model.weights[f] * model.weights[f] * 0.5 * inv_var;
      out.gradient[f] -= model.weights[f] * inv_var;
    }
  }
  return out;
}

namespace {

double inf_norm(const std::vector<double>& v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  return mx;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Minimizes f via L-BFGS (m=10) with a strong-Wolfe bracket+zoom line
// search (c1=1e-4, c2=0.9). Deterministic: no randomization anywhere.
class Lbfgs {
 public:
  using FGrad = std::function<double(const std::vector<double>&, std::vector<double>&)>;

  Lbfgs(FGrad f, std::vector<double> x0, int max_iter, double tol,
        std::function<void(int, double, double, const std::vector<double>&)> cb)
      : f_(std::move(f)), x_(std::move(x0)), max_iter_(max_iter), tol_(tol), cb_(std::move(cb)) {}

  std::vector<double> run() {
    const std::size_t dim = x_.size();
    g_.assign(dim, 0.0);
    fx_ = f_(x_, g_);
    if (cb_) cb_(0, fx_, inf_norm(g_), x_);
    if (inf_norm(g_) <= tol_) return x_;

    std::vector<double> d(dim), x_new(dim), g_new(dim);
    for (int iter = 1; iter <= max_iter_; ++iter) {
      direction(d);
      double dg = dot(d, g_);
      if (!(dg < 0.0)) {  // not a descent direction; restart from steepest descent
        history_.clear();
        for (std::size_t i = 0; i < dim; ++i) d[i] = -g_[i];
        dg = dot(d, g_);
        if (!(dg < 0.0)) break;  // gradient is exactly zero
      }

      const double step0 = history_.empty() ? std::min(1.0, 1.0 / inf_norm(g_)) : 1.0;
      double fx_new = fx_;
      if (!line_search(d, dg, step0, x_new, g_new, fx_new)) break;

      std::vector<double> s(dim), y(dim);
      double sy = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        s[i] = x_new[i] - x_[i];
        y[i] = g_new[i] - g_[i];
        sy += s[i] * y[i];
      }
      if (sy > 1e-12) {
        history_.push_back({std::move(s), std::move(y), sy});
        if (history_.size() > 10) history_.pop_front();
      }
      x_.swap(x_new);
      g_.swap(g_new);
      fx_ = fx_new;
      if (cb_) cb_(iter, fx_, inf_norm(g_), x_);
      if (inf_norm(g_) <= tol_) break;
    }
    return x_;
  }

 private:
  struct Pair {
    std::vector<double> s, y;
    double sy;
  };

  void direction(std::vector<double>& d) {
    const std::size_t dim = x_.size();
    for (std::size_t i = 0; i < dim; ++i) d[i] = -g_[i];
    if (history_.empty()) return;
    std::vector<double> alpha(history_.size());
    for (std::size_t k = history_.size(); k-- > 0;) {
      const Pair& p = history_[k];
      alpha[k] = dot(p.s, d) / p.sy;
      for (std::size_t i = 0; i < dim; ++i) d[i] -= alpha[k] * p.y[i];
    }
    const Pair& last = history_.back();
    const double gamma = last.sy / dot(last.y, last.y);
    for (std::size_t i = 0; i < dim; ++i) d[i] *= gamma;
    for (std::size_t k = 0; k < history_.size(); ++k) {
      const Pair& p = history_[k];
      const double beta = dot(p.y, d) / p.sy;
      for (std::size_t i = 0; i < dim; ++i) d[i] += (alpha[k] - beta) * p.s[i];
    }
  }

  double eval(const std::vector<double>& d, double a, std::vector<double>& x_out,
              std::vector<double>& g_out, double& dphi) {
    for (std::size_t i = 0; i < x_.size(); ++i) x_out[i] = x_[i] + a * d[i];
    const double phi = f_(x_out, g_out);
    dphi = dot(g_out, d);
    return phi;
  }

  bool line_search(const std::vector<double>& d, double dphi0, double step0,
                   std::vector<double>& x_out, std::vector<double>& g_out, double& fx_out) {
    constexpr double c1 = 1e-4, c2 = 0.9;
    const double phi0 = fx_;

    double a_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
    double a = step0;
    double a_lo = 0, a_hi = 0, phi_lo = 0;
    bool bracketed = false;

    for (int i = 0; i < 60 && !bracketed; ++i) {
      double dphi;
      const double phi = eval(d, a, x_out, g_out, dphi);
      if (phi > phi0 + c1 * a * dphi0 || (i > 0 && phi >= phi_prev)) {
        a_lo = a_prev;
        phi_lo = phi_prev;
        a_hi = a;
        bracketed = true;
        break;
      }
      if (std::abs(dphi) <= -c2 * dphi0) {
        fx_out = phi;
        return true;
      }
      if (dphi >= 0.0) {
        a_lo = a;
        phi_lo = phi;
        a_hi = a_prev;
        bracketed = true;
        break;
      }
      a_prev = a;
      phi_prev = phi;
      dphi_prev = dphi;
      a *= 2.0;
      if (a > 1e18) break;
    }
    (void)dphi_prev;
    if (!bracketed) return false;

    for (int i = 0; i < 64; ++i) {
      a = 0.5 * (a_lo + a_hi);
      double dphi;
      const double phi = eval(d, a, x_out, g_out, dphi);
      if (phi > phi0 + c1 * a * dphi0 || phi >= phi_lo) {
        a_hi = a;
      } else {
        if (std::abs(dphi) <= -c2 * dphi0) {
          fx_out = phi;
          return true;
        }
        if (dphi * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
        a_lo = a;
        phi_lo = phi;
      }
      if (std::abs(a_hi - a_lo) <= 1e-16 * std::max(1.0, std::abs(a_lo))) break;
    }
    // Accept the best sufficient-decrease point found even if the curvature
    // condition stayed out of reach (flat objective near the optimum).
    double dphi;
    const double phi = eval(d, a_lo, x_out, g_out, dphi);
    if (a_lo > 0.0 && phi < phi0) {
      fx_out = phi;
      return true;
    }
    return false;
  }

  FGrad f_;
  std::vector<double> x_;
  std::vector<double> g_;
  double fx_ = 0.0;
  int max_iter_;
  double tol_;
  std::function<void(int, double, double, const std::vector<double>&)> cb_;
  std::deque<Pair> history_;
};

}  // namespace

Model train(std::span<const EncodedSentence> data, FeatureIndex index, const TrainConfig& config) {
  return train(data, std::move(index), config, std::vector<double>());
}

Model train(std::span<const EncodedSentence> data, FeatureIndex index, const TrainConfig& config,
            std::vector<double> initial) {
  if (data.empty()) throw DataError("cannot train on an empty corpus");
  if (config.l2_sigma <= 0.0) throw ConfigError("l2_sigma must be positive");
  if (initial.empty()) initial.assign(index.size(), 0.0);
  if (initial.size() != index.size()) throw ConfigError("initial weight vector has wrong length");

  Model model;
  model.index = std::move(index);
  model.index.freeze();
  model.l2_sigma = config.l2_sigma;
  model.weights = std::move(initial);
  if (config.max_iterations <= 0) return model;

  auto f_grad = [&](const std::vector<double>& w, std::vector<double>& g) {
    model.weights = w;
    Objective obj = log_likelihood_and_gradient(data, model);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -obj.gradient[i];
    return -obj.value;
  };
  auto cb = [&](int iter, double fx, double gnorm, const std::vector<double>& w) {
    if (config.on_iteration) config.on_iteration({iter, -fx, gnorm, w});
  };

  Lbfgs opt(f_grad, model.weights, config.max_iterations, config.grad_tolerance, cb);
  model.weights = opt.run();
  return model;
}

bool bio_start_allowed(int label) {
  return !corpus::is_inside(corpus::label_from_id(label));
}

bool bio_transition_allowed(int prev, int label) {
  if (!corpus::is_inside(corpus::label_from_id(label))) return true;
  // I-X follows only B-X or I-X; ids are laid out as B-X, I-X pairs.
  return prev == label || prev == label - 1;
}

corpus::LabelSequence viterbi(const Lattice& lat, bool bio_mask) {
  const std::size_t n = lat.length();
  if (n == 0) throw DataError("cannot decode an empty lattice");
  std::vector<std::array<double, kNumLabels>> score(n);
  std::vector<std::array<int, kNumLabels>> back(n);

  for (int y = 0; y < kNumLabels; ++y) {
    const bool ok = !bio_mask || bio_start_allowed(y);
    score[0][static_cast<std::size_t>(y)] =
        ok ? lat.emission[0][static_cast<std::size_t>(y)] : kNegInf;
    back[0][static_cast<std::size_t>(y)] = -1;
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (int y = 0; y < kNumLabels; ++y) {
      double best = kNegInf;
      int best_prev = -1;
      for (int p = 0; p < kNumLabels; ++p) {
        if (bio_mask && !bio_transition_allowed(p, y)) continue;
        if (score[t - 1][static_cast<std::size_t>(p)] == kNegInf) continue;
        const double cand =
            score[t - 1][static_cast<std::size_t>(p)] +
            lat.transition[static_cast<std::size_t>(p)][static_cast<std::size_t>(y)];
        if (cand > best) {
          best = cand;
          best_prev = p;
        }
      }
      score[t][static_cast<std::size_t>(y)] =
          best == kNegInf ? kNegInf : best + lat.emission[t][static_cast<std::size_t>(y)];
      back[t][static_cast<std::size_t>(y)] = best_prev;
    }
  }

  int best_label = 0;
  double best = score[n - 1][0];
  for (int y = 1; y < kNumLabels; ++y) {
    if (score[n - 1][static_cast<std::size_t>(y)] > best) {
      best = score[n - 1][static_cast<std::size_t>(y)];
      best_label = y;
    }
  }

  corpus::LabelSequence out(n, corpus::Label::Outside);
  int y = best_label;
  for (std::size_t t = n; t-- > 0;) {
    out[t] = corpus::label_from_id(y);
    y = back[t][static_cast<std::size_t>(y)];
  }
  return out;
}

void serialize(const Model& model, std::ostream& out) {
  out << "bgner-model 1\n";
  out << "labels\t" << canonical_label_list() << "\n";
  out << "sigma\t" << (std::isfinite(model.l2_sigma) ? format_double(model.l2_sigma) : "inf")
      << "\n";
  out << "fingerprint\t" << model.fingerprint << "\n";
  out << "features\t" << model.index.size() << "\n";
  for (std::size_t id = 0; id < model.index.size(); ++id) {
    const FeatureIndex::FeatureKey& k = model.index.key(static_cast<std::int32_t>(id));
    if (k.transition) {
      out << "tr\t" << corpus::to_string(corpus::label_from_id(k.prev)) << ' '
          << corpus::to_string(corpus::label_from_id(k.label));
    } else {
      out << "em\t" << corpus::to_string(corpus::label_from_id(k.label)) << ' '
          << model.index.row_name(k.row);
    }
    out << '\t' << format_double(model.weights[id]) << '\n';
  }
  out << "end\n";
}

Model deserialize(std::istream& in) {
  auto next_line = [&](std::string& line) {
    if (!std::getline(in, line)) throw DataError("corrupt model file: truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  std::string line;
  next_line(line);
  if (line != "bgner-model 1") throw DataError("unsupported model version: " + line);
  next_line(line);
  if (line != "labels\t" + canonical_label_list()) {
    throw DataError("corrupt model file: unexpected label set");
  }

  Model model;
  next_line(line);
  if (line.rfind("sigma\t", 0) != 0) throw DataError("corrupt model file: missing sigma");
  std::string sigma_text = line.substr(6);
  model.l2_sigma = sigma_text == "inf" ? std::numeric_limits<double>::infinity()
                                       : parse_double(sigma_text, "sigma");
  if (!(model.l2_sigma > 0.0)) throw DataError("corrupt model file: sigma must be positive");

  next_line(line);
  if (line.rfind("fingerprint\t", 0) != 0) {
    throw DataError("corrupt model file: missing fingerprint");
  }
  model.fingerprint = line.substr(12);

  next_line(line);
  if (line.rfind("features\t", 0) != 0) throw DataError("corrupt model file: missing feature count");
  std::size_t declared = 0;
  {
    const std::string count_text = line.substr(9);
    auto [ptr, ec] =
        std::from_chars(count_text.data(), count_text.data() + count_text.size(), declared);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      throw DataError("corrupt model file: bad feature count");
    }
  }
  if (declared < FeatureIndex::kTransitionCount) {
    throw DataError("corrupt model file: feature count below transition count");
  }

  model.weights.assign(FeatureIndex::kTransitionCount, 0.0);
  std::vector<bool> seen_tr(FeatureIndex::kTransitionCount, false);
  while (true) {
    next_line(line);
    if (line == "end") break;
    std::size_t tab1 = line.find('\t');
    std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) throw DataError("corrupt model file: bad feature line");
    const std::string kind = line.substr(0, tab1);
    const std::string key = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const double weight = parse_double(line.substr(tab2 + 1), "weight");
    if (!std::isfinite(weight)) throw DataError("corrupt model file: non-finite weight");

    std::size_t space = key.find(' ');
    if (space == std::string::npos) throw DataError("corrupt model file: bad feature key");
    if (kind == "tr") {
      const int prev = corpus::label_id(corpus::label_from_string(key.substr(0, space)));
      const int cur = corpus::label_id(corpus::label_from_string(key.substr(space + 1)));
      const std::int32_t id = FeatureIndex::transition_id(prev, cur);
      if (seen_tr[static_cast<std::size_t>(id)]) {
        throw DataError("corrupt model file: duplicate transition feature");
      }
      seen_tr[static_cast<std::size_t>(id)] = true;
      model.weights[static_cast<std::size_t>(id)] = weight;
    } else if (kind == "em") {
      const int label = corpus::label_id(corpus::label_from_string(key.substr(0, space)));
      const std::string name = key.substr(space + 1);
      if (!pred::valid_predicate(name)) {
        throw DataError("corrupt model file: bad predicate '" + name + "'");
      }
      if (model.index.emission_id(name, label) >= 0) {
        throw DataError("corrupt model file: duplicate emission feature");
      }
      model.index.add_emission(name, label);
      model.weights.push_back(weight);
    } else {
      throw DataError("corrupt model file: unknown feature kind '" + kind + "'");
    }
  }
  if (model.index.size() != declared) {
    throw DataError("corrupt model file: feature count mismatch");
  }
  model.index.freeze();
  return model;
}

void save_model_file(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  serialize(model, out);
  if (!out) throw DataError("failed writing model file: " + path);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  try {
    return deserialize(in);
  } catch (DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace bgner::crf
