#include "bgner/crf.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "bgner/error.hpp"
#include "doctest.h"

using namespace bgner;
using namespace bgner::crf;
using corpus::Label;

namespace {

// Path score accumulated in the same order as the Viterbi recursion so the
// exhaustive maximum is bitwise comparable.
double score_path(const Lattice& lat, const std::vector<int>& path) {
  double s = lat.emission[0][static_cast<std::size_t>(path[0])];
  for (std::size_t t = 1; t < path.size(); ++t) {
    s += lat.transition[static_cast<std::size_t>(path[t - 1])][static_cast<std::size_t>(path[t])];
    s += lat.emission[t][static_cast<std::size_t>(path[t])];
  }
  return s;
}

void enumerate_paths(const Lattice& lat, std::vector<int>& path,
                     const std::function<void(const std::vector<int>&)>& visit) {
  if (path.size() == lat.length()) {
    visit(path);
    return;
  }
  for (int y = 0; y < kNumLabels; ++y) {
    path.push_back(y);
    enumerate_paths(lat, path, visit);
    path.pop_back();
  }
}

double oracle_log_z(const Lattice& lat) {
  std::vector<double> scores;
  std::vector<int> path;
  enumerate_paths(lat, path, [&](const std::vector<int>& p) { scores.push_back(score_path(lat, p)); });
  double mx = scores[0];
  for (double s : scores) mx = std::max(mx, s);
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - mx);
  return mx + std::log(sum);
}

double oracle_max_path(const Lattice& lat) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> path;
  enumerate_paths(lat, path,
                  [&](const std::vector<int>& p) { best = std::max(best, score_path(lat, p)); });
  return best;
}

Lattice random_lattice(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Lattice lat;
  lat.emission.assign(n, {});
  for (auto& row : lat.emission) {
    for (double& v : row) v = u(rng);
  }
  for (auto& row : lat.transition) {
    for (double& v : row) v = u(rng);
  }
  return lat;
}

struct ToyProblem {
  FeatureIndex index;
  std::vector<EncodedSentence> data;
};

// Three word types with unambiguous labels; enough to drive every label
// family the optimizer must separate.
ToyProblem toy_problem() {
  std::vector<std::pair<std::vector<const char*>, std::vector<Label>>> raw = {
      {{"W=ivan", "W=petrov", "W=runs"}, {Label::BPer, Label::IPer, Label::Outside}},
      {{"W=sofia", "W=runs"}, {Label::BLoc, Label::Outside}},
      {{"W=ivan", "W=runs", "W=sofia"}, {Label::BPer, Label::Outside, Label::BLoc}},
      {{"W=runs", "W=ivan", "W=petrov"}, {Label::Outside, Label::BPer, Label::IPer}},
  };
  ToyProblem out;
  std::vector<std::pair<pred::ObservationTable, corpus::LabelSequence>> prepared;
  for (auto& [words, labels] : raw) {
    pred::ObservationTable obs;
    for (const char* w : words) obs.push_back({pred::Predicate(w)});
    corpus::LabelSequence ls(labels.begin(), labels.end());
    index_training_features(out.index, obs, ls);
    prepared.emplace_back(std::move(obs), std::move(ls));
  }
  for (auto& [obs, ls] : prepared) out.data.push_back(encode(obs, ls, out.index));
  return out;
}

std::string serialize_to_string(const Model& m) {
  std::ostringstream ss;
  serialize(m, ss);
  return ss.str();
}

Model deserialize_from_string(const std::string& text) {
  std::istringstream ss(text);
  return deserialize(ss);
}

}  // namespace

TEST_SUITE_BEGIN("crf");

TEST_CASE("feature index preallocates all transitions") {
  FeatureIndex idx;
  CHECK(idx.size() == 81);
  CHECK(FeatureIndex::transition_id(0, 0) == 0);
  CHECK(FeatureIndex::transition_id(8, 8) == 80);
  CHECK(FeatureIndex::transition_id(2, 5) == 23);
  for (int p = 0; p < kNumLabels; ++p) {
    for (int y = 0; y < kNumLabels; ++y) {
      const auto& k = idx.key(FeatureIndex::transition_id(p, y));
      CHECK(k.transition);
      CHECK(k.prev == p);
      CHECK(k.label == y);
    }
  }
}

TEST_CASE("emission features share a row per predicate") {
  FeatureIndex idx;
  auto a = idx.add_emission("W=sofia", 4);
  auto b = idx.add_emission("W=sofia", 8);
  auto c = idx.add_emission("W=ivan", 0);
  CHECK(a == 81);
  CHECK(b == 82);
  CHECK(c == 83);
  CHECK(idx.add_emission("W=sofia", 4) == a);
  CHECK(idx.emission_id("W=sofia", 4) == a);
  CHECK(idx.emission_id("W=sofia", 0) == -1);
  CHECK(idx.emission_id("W=none", 0) == -1);
  CHECK(idx.row_count() == 2);
  CHECK(idx.row_of("W=sofia") == 0);
  CHECK(idx.row_of("W=ivan") == 1);
  CHECK(idx.row_of("W=none") == -1);
  const auto& row = idx.row_features(0);
  CHECK(row[4] == a);
  CHECK(row[8] == b);
  CHECK(row[0] == -1);
  CHECK(idx.row_name(1) == "W=ivan");
  const auto& k = idx.key(b);
  CHECK_FALSE(k.transition);
  CHECK(k.row == 0);
  CHECK(k.label == 8);
}

TEST_CASE("frozen index rejects new features but answers queries") {
  FeatureIndex idx;
  idx.add_emission("W=a", 0);
  idx.freeze();
  CHECK(idx.frozen());
  CHECK(idx.add_emission("W=a", 0) == 81);
  CHECK_THROWS_AS(idx.add_emission("W=a", 1), ConfigError);
  CHECK_THROWS_AS(idx.add_emission("W=b", 0), ConfigError);
  idx.unfreeze();
  CHECK(idx.add_emission("W=b", 0) == 82);
}

TEST_CASE("encode keeps known predicates only, rows sorted") {
  FeatureIndex idx;
  idx.add_emission("W=b", 0);
  idx.add_emission("W=a", 1);
  pred::ObservationTable obs = {{"W=a", "W=b", "W=unknown"}, {"W=unknown"}};
  EncodedSentence enc = encode(obs, idx);
  REQUIRE(enc.length() == 2);
  CHECK(enc.rows[0] == std::vector<std::int32_t>{0, 1});
  CHECK(enc.rows[1].empty());
  CHECK(enc.gold.empty());

  corpus::LabelSequence labels = {Label::BPer, Label::Outside};
  EncodedSentence enc2 = encode(obs, labels, idx);
  CHECK(enc2.gold == std::vector<int>{0, 8});
  corpus::LabelSequence bad = {Label::BPer};
  CHECK_THROWS_AS(encode(obs, bad, idx), DataError);
  CHECK_THROWS_AS(index_training_features(idx, obs, bad), DataError);
}

TEST_CASE("lattice from a single hand-weighted feature") {
  FeatureIndex idx;
  auto f = idx.add_emission("W=Bulgaria", corpus::label_id(Label::BOrg));
  Model m;
  m.index = std::move(idx);
  m.weights.assign(m.index.size(), 0.0);
  m.weights[static_cast<std::size_t>(f)] = 1.5;

  pred::ObservationTable obs = {{"W=na"}, {"W=Bulgaria", "ORTH=InitCap"}};
  Lattice lat = build_lattice(obs, m);
  REQUIRE(lat.length() == 2);
  for (int y = 0; y < kNumLabels; ++y) {
    CHECK(lat.emission[0][static_cast<std::size_t>(y)] == 0.0);
    double want = y == corpus::label_id(Label::BOrg) ? 1.5 : 0.0;
    CHECK(lat.emission[1][static_cast<std::size_t>(y)] == want);
  }
  CHECK(viterbi(lat)[1] == Label::BOrg);
  CHECK_THROWS_AS(build_lattice(pred::ObservationTable{}, m), DataError);
}

TEST_CASE("zero-weight lattice has log_z of n log 9 and decodes to lowest label") {
  FeatureIndex idx;
  Model m;
  m.index = std::move(idx);
  m.weights.assign(m.index.size(), 0.0);
  for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(5)}) {
    pred::ObservationTable obs(n, pred::PredicateSet{"W=x"});
    Lattice lat = build_lattice(obs, m);
    Marginals mg = forward_backward(lat);
    CHECK(mg.log_z == doctest::Approx(double(n) * std::log(9.0)).epsilon(1e-12));
    corpus::LabelSequence path = viterbi(lat);
    for (Label l : path) CHECK(l == Label::BPer);
  }
}

TEST_CASE("log_z and viterbi agree with exhaustive enumeration") {
  std::mt19937 rng(20260815);
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(rng() % 4);
    Lattice lat = random_lattice(rng, n);
    Marginals mg = forward_backward(lat);
    CHECK(mg.log_z == doctest::Approx(oracle_log_z(lat)).epsilon(1e-10));

    corpus::LabelSequence path = viterbi(lat);
    std::vector<int> ids;
    for (Label l : path) ids.push_back(corpus::label_id(l));
    CHECK(score_path(lat, ids) == oracle_max_path(lat));

    CHECK(mg.log_z > score_path(lat, ids));
  }
}

TEST_CASE("marginals are normalized and consistent") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(rng() % 5);
    Lattice lat = random_lattice(rng, n);
    Marginals mg = forward_backward(lat);
    REQUIRE(mg.node.size() == n);
    REQUIRE(mg.edge.size() == n - 1);
    for (std::size_t t = 0; t < n; ++t) {
      double sum = 0.0;
      for (double p : mg.node[t]) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (std::size_t t = 0; t + 1 < n; ++t) {
      double sum = 0.0;
      for (int p = 0; p < kNumLabels; ++p) {
        double row = 0.0, col = 0.0;
        for (int y = 0; y < kNumLabels; ++y) {
          sum += mg.edge[t][static_cast<std::size_t>(p)][static_cast<std::size_t>(y)];
          row += mg.edge[t][static_cast<std::size_t>(p)][static_cast<std::size_t>(y)];
          col += mg.edge[t][static_cast<std::size_t>(y)][static_cast<std::size_t>(p)];
        }
        CHECK(row == doctest::Approx(mg.node[t][static_cast<std::size_t>(p)]).epsilon(1e-9));
        CHECK(col == doctest::Approx(mg.node[t + 1][static_cast<std::size_t>(p)]).epsilon(1e-9));
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("constant emission shift moves log_z only") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(rng() % 3);
    Lattice lat = random_lattice(rng, n);
    Marginals before = forward_backward(lat);
    corpus::LabelSequence path_before = viterbi(lat);

    const double c = 0.75;
    std::size_t t0 = static_cast<std::size_t>(rng()) % n;
    for (double& v : lat.emission[t0]) v += c;
    Marginals after = forward_backward(lat);

    CHECK(after.log_z == doctest::Approx(before.log_z + c).epsilon(1e-10));
    CHECK(viterbi(lat) == path_before);
    for (std::size_t t = 0; t < n; ++t) {
      for (int y = 0; y < kNumLabels; ++y) {
        CHECK(after.node[t][static_cast<std::size_t>(y)] ==
              doctest::Approx(before.node[t][static_cast<std::size_t>(y)]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("objective at zero weights is minus n log 9 per sentence") {
  ToyProblem toy = toy_problem();
  Model m;
  m.index = toy.index;
  m.weights.assign(m.index.size(), 0.0);
  m.l2_sigma = std::numeric_limits<double>::infinity();
  Objective obj = log_likelihood_and_gradient(toy.data, m);
  std::size_t tokens = 0;
  for (const auto& s : toy.data) tokens += s.length();
  CHECK(obj.value == doctest::Approx(-double(tokens) * std::log(9.0)).epsilon(1e-12));
}

TEST_CASE("prior subtracts squared norm and shifts gradient") {
  ToyProblem toy = toy_problem();
  Model m;
  m.index = toy.index;
  m.weights.assign(m.index.size(), 0.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& w : m.weights) w = u(rng);

  m.l2_sigma = std::numeric_limits<double>::infinity();
  Objective plain = log_likelihood_and_gradient(toy.data, m);
  m.l2_sigma = 2.0;
  Objective reg = log_likelihood_and_gradient(toy.data, m);

  double sq = 0.0;
  for (double w : m.weights) sq += w * w;
  CHECK(reg.value == doctest::Approx(plain.value - sq / (2.0 * 4.0)).epsilon(1e-12));
  for (std::size_t f = 0; f < m.weights.size(); ++f) {
    CHECK(reg.gradient[f] == doctest::Approx(plain.gradient[f] - m.weights[f] / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937 rng(20269);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double sigmas[] = {10.0, 2.0, std::numeric_limits<double>::infinity()};

  for (int trial = 0; trial < 10; ++trial) {
    FeatureIndex idx;
    const int num_preds = 3 + static_cast<int>(rng() % 4);
    std::vector<std::string> preds;
    for (int i = 0; i < num_preds; ++i) preds.push_back("W=p" + std::to_string(i));

    std::vector<EncodedSentence> data;
    std::vector<std::pair<pred::ObservationTable, corpus::LabelSequence>> raw;
    const int num_sentences = 1 + static_cast<int>(rng() % 2);
    for (int s = 0; s < num_sentences; ++s) {
      std::size_t n = 1 + static_cast<std::size_t>(rng() % 4);
      pred::ObservationTable obs(n);
      corpus::LabelSequence labels;
      for (std::size_t t = 0; t < n; ++t) {
        for (const std::string& p : preds) {
          if (rng() % 2) obs[t].insert(p);
        }
        obs[t].insert("W=always");
        labels.push_back(corpus::label_from_id(static_cast<int>(rng() % kNumLabels)));
      }
      index_training_features(idx, obs, labels);
      raw.emplace_back(std::move(obs), std::move(labels));
    }
    // A few features the data never pairs with its gold label, so the
    // empirical count is zero and only the expectation moves them.
    for (const std::string& p : preds) idx.add_emission(p, static_cast<int>(rng() % kNumLabels));
    for (auto& [obs, labels] : raw) data.push_back(encode(obs, labels, idx));

    Model m;
    m.index = std::move(idx);
    m.weights.assign(m.index.size(), 0.0);
    for (double& w : m.weights) w = u(rng);
    m.l2_sigma = sigmas[trial % 3];

    Objective obj = log_likelihood_and_gradient(data, m);
    const double h = 1e-5;
    for (std::size_t f = 0; f < m.weights.size(); ++f) {
      const double keep = m.weights[f];
      m.weights[f] = keep + h;
      const double up = log_likelihood_and_gradient(data, m).value;
      m.weights[f] = keep - h;
      const double down = log_likelihood_and_gradient(data, m).value;
      m.weights[f] = keep;
      const double fd = (up - down) / (2.0 * h);
      const double a = obj.gradient[f];
      CHECK(std::abs(a - fd) <= 1e-4 * std::max({1.0, std::abs(a), std::abs(fd)}));
    }
  }
}

TEST_CASE("training separates a toy problem") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 200;
  std::vector<double> objectives;
  double last_grad = 1e9;
  cfg.on_iteration = [&](const IterationInfo& info) {
    objectives.push_back(info.objective);
    last_grad = info.grad_inf_norm;
    CHECK(info.weights.size() == 81 + 4);
  };
  Model m = train(toy.data, toy.index, cfg);
  CHECK(m.index.frozen());
  CHECK(m.l2_sigma == 10.0);

  REQUIRE(objectives.size() >= 2);
  for (std::size_t i = 1; i < objectives.size(); ++i) {
    CHECK(objectives[i] >= objectives[i - 1] - 1e-9);
  }
  CHECK(last_grad <= cfg.grad_tolerance);

  for (const EncodedSentence& s : toy.data) {
    corpus::LabelSequence decoded = viterbi(build_lattice(s, m));
    for (std::size_t t = 0; t < s.length(); ++t) {
      CHECK(corpus::label_id(decoded[t]) == s.gold[t]);
    }
  }

  Objective at_opt = log_likelihood_and_gradient(toy.data, m);
  double gmax = 0.0;
  for (double g : at_opt.gradient) gmax = std::max(gmax, std::abs(g));
  CHECK(gmax <= cfg.grad_tolerance);
}

TEST_CASE("zero iterations returns zero weights") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 0;
  Model m = train(toy.data, toy.index, cfg);
  CHECK(m.weights.size() == toy.index.size());
  for (double w : m.weights) CHECK(w == 0.0);
}

TEST_CASE("training is deterministic") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 60;
  Model a = train(toy.data, toy.index, cfg);
  Model b = train(toy.data, toy.index, cfg);
  REQUIRE(a.weights.size() == b.weights.size());
  for (std::size_t f = 0; f < a.weights.size(); ++f) CHECK(a.weights[f] == b.weights[f]);
  CHECK(serialize_to_string(a) == serialize_to_string(b));
}

TEST_CASE("training rejects bad inputs") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  CHECK_THROWS_AS(train({}, toy.index, cfg), DataError);
  cfg.l2_sigma = 0.0;
  CHECK_THROWS_AS(train(toy.data, toy.index, cfg), ConfigError);
  cfg.l2_sigma = 10.0;
  CHECK_THROWS_AS(train(toy.data, toy.index, cfg, std::vector<double>(3, 0.0)), ConfigError);
  EncodedSentence unlabeled;
  unlabeled.rows.push_back({});
  std::vector<EncodedSentence> bad = {unlabeled};
  CHECK_THROWS_AS(train(bad, toy.index, cfg), DataError);
}

TEST_CASE("duplicated data with rescaled sigma decodes identically") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.l2_sigma = 5.0;
  cfg.max_iterations = 200;
  Model a = train(toy.data, toy.index, cfg);

  std::vector<EncodedSentence> doubled = toy.data;
  doubled.insert(doubled.end(), toy.data.begin(), toy.data.end());
  TrainConfig cfg2 = cfg;
  cfg2.l2_sigma = 5.0 / std::sqrt(2.0);
  Model b = train(doubled, toy.index, cfg2);

  for (const EncodedSentence& s : toy.data) {
    CHECK(viterbi(build_lattice(s, a)) == viterbi(build_lattice(s, b)));
  }
}

TEST_CASE("warm start does not hurt the objective") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 40;
  Model first = train(toy.data, toy.index, cfg);
  Objective before = log_likelihood_and_gradient(toy.data, first);

  double resumed_first = -1e300;
  TrainConfig cfg2 = cfg;
  cfg2.on_iteration = [&](const IterationInfo& info) {
    if (info.iteration == 0) resumed_first = info.objective;
  };
  Model second = train(toy.data, toy.index, cfg2, first.weights);
  Objective after = log_likelihood_and_gradient(toy.data, second);
  CHECK(resumed_first == doctest::Approx(before.value).epsilon(1e-12));
  CHECK(after.value >= before.value - 1e-9);
}

TEST_CASE("bio transition rules") {
  for (int label = 0; label < kNumLabels; ++label) {
    Label l = corpus::label_from_id(label);
    CHECK(bio_start_allowed(label) == !corpus::is_inside(l));
    for (int prev = 0; prev < kNumLabels; ++prev) {
      Label p = corpus::label_from_id(prev);
      bool want = true;
      if (corpus::is_inside(l)) {
        want = !corpus::is_outside(p) && corpus::entity_type(p) == corpus::entity_type(l);
      }
      CHECK(bio_transition_allowed(prev, label) == want);
    }
  }
}

TEST_CASE("bio mask forces well-formed output") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(rng() % 6);
    Lattice lat = random_lattice(rng, n);
    CHECK(corpus::bio_well_formed(viterbi(lat, true)));
  }
}

TEST_CASE("bio mask redirects an ill-formed maximum") {
  Lattice lat;
  lat.emission.assign(2, {});
  for (auto& row : lat.transition) row.fill(0.0);
  lat.emission[0][static_cast<std::size_t>(corpus::label_id(Label::Outside))] = 1.0;
  lat.emission[0][static_cast<std::size_t>(corpus::label_id(Label::BPer))] = 0.9;
  lat.emission[1][static_cast<std::size_t>(corpus::label_id(Label::IPer))] = 5.0;

  corpus::LabelSequence plain = viterbi(lat, false);
  CHECK(plain == corpus::LabelSequence{Label::Outside, Label::IPer});
  corpus::LabelSequence masked = viterbi(lat, true);
  CHECK(masked == corpus::LabelSequence{Label::BPer, Label::IPer});

  Lattice start;
  start.emission.assign(1, {});
  for (auto& row : start.transition) row.fill(0.0);
  start.emission[0][static_cast<std::size_t>(corpus::label_id(Label::ILoc))] = 3.0;
  start.emission[0][static_cast<std::size_t>(corpus::label_id(Label::BLoc))] = 1.0;
  CHECK(viterbi(start, false) == corpus::LabelSequence{Label::ILoc});
  CHECK(viterbi(start, true) == corpus::LabelSequence{Label::BLoc});
}

TEST_CASE("model file round-trips byte for byte") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 30;
  Model m = train(toy.data, toy.index, cfg);
  m.fingerprint = "families=orthographic;alphabet=cyrillic";

  std::string text = serialize_to_string(m);
  Model back = deserialize_from_string(text);
  CHECK(back.index.size() == m.index.size());
  CHECK(back.l2_sigma == m.l2_sigma);
  CHECK(back.fingerprint == m.fingerprint);
  CHECK(back.index.frozen());
  REQUIRE(back.weights.size() == m.weights.size());
  for (std::size_t f = 0; f < m.weights.size(); ++f) CHECK(back.weights[f] == m.weights[f]);
  CHECK(serialize_to_string(back) == text);

  for (const EncodedSentence& s : toy.data) {
    CHECK(viterbi(build_lattice(s, m)) == viterbi(build_lattice(s, back)));
  }
}

TEST_CASE("truncated model files are rejected") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 5;
  Model m = train(toy.data, toy.index, cfg);
  std::string text = serialize_to_string(m);
  for (std::size_t cut : {std::size_t(0), std::size_t(10), text.size() / 2, text.size() - 5}) {
    CHECK_THROWS_AS(deserialize_from_string(text.substr(0, cut)), DataError);
  }
}

TEST_CASE("corrupt model files are rejected") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 5;
  Model m = train(toy.data, toy.index, cfg);
  std::string text = serialize_to_string(m);

  auto broken = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    auto pos = t.find(from);
    REQUIRE(pos != std::string::npos);
    t.replace(pos, from.size(), to);
    return t;
  };

  CHECK_THROWS_AS(deserialize_from_string(broken("bgner-model 1", "bgner-model 2")), DataError);
  CHECK_THROWS_AS(deserialize_from_string(broken("labels\tB-PER", "labels\tB-PERSON")), DataError);
  CHECK_THROWS_AS(deserialize_from_string(broken("sigma\t", "sigma\t-")), DataError);
  CHECK_THROWS_AS(deserialize_from_string(broken("em\tB-PER W=ivan", "em\tB-XXX W=ivan")),
                  DataError);
  CHECK_THROWS_AS(deserialize_from_string(broken("em\tB-PER W=ivan", "em\tB-PER ivan")), DataError);
  CHECK_THROWS_AS(deserialize_from_string(broken("em\tB-PER W=ivan", "zz\tB-PER W=ivan")),
                  DataError);

  // Duplicate feature line.
  std::string dup = text;
  auto em = dup.find("em\t");
  auto line_end = dup.find('\n', em);
  dup.insert(line_end + 1, dup.substr(em, line_end - em + 1));
  CHECK_THROWS_AS(deserialize_from_string(dup), DataError);

  // Declared count disagrees with the body.
  std::string short_count = text;
  auto fpos = short_count.find("features\t");
  auto fend = short_count.find('\n', fpos);
  short_count.replace(fpos, fend - fpos, "features\t81");
  CHECK_THROWS_AS(deserialize_from_string(short_count), DataError);

  // Non-finite weight.
  std::string nan_weight = text;
  auto em2 = nan_weight.find("em\t");
  auto tab = nan_weight.rfind('\t', nan_weight.find('\n', em2));
  auto end2 = nan_weight.find('\n', em2);
  nan_weight.replace(tab + 1, end2 - tab - 1, "nan");
  CHECK_THROWS_AS(deserialize_from_string(nan_weight), DataError);
}

TEST_CASE("hand-written minimal model file works") {
  const std::string text =
      "bgner-model 1\n"
      "labels\tB-PER I-PER B-ORG I-ORG B-LOC I-LOC B-MISC I-MISC O\n"
      "sigma\tinf\n"
      "fingerprint\t\n"
      "features\t82\n"
      "em\tB-ORG W=Bulgaria\t1.5\n"
      "end\n";
  Model m = deserialize_from_string(text);
  CHECK(m.index.size() == 82);
  CHECK(std::isinf(m.l2_sigma));
  for (std::int32_t id = 0; id < FeatureIndex::kTransitionCount; ++id) {
    CHECK(m.weights[static_cast<std::size_t>(id)] == 0.0);
  }

  pred::ObservationTable obs = {{"W=na"}, {"W=Bulgaria"}};
  corpus::LabelSequence path = viterbi(build_lattice(obs, m));
  CHECK(path[1] == Label::BOrg);

  // Sparse transition lines are also accepted.
  const std::string with_tr =
      "bgner-model 1\n"
      "labels\tB-PER I-PER B-ORG I-ORG B-LOC I-LOC B-MISC I-MISC O\n"
      "sigma\t10\n"
      "fingerprint\tdemo\n"
      "features\t81\n"
      "tr\tB-PER I-PER\t2.25\n"
      "end\n";
  Model t = deserialize_from_string(with_tr);
  CHECK(t.weights[static_cast<std::size_t>(FeatureIndex::transition_id(0, 1))] == 2.25);
  CHECK(t.fingerprint == "demo");
  CHECK(t.l2_sigma == 10.0);
}

TEST_CASE("model file io via disk") {
  ToyProblem toy = toy_problem();
  TrainConfig cfg;
  cfg.max_iterations = 20;
  Model m = train(toy.data, toy.index, cfg);
  const std::string path = "test_crf_model.tmp";
  save_model_file(m, path);
  Model back = load_model_file(path);
  CHECK(serialize_to_string(back) == serialize_to_string(m));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_model_file("does_not_exist.model"), DataError);
}

TEST_SUITE_END();
