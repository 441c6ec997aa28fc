// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "senti/app.hpp"
#include "senti/stemmer.hpp"
#include "support.hpp"

using namespace senti;
namespace st = senti::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome param_count() {
  const auto n = nn::count_parameters(16378, 128, 128, 2);
  nn::ModelConfig c;
  c.vocab_size = 16378;
  const auto arrays = nn::ModelParams<float>::zeros(c).parameter_count();
  return {n == 2228738 && arrays == n, fmt::format("closed form {}, allocated {}", n, arrays)};
}

Outcome reference_metrics() {
  const auto r = eval::report(eval::ConfusionMatrix{67, 58, 787, 51});
  auto f = [](double x) { return eval::round_fixed(x); };
  const std::vector<std::pair<std::string, std::string>> cells{
      {f(r.accuracy), "0.89"},          {f(r.negative.precision), "0.94"}, {f(r.negative.recall), "0.93"},
      {f(r.negative.f1), "0.94"},       {f(r.positive.precision), "0.54"}, {f(r.positive.recall), "0.57"},
      {f(r.positive.f1), "0.55"},       {f(r.macro.precision), "0.74"},    {f(r.macro.recall), "0.75"},
      {f(r.macro.f1), "0.74"},          {f(r.weighted.precision), "0.89"}, {f(r.weighted.recall), "0.89"},
      {f(r.weighted.f1), "0.89"}};
  std::size_t bad = 0;
  for (const auto& [got, want] : cells) bad += got != want;
  const bool supports = r.negative.support == 845 && r.positive.support == 118 && r.total == 963;
  return {bad == 0 && supports, fmt::format("{} of {} cells match, supports {}/{}", cells.size() - bad, cells.size(),
                                            r.negative.support, r.positive.support)};
}

Outcome split_shape() {
  ingest::Dataset ds;
  for (std::size_t i = 0; i < 5629 + 790; ++i)
    ds.add({"r" + std::to_string(i), "", "t", i < 5629 ? Label::Negative : Label::Positive});
  const auto s = ingest::stratified_split(ds, {0.70, 0.15, 0.15, 42});
  const auto neg = s.test.count(Label::Negative), pos = s.test.count(Label::Positive);
  auto near = [](std::size_t a, std::size_t b) { return (a > b ? a - b : b - a) <= 1; };
  return {s.test.size() == 963 && near(neg, 845) && near(pos, 118),
          fmt::format("test {} = {} negative + {} positive", s.test.size(), neg, pos)};
}

Outcome gradients() {
  double worst = 0.0;
  std::size_t checked = 0;
  const int cases = 30;
  for (int seed = 1; seed <= cases; ++seed) {
    const auto r = st::finite_difference_check(st::random_grad_case(static_cast<std::uint64_t>(seed), seed % 3 != 0));
    worst = std::max(worst, r.max_rel_error);
    checked += r.checked;
  }
  return {worst < 1e-4, fmt::format("{} models, {} parameters, max relative error {:.3e}", cases, checked, worst)};
}

Outcome masking() {
  Rng r(77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto gc = st::random_grad_case(1000 + static_cast<std::uint64_t>(trial), trial % 2 == 0);
    const auto& p = gc.params;
    const std::size_t L = 1 + uniform_index(r, 5);
    nn::Example padded{std::vector<std::int32_t>(5 + uniform_index(r, 4), 0), L, uniform_index(r, 2)};
    for (std::size_t t = 0; t < L; ++t)
      padded.indices[t] = static_cast<std::int32_t>(1 + uniform_index(r, p.config.vocab_size - 1));
    nn::Example bare{std::vector<std::int32_t>(padded.indices.begin(), padded.indices.begin() + static_cast<std::ptrdiff_t>(L)),
                     L, padded.label};
    const std::vector<nn::Example> a{padded}, b{bare};
    Rng ra(static_cast<std::uint64_t>(trial)), rb(static_cast<std::uint64_t>(trial));
    const auto ga = nn::run_batch(p, std::span<const nn::Example>(a), gc.weights, true, ra);
    const auto gb = nn::run_batch(p, std::span<const nn::Example>(b), gc.weights, true, rb);
    worst = std::max(worst, std::abs(ga.loss - gb.loss));
    const auto x = ga.grad.arrays(), y = gb.grad.arrays();
    for (std::size_t k = 0; k < nn::kNumArrays; ++k)
      for (std::size_t i = 0; i < x[k].size(); ++i) worst = std::max(worst, std::abs(x[k][i] - y[k][i]));
  }
  return {worst < 1e-12, fmt::format("100 cases, max difference {:.3e}", worst)};
}

nn::ModelConfig small_model(std::size_t V, std::size_t E, std::size_t H, std::size_t max_len) {
  nn::ModelConfig c;
  c.vocab_size = V;
  c.embed_dim = E;
  c.hidden_dim = H;
  c.max_len = max_len;
  return c;
}

Outcome overfit() {
  auto p = nn::init_params<float>(small_model(22, 16, 32, 8), 5);
  const auto data = st::overfit_set();
  train::TrainConfig cfg;
  cfg.epochs = 200;
  cfg.learning_rate = 0.005;
  const auto res = train::train(p, std::span<const nn::Example>(data), std::span<const nn::Example>(data), cfg);
  const auto& last = res.history.back();
  const auto clean = train::evaluate_split(p, std::span<const nn::Example>(data));
  return {last.train_accuracy == 1.0 && last.train_loss < 0.01 && clean.accuracy == 1.0,
          fmt::format("epoch {}: train accuracy {:.4f}, train loss {:.3e}", last.epoch, last.train_accuracy,
                      last.train_loss)};
}

Outcome chance_loss() {
  const auto data = st::random_balanced_set(256, 200, 12, 4);
  auto p = nn::init_params<float>(small_model(200, 32, 32, 12), 8);
  train::TrainConfig cfg;
  cfg.epochs = 1;
  const auto res = train::train(p, std::span<const nn::Example>(data), std::span<const nn::Example>(data), cfg);
  const double l = res.history[0].train_loss;
  return {l >= 0.68 && l <= 0.70, fmt::format("epoch-1 loss {:.4f} (ln 2 = {:.4f})", l, std::log(2.0))};
}

Outcome stemmer() {
  const auto roots = preprocess::load_root_dictionary(st::data_file("kata-dasar.txt"));
  std::ifstream in(st::data_file("stem-golden.tsv"));
  std::size_t pairs = 0, mismatches = 0, unstable = 0;
  for (std::string l; std::getline(in, l);) {
    const auto tab = l.find('\t');
    if (tab == std::string::npos) continue;
    ++pairs;
    const auto got = preprocess::stem(l.substr(0, tab), roots);
    mismatches += got != l.substr(tab + 1);
    unstable += preprocess::stem(got, roots) != got;
  }
  return {pairs >= 200 && mismatches == 0 && unstable == 0,
          fmt::format("{} pairs, {} mismatches, {} not idempotent", pairs, mismatches, unstable)};
}

Outcome determinism() {
  st::TempDir a, b;
  std::ostringstream sink;
  auto run = [&](const st::TempDir& d) {
    config::RunConfig c;
    c.out_dir = d.path().string();
    c.quiet = true;
    app::cmd_train(c, st::data_file("toy-corpus.csv"), {sink, sink});
    return st::slurp(d.file("history.csv"));
  };
  const auto ha = run(a), hb = run(b);
  return {!ha.empty() && ha == hb, fmt::format("history.csv {} bytes, identical: {}", ha.size(), ha == hb)};
}

Outcome eval_oracle() {
  Rng r(2025);
  std::size_t bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(r, 60);
    std::vector<Label> preds(n), truth(n);
    const double bias = uniform01(r);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = uniform01(r) < bias ? Label::Positive : Label::Negative;
      preds[i] = uniform01(r) < 0.5 ? Label::Positive : Label::Negative;
    }
    const auto rep = eval::report(preds, truth);
    const auto o = st::recount(preds, truth);
    auto same = [](double x, double y) { return std::abs(x - y) <= 1e-15; };
    bool ok = same(rep.accuracy, o.accuracy);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& m = rep.of(label_from_index(k));
      ok = ok && same(m.precision, o.rows[k].precision) && same(m.recall, o.rows[k].recall) &&
           same(m.f1, o.rows[k].f1) && m.support == o.rows[k].support;
    }
    ok = ok && same(rep.macro.precision, o.macro.precision) && same(rep.macro.recall, o.macro.recall) &&
         same(rep.macro.f1, o.macro.f1) && same(rep.weighted.precision, o.weighted.precision) &&
         same(rep.weighted.recall, o.weighted.recall) && same(rep.weighted.f1, o.weighted.f1);
    bad += !ok;
  }
  return {bad == 0, fmt::format("1000 vectors, {} disagreements", bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"parameter count", param_count}, {"reference metrics", reference_metrics}, {"split shape", split_shape},
      {"gradient check", gradients},    {"masking", masking},             {"overfit", overfit},
      {"chance loss", chance_loss},     {"stemmer golden", stemmer},      {"determinism", determinism},
      {"eval oracle", eval_oracle}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << fmt::format("{} criterion {}: {} ({}; {:.2f} s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             o.detail, secs);
    failed += !o.pass;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
