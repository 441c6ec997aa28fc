// senti: command-line front end for the sentiment toolkit.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "senti/app.hpp"

namespace {

struct Globals {
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quiet = false;
};

senti::config::RunConfig resolve(const Globals& g) {
  senti::config::RunConfig cfg;
  if (!g.config_file.empty()) senti::config::apply_file(cfg, g.config_file);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw senti::InputError("--set expects key=value, got '" + kv + "'");
    senti::config::set(cfg, senti::config::detail::trim(kv.substr(0, eq)), senti::config::detail::trim(kv.substr(eq + 1)));
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.out_dir) cfg.out_dir = *g.out_dir;
  if (g.quiet) cfg.quiet = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Sentiment classification toolkit for Indonesian comments"};
  cli.require_subcommand(1);
  Globals g;
  cli.add_option("--config", g.config_file, "key = value configuration file");
  cli.add_option("--set", g.overrides, "override a configuration key (key=value), repeatable");
  cli.add_option("--seed", g.seed, "random seed");
  cli.add_option("--out-dir", g.out_dir, "output directory");
  cli.add_flag("--quiet", g.quiet, "suppress progress output");

  std::string video_id, out_csv, in_csv, corpus, checkpoint, test_csv, predictions, text;
  int max_pages = 1;

  auto* fetch = cli.add_subcommand("fetch", "download comments for a video into an unlabeled corpus CSV");
  fetch->add_option("--video", video_id, "video id")->required();
  fetch->add_option("--max-pages", max_pages, "number of result pages to request")->check(CLI::NonNegativeNumber);
  fetch->add_option("--output,-o", out_csv, "output CSV")->required();

  auto* prep = cli.add_subcommand("preprocess", "run the text pipeline and add a tokens column");
  prep->add_option("--input,-i", in_csv, "corpus CSV")->required();
  prep->add_option("--output,-o", out_csv, "output CSV")->required();

  auto* trn = cli.add_subcommand("train", "split, build the vocabulary and train the LSTM");
  trn->add_option("--corpus", corpus, "labeled corpus CSV")->required();

  auto* evl = cli.add_subcommand("evaluate", "classification report for a checkpoint or a predictions file");
  evl->add_option("--checkpoint", checkpoint, "model checkpoint");
  evl->add_option("--test", test_csv, "labeled test CSV");
  evl->add_option("--predictions", predictions, "CSV with truth and pred columns");

  auto* prd = cli.add_subcommand("predict", "label text; reads stdin lines when --text is absent");
  prd->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
  prd->add_option("--text", text, "a single comment");

  auto* cmp = cli.add_subcommand("compare", "compare the LSTM with the classical baselines");
  cmp->add_option("--corpus", corpus, "labeled corpus CSV")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : senti::app::kBadInput;
  }

  using namespace senti::app;
  return run_guarded([&] {
    const auto cfg = resolve(g);
    if (*fetch) {
      const auto n = cmd_fetch(cfg, video_id, max_pages, out_csv);
      if (!cfg.quiet) std::cerr << "fetched " << n << " comments\n";
    } else if (*prep) {
      const auto n = cmd_preprocess(cfg, in_csv, out_csv);
      if (!cfg.quiet) std::cerr << "preprocessed " << n << " rows\n";
    } else if (*trn) {
      cmd_train(cfg, corpus);
    } else if (*evl) {
      if (!predictions.empty()) cmd_evaluate_predictions(cfg, predictions);
      else if (!checkpoint.empty() && !test_csv.empty()) cmd_evaluate(cfg, checkpoint, test_csv);
      else throw senti::InputError("evaluate needs --predictions, or --checkpoint with --test");
    } else if (*prd) {
      std::vector<std::string> lines;
      if (prd->count("--text")) {
        lines.push_back(text);
      } else {
        for (std::string l; std::getline(std::cin, l);) lines.push_back(l);
      }
      cmd_predict(cfg, checkpoint, lines);
    } else if (*cmp) {
      cmd_compare(cfg, corpus);
    }
  });
}
