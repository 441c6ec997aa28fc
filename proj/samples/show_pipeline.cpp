// Shows each preprocessing stage for the sentences given on the command line.
// Usage: show_pipeline "sentence" ...

#include <iostream>

#include "senti/config.hpp"
#include "senti/preprocess.hpp"

int main(int argc, char** argv) {
  using namespace senti::preprocess;
  const auto dir = senti::config::default_data_dir();
  try {
    auto cfg = load_config({dir + "/kata-dasar.txt", dir + "/stopwords-id.txt", dir + "/slang-id.tsv"});
    const Step order[] = {Step::CaseFold, Step::Clean, Step::Normalize, Step::Stopwords, Step::Stem};
    const char* names[] = {"case fold", "clean", "normalize", "stopwords", "stem"};
    for (int a = 1; a < argc; ++a) {
      std::cout << "input      " << argv[a] << "\n";
      for (auto s : order) cfg.set(s, false);
      for (int k = 0; k < 5; ++k) {
        cfg.set(order[k], true);
        std::cout << names[k] << std::string(11 - std::string(names[k]).size(), ' ') << join(run_pipeline(argv[a], cfg))
                  << "\n";
      }
      std::cout << "\n";
    }
  } catch (const senti::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
