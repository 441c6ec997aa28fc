// Prints the classification report for a binary confusion matrix.
// Usage: report_from_counts TP FP TN FN

#include <charconv>
#include <cstdint>
#include <cstring>
#include <iostream>

#include "senti/eval.hpp"

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: " << argv[0] << " TP FP TN FN\n";
    return 2;
  }
  std::uint64_t v[4];
  for (int i = 0; i < 4; ++i) {
    const char* s = argv[i + 1];
    const auto r = std::from_chars(s, s + std::strlen(s), v[i]);
    if (r.ec != std::errc() || *r.ptr != '\0') {
      std::cerr << "not a count: " << s << "\n";
      return 2;
    }
  }
  try {
    std::cout << senti::eval::render_text(senti::eval::report(senti::eval::ConfusionMatrix{v[0], v[1], v[2], v[3]}));
  } catch (const senti::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
