#pragma once

#include <array>
#include <span>
#include <string_view>

#include "senti/label.hpp"
#include "senti/nn/model.hpp"
#include "senti/preprocess.hpp"
#include "senti/vocab.hpp"

namespace senti::nn {

struct Prediction {
  Label label = Label::Negative;
  std::array<double, 2> probabilities{};  // [negative, positive]
  bool low_confidence = false;            // nothing survived preprocessing

  double confidence() const { return probabilities[class_index(label)]; }
};

// Inference on already prepared tokens. Ties go to Negative.
template <class T>
Prediction predict_tokens(const preprocess::TokenList& tokens, const ModelParams<T>& p, const vocab::Vocabulary& v) {
  if (p.config.num_classes != kNumClasses) throw InputError("predict: model must have exactly 2 classes");
  const auto seq = vocab::encode(tokens, v, p.config.max_len);
  const auto logits = infer_logits(p, std::span<const std::int32_t>(seq.indices), seq.true_length);
  const auto probs = softmax(std::span<const T>(logits));
  Prediction out;
  out.probabilities = {probs[0], probs[1]};
  out.label = label_from_index(argmax_tie_low(probs));
  out.low_confidence = tokens.empty();
  return out;
}

template <class T>
Prediction predict(std::string_view text, const ModelParams<T>& p, const vocab::Vocabulary& v,
                   const preprocess::PreprocessConfig& cfg) {
  return predict_tokens(preprocess::run_pipeline(text, cfg), p, v);
}

}  // namespace senti::nn
