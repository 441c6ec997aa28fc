#pragma once

// Umbrella header for the whole toolkit.

#include "senti/app.hpp"
#include "senti/baselines.hpp"
#include "senti/config.hpp"
#include "senti/csv.hpp"
#include "senti/error.hpp"
#include "senti/eval.hpp"
#include "senti/fetch.hpp"
#include "senti/ingest.hpp"
#include "senti/label.hpp"
#include "senti/nn/adam.hpp"
#include "senti/nn/checkpoint.hpp"
#include "senti/nn/layers.hpp"
#include "senti/nn/model.hpp"
#include "senti/nn/predict.hpp"
#include "senti/nn/tensor.hpp"
#include "senti/plot.hpp"
#include "senti/preprocess.hpp"
#include "senti/random.hpp"
#include "senti/stemmer.hpp"
#include "senti/train.hpp"
#include "senti/vocab.hpp"
