#pragma once

#include "sentiscope/analytics.hpp"
#include "sentiscope/corpus.hpp"
#include "sentiscope/csv.hpp"
#include "sentiscope/emotion.hpp"
#include "sentiscope/error.hpp"
#include "sentiscope/ngram.hpp"
#include "sentiscope/pipeline.hpp"
#include "sentiscope/polarity.hpp"
#include "sentiscope/scenario.hpp"
#include "sentiscope/synth.hpp"
#include "sentiscope/textprep.hpp"
#include "sentiscope/timestamp.hpp"
