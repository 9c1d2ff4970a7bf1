#pragma once

#include "csvt/estimator.hpp"
#include "csvt/harness.hpp"
#include "csvt/ingest.hpp"
#include "csvt/rng.hpp"
#include "csvt/spectral.hpp"
#include "csvt/synth.hpp"
#include "csvt/theory.hpp"
