#pragma once

// Umbrella header: the full analysis chain, from rate-panel ingestion to
// correlation spectra, spanning trees, scaling fits and synthetic data.

#include "fxnet/common.hpp"
#include "fxnet/groups.hpp"
#include "fxnet/matrix.hpp"
#include "fxnet/mst.hpp"
#include "fxnet/panel.hpp"
#include "fxnet/pipeline.hpp"
#include "fxnet/returns.hpp"
#include "fxnet/rng.hpp"
#include "fxnet/scaling.hpp"
#include "fxnet/spectrum.hpp"
#include "fxnet/sweep.hpp"
#include "fxnet/synth.hpp"
