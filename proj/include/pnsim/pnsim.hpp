#pragma once

// Umbrella header for the DFT-s-OFDM phase-noise simulation library.

#include "pnsim/channel.hpp"
#include "pnsim/config.hpp"
#include "pnsim/covariance.hpp"
#include "pnsim/engine.hpp"
#include "pnsim/errors.hpp"
#include "pnsim/estimators.hpp"
#include "pnsim/fft.hpp"
#include "pnsim/oracle.hpp"
#include "pnsim/pn_model.hpp"
#include "pnsim/psd.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/qam.hpp"
#include "pnsim/rng.hpp"
#include "pnsim/waveform.hpp"
