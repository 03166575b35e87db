#pragma once

// Everything in one include.

#include "hrec/analysis.hpp"
#include "hrec/core.hpp"
#include "hrec/csv.hpp"
#include "hrec/experiments.hpp"
#include "hrec/imagebench.hpp"
#include "hrec/modular.hpp"
#include "hrec/random.hpp"
#include "hrec/samplers.hpp"
#include "hrec/signal.hpp"
#include "hrec/solver.hpp"
#include "hrec/spectral.hpp"
