#pragma once

#include "dioprime/errors.hpp"
#include "dioprime/numeric.hpp"
#include "dioprime/alpha_engine.hpp"
#include "dioprime/arith_sieve.hpp"
#include "dioprime/smoothing.hpp"
#include "dioprime/expsum.hpp"
#include "dioprime/report.hpp"
#include "dioprime/vaughan.hpp"
#include "dioprime/experiment.hpp"
