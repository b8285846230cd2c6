#pragma once

#include "hopdam/acceleration.hpp"
#include "hopdam/checks.hpp"
#include "hopdam/error.hpp"
#include "hopdam/hc_series.hpp"
#include "hopdam/parallel.hpp"
#include "hopdam/pattern_integrals.hpp"
#include "hopdam/quadrature.hpp"
#include "hopdam/rational.hpp"
#include "hopdam/root_data.hpp"
#include "hopdam/special_fn.hpp"
