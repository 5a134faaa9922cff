#pragma once

#include "haar/errors.hpp"
#include "haar/group.hpp"
#include "haar/chart_dsl.hpp"
#include "haar/chart.hpp"
#include "haar/parametrisations.hpp"
#include "haar/quadrature.hpp"
#include "haar/tensor.hpp"
#include "haar/engine.hpp"
#include "haar/sampling.hpp"
#include "haar/reynolds.hpp"
#include "haar/orbit.hpp"
#include "haar/io.hpp"
