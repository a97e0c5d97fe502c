#pragma once

#include "qafm/beam.hpp"
#include "qafm/dynamics.hpp"
#include "qafm/errors.hpp"
#include "qafm/force.hpp"
#include "qafm/oscillator.hpp"
#include "qafm/quantum.hpp"
#include "qafm/sweep.hpp"
#include "qafm/units.hpp"
#include "qafm/version.hpp"
