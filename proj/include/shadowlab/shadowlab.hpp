#pragma once

// Umbrella header: exact shadowability analysis for finite metric dynamical
// systems (finite metric space + permutation).

#include "shadowlab/dyn_system.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/gallery.hpp"
#include "shadowlab/metric_space.hpp"
#include "shadowlab/oracle.hpp"
#include "shadowlab/pointset.hpp"
#include "shadowlab/rational.hpp"
#include "shadowlab/report.hpp"
#include "shadowlab/shadow_engine.hpp"
#include "shadowlab/system_io.hpp"
