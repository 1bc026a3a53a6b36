#pragma once

#include "pme/config.hpp"
#include "pme/coupling.hpp"
#include "pme/csv.hpp"
#include "pme/epigraph.hpp"
#include "pme/errors.hpp"
#include "pme/metrics.hpp"
#include "pme/model.hpp"
#include "pme/path.hpp"
#include "pme/penalty.hpp"
#include "pme/perspective.hpp"
#include "pme/rng.hpp"
#include "pme/roots.hpp"
#include "pme/selftest.hpp"
#include "pme/solver.hpp"
#include "pme/stacked.hpp"
#include "pme/synthetic.hpp"
