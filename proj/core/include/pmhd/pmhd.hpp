#pragma once

#include "pmhd/estimator.hpp"
#include "pmhd/family.hpp"
#include "pmhd/fracdiff.hpp"
#include "pmhd/hellinger.hpp"
#include "pmhd/kde.hpp"
#include "pmhd/montecarlo.hpp"
#include "pmhd/process.hpp"
#include "pmhd/residuals.hpp"
#include "pmhd/series_io.hpp"
