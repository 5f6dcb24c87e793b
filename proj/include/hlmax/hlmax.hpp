#pragma once

#include "hlmax/counterexample.hpp"
#include "hlmax/errors.hpp"
#include "hlmax/grid.hpp"
#include "hlmax/io.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/measure.hpp"
#include "hlmax/multiprecision.hpp"
#include "hlmax/presets.hpp"
#include "hlmax/real.hpp"
#include "hlmax/weaklimit.hpp"
