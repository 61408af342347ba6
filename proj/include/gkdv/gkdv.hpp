#pragma once

#include "gkdv/error.hpp"
#include "gkdv/params.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/field.hpp"
#include "gkdv/spectral_ops.hpp"
#include "gkdv/dispersion.hpp"
#include "gkdv/pade.hpp"
#include "gkdv/series.hpp"
#include "gkdv/traveling_wave.hpp"
#include "gkdv/evolution.hpp"
