#pragma once

#include "sqz/bounds.hpp"
#include "sqz/core.hpp"
#include "sqz/density.hpp"
#include "sqz/error.hpp"
#include "sqz/families.hpp"
#include "sqz/limits.hpp"
#include "sqz/mollifier.hpp"
#include "sqz/moments.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/specfun.hpp"
#include "sqz/summation.hpp"
#include "sqz/truncation.hpp"
