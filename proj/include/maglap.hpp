#pragma once

#include "maglap/bessel.hpp"
#include "maglap/bounds.hpp"
#include "maglap/discretize.hpp"
#include "maglap/eigensolve.hpp"
#include "maglap/error.hpp"
#include "maglap/field.hpp"
#include "maglap/io.hpp"
#include "maglap/quadrature.hpp"
#include "maglap/special.hpp"
#include "maglap/spectral.hpp"
#include "maglap/tridiagonal.hpp"
#include "maglap/verify.hpp"
