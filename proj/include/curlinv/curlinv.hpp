#pragma once

#include "curlinv/vec.hpp"
#include "curlinv/gauss_legendre.hpp"
#include "curlinv/lebedev.hpp"
#include "curlinv/sphere_rule.hpp"
#include "curlinv/geometry.hpp"
#include "curlinv/smoothing.hpp"
#include "curlinv/kernels.hpp"
#include "curlinv/quadrature.hpp"
#include "curlinv/fields.hpp"
#include "curlinv/parallel.hpp"
#include "curlinv/operators.hpp"
#include "curlinv/verify.hpp"
#include "curlinv/config.hpp"
#include "curlinv/io.hpp"
