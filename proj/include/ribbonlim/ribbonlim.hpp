#pragma once

#include "ribbonlim/arclength.hpp"
#include "ribbonlim/constraints.hpp"
#include "ribbonlim/curve.hpp"
#include "ribbonlim/curves.hpp"
#include "ribbonlim/energy.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/frenet.hpp"
#include "ribbonlim/gamma_lab.hpp"
#include "ribbonlim/io.hpp"
#include "ribbonlim/kernel.hpp"
#include "ribbonlim/parallel.hpp"
#include "ribbonlim/quadrature.hpp"
#include "ribbonlim/solver.hpp"
#include "ribbonlim/surface.hpp"
