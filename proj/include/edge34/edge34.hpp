#pragma once

#include "error.hpp"
#include "specfun.hpp"
#include "quadrature.hpp"
#include "ode.hpp"
#include "lax.hpp"
#include "p34.hpp"
#include "psi.hpp"
#include "kernel.hpp"
#include "fredholm.hpp"
#include "rhcheck.hpp"
#include "finiten.hpp"
#include "io.hpp"
