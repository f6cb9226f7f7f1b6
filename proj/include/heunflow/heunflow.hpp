#pragma once

#include "heunflow/error.hpp"
#include "heunflow/params.hpp"
#include "heunflow/tridiagonal.hpp"
#include "heunflow/jacobi_operator.hpp"
#include "heunflow/series.hpp"
#include "heunflow/perturbation.hpp"
#include "heunflow/ode_spectrum.hpp"
#include "heunflow/special_functions.hpp"
#include "heunflow/asymptotics.hpp"
#include "heunflow/tba.hpp"
#include "heunflow/parallel.hpp"
#include "heunflow/matching.hpp"
#include "heunflow/io.hpp"
