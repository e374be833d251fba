// qcd.hpp: umbrella header for the library (the CLI lives under qcd/cli/).

#pragma once

#include "qcd/basis.hpp"
#include "qcd/criticality.hpp"
#include "qcd/hamiltonian.hpp"
#include "qcd/husimi.hpp"
#include "qcd/meanfield.hpp"
#include "qcd/observables.hpp"
#include "qcd/parallel.hpp"
#include "qcd/solver.hpp"
#include "qcd/sparse_operator.hpp"
#include "qcd/validation.hpp"
