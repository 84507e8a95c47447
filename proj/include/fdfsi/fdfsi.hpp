#pragma once

#include "fdfsi/types.hpp"

#include "fdfsi/fem/mapping.hpp"
#include "fdfsi/fem/quadrature.hpp"
#include "fdfsi/fem/reference_element.hpp"
#include "fdfsi/fem/shape_functions.hpp"

#include "fdfsi/mesh/fluid_grid.hpp"
#include "fdfsi/mesh/solid_generators.hpp"
#include "fdfsi/mesh/solid_mesh.hpp"
#include "fdfsi/mesh/solid_mesh_io.hpp"

#include "fdfsi/coupling/coupling_matrix.hpp"

#include "fdfsi/assembly/fluid_operator.hpp"
#include "fdfsi/assembly/global_system.hpp"
#include "fdfsi/assembly/params.hpp"
#include "fdfsi/assembly/solid_operator.hpp"

#include "fdfsi/timestepper/problem.hpp"
#include "fdfsi/timestepper/saddle_solver.hpp"
#include "fdfsi/timestepper/state.hpp"
#include "fdfsi/timestepper/stepper.hpp"

#include "fdfsi/diagnostics/energy.hpp"

#include "fdfsi/io/config.hpp"
#include "fdfsi/io/runner.hpp"
#include "fdfsi/io/timeseries.hpp"
#include "fdfsi/io/vtk.hpp"
