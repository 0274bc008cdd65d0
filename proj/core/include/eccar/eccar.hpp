#pragma once

#include "eccar/cca_pipeline.hpp"
#include "eccar/csv.hpp"
#include "eccar/errors.hpp"
#include "eccar/evaluation.hpp"
#include "eccar/group_structures.hpp"
#include "eccar/matrix_kernels.hpp"
#include "eccar/model_selection.hpp"
#include "eccar/parallel.hpp"
#include "eccar/rrr_solver.hpp"
#include "eccar/sweep.hpp"
#include "eccar/synthetic_data.hpp"
#include "eccar/types.hpp"
