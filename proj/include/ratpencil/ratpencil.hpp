#pragma once

#include "ratpencil/checked.hpp"
#include "ratpencil/int_matrix.hpp"
#include "ratpencil/lattice.hpp"
#include "ratpencil/curve_classes.hpp"
#include "ratpencil/minimal_models.hpp"
#include "ratpencil/numeric_types.hpp"
#include "ratpencil/fibres.hpp"
#include "ratpencil/catalog.hpp"
#include "ratpencil/model_file.hpp"
