#pragma once

#include "grc/channel.hpp"
#include "grc/code_det.hpp"
#include "grc/code_gpm.hpp"
#include "grc/code_moulin.hpp"
#include "grc/code_pm.hpp"
#include "grc/engine.hpp"
#include "grc/field.hpp"
#include "grc/matrix.hpp"
#include "grc/multilinear.hpp"
#include "grc/poly.hpp"
#include "grc/retrieval.hpp"
#include "grc/topology.hpp"
