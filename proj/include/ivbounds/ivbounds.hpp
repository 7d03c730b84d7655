#pragma once

#include "ivbounds/emit.hpp"
#include "ivbounds/errors.hpp"
#include "ivbounds/json_io.hpp"
#include "ivbounds/linear_expr.hpp"
#include "ivbounds/lp_core.hpp"
#include "ivbounds/model.hpp"
#include "ivbounds/multival.hpp"
#include "ivbounds/oracle.hpp"
#include "ivbounds/rational.hpp"
#include "ivbounds/rays.hpp"
#include "ivbounds/signatures.hpp"
#include "ivbounds/vertices.hpp"
