#pragma once

#include "pclone/circulant.hpp"
#include "pclone/construction.hpp"
#include "pclone/fn_io.hpp"
#include "pclone/partial_fn.hpp"
#include "pclone/preservation.hpp"
#include "pclone/relation.hpp"
#include "pclone/solver.hpp"
#include "pclone/value_tuple.hpp"
#include "pclone/verification.hpp"

namespace pclone {

inline constexpr const char* version = "0.1.0";

}  // namespace pclone
