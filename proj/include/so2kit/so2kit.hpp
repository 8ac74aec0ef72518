#ifndef SO2KIT_SO2KIT_HPP
#define SO2KIT_SO2KIT_HPP

#include "so2kit/classify.hpp"
#include "so2kit/core.hpp"
#include "so2kit/errors.hpp"
#include "so2kit/eval.hpp"
#include "so2kit/expand.hpp"
#include "so2kit/kromgraph.hpp"
#include "so2kit/propsat.hpp"
#include "so2kit/random.hpp"
#include "so2kit/reductions.hpp"
#include "so2kit/scc.hpp"
#include "so2kit/textio.hpp"
#include "so2kit/transform.hpp"

#endif
