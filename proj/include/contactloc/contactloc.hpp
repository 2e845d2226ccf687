#ifndef CONTACTLOC_CONTACTLOC_HPP
#define CONTACTLOC_CONTACTLOC_HPP

#include "contactloc/belief.hpp"
#include "contactloc/bench.hpp"
#include "contactloc/errors.hpp"
#include "contactloc/experience.hpp"
#include "contactloc/generate.hpp"
#include "contactloc/oracle.hpp"
#include "contactloc/policy.hpp"
#include "contactloc/preprocess.hpp"
#include "contactloc/presets.hpp"
#include "contactloc/rtdp.hpp"
#include "contactloc/scenario.hpp"
#include "contactloc/tbl.hpp"
#include "contactloc/world.hpp"

#endif  // CONTACTLOC_CONTACTLOC_HPP
