#pragma once

// Umbrella header: admissibility certification for retarded diagonal delay
// systems. Individual modules can be included on their own; this pulls in
// everything.

#include "delaycert/admissibility.hpp"
#include "delaycert/charfun.hpp"
#include "delaycert/costint.hpp"
#include "delaycert/ddesim.hpp"
#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"
#include "delaycert/region.hpp"
#include "delaycert/report_io.hpp"
#include "delaycert/system_spec.hpp"
#include "delaycert/textio.hpp"
