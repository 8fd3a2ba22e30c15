#pragma once

#include "dynrel/cardinality.hpp"
#include "dynrel/errors.hpp"
#include "dynrel/io.hpp"
#include "dynrel/linkrec.hpp"
#include "dynrel/ocel.hpp"
#include "dynrel/ocel_json.hpp"
#include "dynrel/ratio.hpp"
#include "dynrel/reftype.hpp"
#include "dynrel/report.hpp"
#include "dynrel/schema.hpp"
#include "dynrel/search.hpp"
#include "dynrel/synth.hpp"
#include "dynrel/timestamp.hpp"
