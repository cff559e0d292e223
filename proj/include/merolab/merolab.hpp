// merolab.hpp — umbrella header.

#pragma once

#include "aak.hpp"
#include "arcs.hpp"
#include "catalog.hpp"
#include "common.hpp"
#include "cuts.hpp"
#include "diagnostics.hpp"
#include "elliptic.hpp"
#include "hankel.hpp"
#include "interp.hpp"
#include "kvdoc.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "potential.hpp"
#include "runner.hpp"
#include "serialize.hpp"
