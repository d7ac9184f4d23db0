#pragma once

// Umbrella header for the dendro library.

#include "dendro/error.hpp"
#include "dendro/tree.hpp"
#include "dendro/faces.hpp"
#include "dendro/subobject.hpp"
#include "dendro/anodyne.hpp"
#include "dendro/arrow.hpp"
#include "dendro/operad.hpp"
#include "dendro/dset.hpp"
#include "dendro/checks.hpp"
#include "dendro/io.hpp"
