#pragma once

// Everything: exact linear algebra, flags, commensurability, the tower,
// isotropic flags, Picard lattices and the command layer.

#include "genflag/cli.hpp"
#include "genflag/commens.hpp"
#include "genflag/fixtures.hpp"
#include "genflag/isotropic.hpp"
#include "genflag/picard.hpp"
#include "genflag/tower.hpp"
