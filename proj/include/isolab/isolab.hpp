#ifndef ISOLAB_ISOLAB_HPP
#define ISOLAB_ISOLAB_HPP

// Numerical laboratory for isomorphism structures of linear operators:
// spectral membership tests, downward-closed family enumeration, witness
// measures with LP duality certificates, subset selection bounds, the
// norm-reduction/suppression pipeline, and reproducible ensemble reports.

#include "isolab/eig.hpp"
#include "isolab/error.hpp"
#include "isolab/family.hpp"
#include "isolab/lp.hpp"
#include "isolab/matrix.hpp"
#include "isolab/measure.hpp"
#include "isolab/prooftrace.hpp"
#include "isolab/select.hpp"
#include "isolab/subset.hpp"
#include "isolab/testbed.hpp"
#include "isolab/witness.hpp"

#endif  // ISOLAB_ISOLAB_HPP
