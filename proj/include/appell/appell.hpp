#pragma once

// Umbrella header for the appell library: biorthogonal Appell systems for
// non-Gaussian product measures on a finite weighted Hilbert scale, chaos
// coefficient families with (p,q) norms, the S/C transforms, and the
// CS-symbol calculus for operator kernels.

#include "appell/appell_system.hpp"
#include "appell/bisym_tensor.hpp"
#include "appell/cauchy_extraction.hpp"
#include "appell/chaos.hpp"
#include "appell/errors.hpp"
#include "appell/hilbert_scale.hpp"
#include "appell/measure.hpp"
#include "appell/multi_index.hpp"
#include "appell/operator_kernel.hpp"
#include "appell/power_series.hpp"
#include "appell/quadrature.hpp"
#include "appell/sym_tensor.hpp"
#include "appell/transforms.hpp"
