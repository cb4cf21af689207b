#pragma once

#include "dsy/cascade.hpp"
#include "dsy/cutsets.hpp"
#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/kernel_checks.hpp"
#include "dsy/models/alpha_riccati.hpp"
#include "dsy/models/bessel_nse3.hpp"
#include "dsy/models/birth_death.hpp"
#include "dsy/models/catalog.hpp"
#include "dsy/models/complex_burgers.hpp"
#include "dsy/models/geometric_like.hpp"
#include "dsy/models/kpp_fourier.hpp"
#include "dsy/models/mean_field.hpp"
#include "dsy/models/nse_selfsimilar.hpp"
#include "dsy/numerics/densities.hpp"
#include "dsy/numerics/domination.hpp"
#include "dsy/numerics/gamma.hpp"
#include "dsy/numerics/quadrature.hpp"
#include "dsy/parallel.hpp"
#include "dsy/rng.hpp"
#include "dsy/self_similar.hpp"
#include "dsy/stats.hpp"
#include "dsy/version.hpp"
#include "dsy/vertex.hpp"
#include "dsy/experiment/acceptance.hpp"
#include "dsy/experiment/config.hpp"
#include "dsy/experiment/record.hpp"
#include "dsy/experiment/runner.hpp"
