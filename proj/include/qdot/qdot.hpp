#ifndef QDOT_QDOT_HPP
#define QDOT_QDOT_HPP

#include "basis.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "coulomb.hpp"
#include "eigen.hpp"
#include "entangle.hpp"
#include "estimator.hpp"
#include "model.hpp"
#include "mosh.hpp"
#include "ptlimit.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "spectra.hpp"

#endif  // QDOT_QDOT_HPP
