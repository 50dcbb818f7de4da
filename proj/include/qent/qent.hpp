#ifndef QENT_QENT_HPP
#define QENT_QENT_HPP

#include "qent/core.hpp"
#include "qent/matrix.hpp"
#include "qent/hilbert.hpp"
#include "qent/hamiltonians.hpp"
#include "qent/schedule.hpp"
#include "qent/protocol.hpp"
#include "qent/dynamics.hpp"
#include "qent/random.hpp"
#include "qent/verification.hpp"
#include "qent/experiments.hpp"
#include "qent/config.hpp"

#endif  // QENT_QENT_HPP
