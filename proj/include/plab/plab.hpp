#ifndef PLAB_PLAB_HPP
#define PLAB_PLAB_HPP

#include "plab/algebra.hpp"
#include "plab/catalog.hpp"
#include "plab/dirac.hpp"
#include "plab/error.hpp"
#include "plab/fields.hpp"
#include "plab/frobenius.hpp"
#include "plab/groupoid.hpp"
#include "plab/io.hpp"
#include "plab/linalg.hpp"
#include "plab/report.hpp"
#include "plab/rng.hpp"
#include "plab/spray.hpp"
#include "plab/transversal.hpp"
#include "plab/version.hpp"

#endif
