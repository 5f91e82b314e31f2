#pragma once

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/matrix_market.hpp"
#include "eigcount/lu.hpp"
#include "eigcount/qr.hpp"
#include "eigcount/eig.hpp"
#include "eigcount/quadrature.hpp"
#include "eigcount/parallel.hpp"
#include "eigcount/projector.hpp"
#include "eigcount/search.hpp"
#include "eigcount/counter.hpp"
#include "eigcount/eigensolver.hpp"
