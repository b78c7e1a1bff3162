#pragma once

#include "binspec/costmodel.hpp"
#include "binspec/errors.hpp"
#include "binspec/hamiltonian.hpp"
#include "binspec/indicator.hpp"
#include "binspec/io.hpp"
#include "binspec/local_control.hpp"
#include "binspec/product_log.hpp"
#include "binspec/qeep.hpp"
#include "binspec/rng.hpp"
#include "binspec/rqeep.hpp"
#include "binspec/spectrum.hpp"
#include "binspec/tbound.hpp"
#include "binspec/timeseries.hpp"
