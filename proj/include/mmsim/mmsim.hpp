#pragma once

#include "mmsim/error.hpp"
#include "mmsim/operator.hpp"
#include "mmsim/pauli.hpp"
#include "mmsim/statevector.hpp"
#include "mmsim/circuit.hpp"
#include "mmsim/model.hpp"
#include "mmsim/vqe.hpp"
#include "mmsim/eoh.hpp"
#include "mmsim/brst.hpp"
#include "mmsim/io.hpp"
