#pragma once

#include "cnnbound/cnn.hpp"
#include "cnnbound/dataset.hpp"
#include "cnnbound/errors.hpp"
#include "cnnbound/kernel_machine.hpp"
#include "cnnbound/margin_bound.hpp"
#include "cnnbound/neighborly.hpp"
#include "cnnbound/nn_rule.hpp"
#include "cnnbound/serialize.hpp"
