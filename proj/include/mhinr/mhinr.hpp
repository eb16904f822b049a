#pragma once

#include "mhinr/error.hpp"
#include "mhinr/nn/adam.hpp"
#include "mhinr/nn/dense_layer.hpp"
#include "mhinr/nn/loss.hpp"
#include "mhinr/nn/sparse_head_layer.hpp"
#include "mhinr/signal/cell_grid.hpp"
#include "mhinr/signal/perlin.hpp"
#include "mhinr/signal/pgm.hpp"
#include "mhinr/signal/resample.hpp"
#include "mhinr/metrics/psnr.hpp"
#include "mhinr/metrics/spearman.hpp"
#include "mhinr/models/checkpoint.hpp"
#include "mhinr/models/counting.hpp"
#include "mhinr/models/trainer.hpp"
#include "mhinr/experiments/commands.hpp"
