#pragma once

#include "cfged/dataset_io.hpp"
#include "cfged/edit_path.hpp"
#include "cfged/embedding.hpp"
#include "cfged/error.hpp"
#include "cfged/evaluation.hpp"
#include "cfged/ged.hpp"
#include "cfged/graph.hpp"
#include "cfged/kernels.hpp"
#include "cfged/lap.hpp"
#include "cfged/matrix_io.hpp"
#include "cfged/parallel.hpp"
#include "cfged/retrieval.hpp"
#include "cfged/taxonomy.hpp"
