#pragma once

#include "kcca/cca.hpp"
#include "kcca/csv.hpp"
#include "kcca/datagen.hpp"
#include "kcca/dataset.hpp"
#include "kcca/errors.hpp"
#include "kcca/evaluate.hpp"
#include "kcca/kernels.hpp"
#include "kcca/linalg.hpp"
#include "kcca/serialization.hpp"
