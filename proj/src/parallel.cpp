// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/parallel.hpp"

#include <omp.h>

namespace fasisac {

void set_worker_threads(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

int worker_threads() { return omp_get_max_threads(); }

} // namespace fasisac
