#include "goose/parallel.hpp"

#include <omp.h>

namespace goose::parallel {

namespace {
int g_threads = 0;  // 0 = OpenMP default
}

int threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

void set_threads(int n) { g_threads = n < 0 ? 0 : n; }

bool active() { return threads() > 1 && omp_in_parallel() == 0; }

}  // namespace goose::parallel
