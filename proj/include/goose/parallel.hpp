#pragma once

namespace goose {

// Runtime switch for the OpenMP kernels. The serial reference paths stay
// available unconditionally; tests pin them against the parallel ones.
namespace parallel {

// Number of threads the kernels will use (1 disables OpenMP dispatch).
int threads();

// 0 restores the OpenMP default.
void set_threads(int n);

// True when a kernel invoked here should spawn a parallel region: more than
// one thread configured and we are not already inside one.
bool active();

}  // namespace parallel

}  // namespace goose
