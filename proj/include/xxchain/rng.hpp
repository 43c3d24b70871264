/* Copyright 2026 The xxchain Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef XXCHAIN_RNG_HPP
#define XXCHAIN_RNG_HPP

#include <cstdint>
#include <random>

namespace xxchain {

// splitmix64 finalizer; the basis of the counter-based seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a stream index.
// Realization m of amplitude-index a uses derive_seed(derive_seed(master, a), m),
// so every stream is reproducible in isolation, independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x51ed270b0f4d2c9dULL));
}

// Uniform double in [-1, 1) from the top 53 bits of the engine output.
// Avoids std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform_symmetric(std::mt19937_64& eng) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0,1)
  return 2.0 * u - 1.0;
}

}  // namespace xxchain

#endif  // XXCHAIN_RNG_HPP
