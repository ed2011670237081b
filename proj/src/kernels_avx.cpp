// Copyright 2026 The QForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Built with -mavx; keep this file free of inline library code (std::complex,
// Eigen) so no AVX-encoded COMDAT copy can leak into scalar translation units.

#include <cstdint>

#if defined(__AVX__)
#include <immintrin.h>

namespace qforge::kernels::avx {

namespace {

using Index = std::uint64_t;

struct Pattern {
  int positions[64];
  int count;
  Index set_mask;

  Index expand(Index k) const {
    for (int i = 0; i < count; ++i) {
      const int p = positions[i];
      const Index low = k & ((Index{1} << p) - 1);
      k = ((k >> p) << (p + 1)) | low;
    }
    return k | set_mask;
  }
};

Pattern make_pattern(const int* fixed, int n_fixed, Index set_mask) {
  Pattern p{};
  p.count = n_fixed;
  p.set_mask = set_mask;
  for (int i = 0; i < n_fixed; ++i) p.positions[i] = fixed[i];
  for (int i = 1; i < n_fixed; ++i) {
    for (int j = i; j > 0 && p.positions[j - 1] > p.positions[j]; --j) {
      const int tmp = p.positions[j];
      p.positions[j] = p.positions[j - 1];
      p.positions[j - 1] = tmp;
    }
  }
  return p;
}

// x * c for two packed complex numbers, c given as per-lane (re, im) splats.
inline __m256d cmul(__m256d x, __m256d c_re, __m256d c_im) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(x, c_re), _mm256_mul_pd(swapped, c_im));
}

struct Coeff {
  __m256d re;
  __m256d im;
};

inline Coeff splat(const double* c) { return {_mm256_set1_pd(c[0]), _mm256_set1_pd(c[1])}; }

inline Coeff lanes(const double* lo, const double* hi) {
  return {_mm256_setr_pd(lo[0], lo[0], hi[0], hi[0]), _mm256_setr_pd(lo[1], lo[1], hi[1], hi[1])};
}

template <typename F>
void run(Index count, int workers, F&& body) {
  const auto n = static_cast<std::int64_t>(count);
  if (workers <= 1) {
    for (std::int64_t k = 0; k < n; ++k) body(static_cast<Index>(k));
    return;
  }
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t k = 0; k < n; ++k) body(static_cast<Index>(k));
}

}  // namespace

// shape: 0 dense, 1 diagonal, 2 anti-diagonal. m8 = m00 m01 m10 m11 as (re, im).
bool single(double* amps, int n, int target, const int* controls, int n_controls, const double* m8, int shape,
            int workers) {
  int fixed[64];
  Index cmask = 0;
  for (int i = 0; i < n_controls; ++i) {
    fixed[i] = controls[i];
    cmask |= Index{1} << controls[i];
  }
  fixed[n_controls] = target;
  const Pattern pat = make_pattern(fixed, n_controls + 1, cmask);
  const Index iters = Index{1} << (n - pat.count);
  const double* m00 = m8;
  const double* m01 = m8 + 2;
  const double* m10 = m8 + 4;
  const double* m11 = m8 + 6;

  if (pat.positions[0] == 0 && target == 0) {
    // Amplitude pair (i, i+1) sits in one register: [a, b].
    const Coeff diag = lanes(m00, m11);
    const Coeff anti = lanes(m01, m10);
    run(iters, workers, [&](Index k) {
      double* p = amps + 2 * pat.expand(k);
      const __m256d x = _mm256_loadu_pd(p);
      __m256d out;
      if (shape == 1) {
        out = cmul(x, diag.re, diag.im);
      } else {
        const __m256d sw = _mm256_permute2f128_pd(x, x, 0x01);
        out = cmul(sw, anti.re, anti.im);
        if (shape == 0) out = _mm256_add_pd(out, cmul(x, diag.re, diag.im));
      }
      _mm256_storeu_pd(p, out);
    });
    return true;
  }
  if (pat.positions[0] == 0 || iters < 2) return false;

  // Two consecutive pairs per step: reg_a = [i, i+1], reg_b = [i+2^t, i+2^t+1].
  const Index stride = Index{1} << target;
  const Coeff c00 = splat(m00), c01 = splat(m01), c10 = splat(m10), c11 = splat(m11);
  run(iters / 2, workers, [&](Index k) {
    const Index i = pat.expand(2 * k);
    double* pa = amps + 2 * i;
    double* pb = amps + 2 * (i + stride);
    const __m256d a = _mm256_loadu_pd(pa);
    const __m256d b = _mm256_loadu_pd(pb);
    if (shape == 1) {
      _mm256_storeu_pd(pa, cmul(a, c00.re, c00.im));
      _mm256_storeu_pd(pb, cmul(b, c11.re, c11.im));
    } else if (shape == 2) {
      _mm256_storeu_pd(pa, cmul(b, c01.re, c01.im));
      _mm256_storeu_pd(pb, cmul(a, c10.re, c10.im));
    } else {
      _mm256_storeu_pd(pa, _mm256_add_pd(cmul(a, c00.re, c00.im), cmul(b, c01.re, c01.im)));
      _mm256_storeu_pd(pb, _mm256_add_pd(cmul(a, c10.re, c10.im), cmul(b, c11.re, c11.im)));
    }
  });
  return true;
}

// m32: 4x4 row-major complex. Requires every fixed bit above qubit 0.
bool two(double* amps, int n, int t0, int t1, const int* controls, int n_controls, const double* m32, bool diagonal,
         int workers) {
  int fixed[64];
  Index cmask = 0;
  for (int i = 0; i < n_controls; ++i) {
    fixed[i] = controls[i];
    cmask |= Index{1} << controls[i];
  }
  fixed[n_controls] = t0;
  fixed[n_controls + 1] = t1;
  const Pattern pat = make_pattern(fixed, n_controls + 2, cmask);
  const Index iters = Index{1} << (n - pat.count);
  if (pat.positions[0] == 0 || iters < 2) return false;

  const Index off[4] = {0, Index{1} << t0, Index{1} << t1, (Index{1} << t0) | (Index{1} << t1)};
  Coeff c[16];
  for (int i = 0; i < 16; ++i) c[i] = splat(m32 + 2 * i);
  run(iters / 2, workers, [&](Index k) {
    const Index base = pat.expand(2 * k);
    __m256d v[4];
    for (int j = 0; j < 4; ++j) v[j] = _mm256_loadu_pd(amps + 2 * (base | off[j]));
    for (int r = 0; r < 4; ++r) {
      __m256d acc;
      if (diagonal) {
        acc = cmul(v[r], c[5 * r].re, c[5 * r].im);
      } else {
        acc = cmul(v[0], c[4 * r].re, c[4 * r].im);
        for (int j = 1; j < 4; ++j) acc = _mm256_add_pd(acc, cmul(v[j], c[4 * r + j].re, c[4 * r + j].im));
      }
      _mm256_storeu_pd(amps + 2 * (base | off[r]), acc);
    }
  });
  return true;
}

}  // namespace qforge::kernels::avx

#else

namespace qforge::kernels::avx {

bool single(double*, int, int, const int*, int, const double*, int, int) { return false; }
bool two(double*, int, int, int, const int*, int, const double*, bool, int) { return false; }

}  // namespace qforge::kernels::avx

#endif
