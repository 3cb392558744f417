#include "transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bolab::detail {
namespace {

enum class PlanKind { backward, forward, c2r, r2c };

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan(PlanKind kind, int M) {
  static std::map<std::pair<PlanKind, int>, fftw_plan> plans;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_pair(kind, M);
  if (auto it = plans.find(key); it != plans.end()) return it->second;

  // complex transforms run in place, real ones out of place; the plans must match
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<complex> cin(static_cast<std::size_t>(M)), cout(static_cast<std::size_t>(M));
  std::vector<double> rbuf(static_cast<std::size_t>(M));
  auto* ci = reinterpret_cast<fftw_complex*>(cin.data());
  auto* co = reinterpret_cast<fftw_complex*>(cout.data());
  fftw_plan p = nullptr;
  switch (kind) {
    case PlanKind::backward: p = fftw_plan_dft_1d(M, ci, ci, FFTW_BACKWARD, flags); break;
    case PlanKind::forward: p = fftw_plan_dft_1d(M, ci, ci, FFTW_FORWARD, flags); break;
    case PlanKind::c2r: p = fftw_plan_dft_c2r_1d(M, ci, rbuf.data(), flags); break;
    case PlanKind::r2c: p = fftw_plan_dft_r2c_1d(M, rbuf.data(), co, flags); break;
  }
  if (p == nullptr) throw std::runtime_error("fftw planner failed");
  plans.emplace(key, p);
  return p;
}

fftw_complex* as_fftw(complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

int fft_size_at_least(int n) {
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(n, 4))));
}

int product_grid(int band_a, int band_b, int band_out) {
  const int widest = std::max({band_a, band_b, band_out});
  return fft_size_at_least(std::max(band_a + band_b + band_out + 1, 2 * widest + 1));
}

void to_values(std::span<complex> buffer) {
  const int M = static_cast<int>(buffer.size());
  fftw_execute_dft(cached_plan(PlanKind::backward, M), as_fftw(buffer.data()), as_fftw(buffer.data()));
}

void to_coefficients(std::span<complex> buffer) {
  const int M = static_cast<int>(buffer.size());
  fftw_execute_dft(cached_plan(PlanKind::forward, M), as_fftw(buffer.data()), as_fftw(buffer.data()));
  const double scale = 1.0 / M;
  for (auto& c : buffer) c *= scale;
}

void half_to_values(std::span<complex> half, std::span<double> values) {
  const int M = static_cast<int>(values.size());
  fftw_execute_dft_c2r(cached_plan(PlanKind::c2r, M), as_fftw(half.data()), values.data());
}

void values_to_half(std::span<double> values, std::span<complex> half) {
  const int M = static_cast<int>(values.size());
  fftw_execute_dft_r2c(cached_plan(PlanKind::r2c, M), values.data(), as_fftw(half.data()));
  const double scale = 1.0 / M;
  for (auto& c : half) c *= scale;
}

void RealProductScratch::resize(int M) {
  const auto half = static_cast<std::size_t>(M / 2 + 1);
  half_a.assign(half, {});
  half_b.assign(half, {});
  half_out.assign(half, {});
  va.assign(static_cast<std::size_t>(M), 0.0);
  vb.assign(static_cast<std::size_t>(M), 0.0);
}

void real_product(std::span<const complex> a, int band_a, std::span<const complex> b, int band_b,
                  std::span<complex> out, int band_out, RealProductScratch& scratch) {
  const int M = product_grid(band_a, band_b, band_out);
  if (static_cast<int>(scratch.va.size()) != M) scratch.resize(M);
  std::fill(scratch.half_a.begin(), scratch.half_a.end(), complex{});
  std::fill(scratch.half_b.begin(), scratch.half_b.end(), complex{});
  std::copy_n(a.begin(), band_a + 1, scratch.half_a.begin());
  std::copy_n(b.begin(), band_b + 1, scratch.half_b.begin());
  half_to_values(scratch.half_a, scratch.va);
  half_to_values(scratch.half_b, scratch.vb);
  for (int j = 0; j < M; ++j) scratch.va[static_cast<std::size_t>(j)] *= scratch.vb[static_cast<std::size_t>(j)];
  values_to_half(scratch.va, scratch.half_out);
  std::copy_n(scratch.half_out.begin(), band_out + 1, out.begin());
}

}  // namespace bolab::detail
